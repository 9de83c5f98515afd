#include "mog3p/moea.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "mog3p/error.hpp"
#include "mog3p/parallel.hpp"

namespace mog3p::moea {

namespace {

std::array<double, 3> as_array(const obj::FitnessVector& f) {
    return {f.c_error, f.v_index, static_cast<double>(f.s_size)};
}

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double s = 0.0;
    for (std::size_t m = 0; m < 3; ++m) s += (a[m] - b[m]) * (a[m] - b[m]);
    return std::sqrt(s);
}

}  // namespace

bool dominates(const obj::FitnessVector& a, const obj::FitnessVector& b) noexcept {
    const auto x = as_array(a);
    const auto y = as_array(b);
    bool strictly = false;
    for (std::size_t m = 0; m < 3; ++m) {
        if (x[m] > y[m]) return false;
        if (x[m] < y[m]) strictly = true;
    }
    return strictly;
}

void MoeaParams::validate() const {
    if (population < 1) throw ConfigError("population must be >= 1");
    if (archive_size < 1) throw ConfigError("archive_size must be >= 1");
    if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
}

std::vector<std::array<double, 3>> normalized_objectives(std::span<const obj::FitnessVector> f) {
    std::vector<std::array<double, 3>> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = as_array(f[i]);
    for (std::size_t m = 0; m < 3; ++m) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            lo = i == 0 ? out[i][m] : std::min(lo, out[i][m]);
            hi = i == 0 ? out[i][m] : std::max(hi, out[i][m]);
        }
        const double range = hi - lo;
        for (auto& v : out) v[m] = range > 0.0 ? (v[m] - lo) / range : 0.0;
    }
    return out;
}

std::vector<Spea2Stats> spea2_assign(std::span<const obj::FitnessVector> f) {
    const std::size_t n = f.size();
    std::vector<Spea2Stats> stats(n);
    std::vector<std::vector<std::size_t>> dominated_by(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(f[i], f[j])) {
                ++stats[i].strength;
                dominated_by[j].push_back(i);
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i : dominated_by[j]) stats[j].raw += stats[i].strength;

    const auto pts = normalized_objectives(f);
    const auto k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    std::vector<double> d;
    for (std::size_t i = 0; i < n; ++i) {
        d.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d.push_back(distance(pts[i], pts[j]));
        double sigma = 0.0;
        if (!d.empty()) {
            const std::size_t kth = std::min(k, d.size()) - 1;
            std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kth), d.end());
            sigma = d[kth];
        }
        stats[i].sigma_k = sigma;
        stats[i].density = 1.0 / (sigma + 2.0);
        stats[i].fitness = static_cast<double>(stats[i].raw) + stats[i].density;
    }
    return stats;
}

void spea2_assign(std::span<Individual> pop, std::span<Individual> archive) {
    std::vector<obj::FitnessVector> f;
    f.reserve(pop.size() + archive.size());
    for (const auto& ind : pop) {
        if (!ind.evaluated) throw InvariantError("spea2_assign: unevaluated individual");
        f.push_back(ind.fitness);
    }
    for (const auto& ind : archive) {
        if (!ind.evaluated) throw InvariantError("spea2_assign: unevaluated individual");
        f.push_back(ind.fitness);
    }
    const auto stats = spea2_assign(f);
    for (std::size_t i = 0; i < pop.size(); ++i) pop[i].spea2 = stats[i];
    for (std::size_t i = 0; i < archive.size(); ++i) archive[i].spea2 = stats[pop.size() + i];
}

std::vector<std::size_t> environmental_selection(std::span<const obj::FitnessVector> f,
                                                 std::span<const Spea2Stats> stats,
                                                 std::size_t capacity) {
    if (capacity < 1) throw ConfigError("environmental_selection: capacity must be >= 1");
    if (f.size() != stats.size()) throw InvariantError("environmental_selection: stats size mismatch");
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (stats[i].fitness < 1.0) chosen.push_back(i);

    if (chosen.size() < capacity) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!(stats[i].fitness < 1.0)) rest.push_back(i);
        std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
            return stats[a].fitness < stats[b].fitness;
        });
        for (std::size_t i = 0; i < rest.size() && chosen.size() < capacity; ++i) chosen.push_back(rest[i]);
        return chosen;
    }

    const auto pts = normalized_objectives(f);
    // Pairwise distances among the candidates; truncation removes one member
    // per round, the one whose sorted distance list is lexicographically
    // smallest (ties: lower union index).
    const std::size_t m = chosen.size();
    std::vector<std::vector<double>> dist(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            dist[a][b] = dist[b][a] = distance(pts[chosen[a]], pts[chosen[b]]);

    std::vector<bool> alive(m, true);
    std::size_t remaining = m;
    std::vector<double> best_profile;
    std::vector<double> profile;
    while (remaining > capacity) {
        std::size_t victim = m;
        for (std::size_t a = 0; a < m; ++a) {
            if (!alive[a]) continue;
            profile.clear();
            for (std::size_t b = 0; b < m; ++b)
                if (b != a && alive[b]) profile.push_back(dist[a][b]);
            std::sort(profile.begin(), profile.end());
            if (victim == m || profile < best_profile) {
                victim = a;
                best_profile = profile;
            }
        }
        alive[victim] = false;
        --remaining;
    }
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < m; ++a)
        if (alive[a]) out.push_back(chosen[a]);
    return out;
}

std::vector<Individual> environmental_selection(std::span<const Individual> u, std::size_t capacity) {
    std::vector<obj::FitnessVector> f;
    std::vector<Spea2Stats> s;
    for (const auto& ind : u) {
        f.push_back(ind.fitness);
        s.push_back(ind.spea2);
    }
    std::vector<Individual> out;
    for (std::size_t i : environmental_selection(f, s, capacity)) out.push_back(u[i]);
    return out;
}

std::size_t tournament_select(std::span<const Individual> archive, std::size_t size, Rng& rng) {
    if (archive.empty()) throw InvariantError("tournament_select: empty archive");
    if (size < 1) throw ConfigError("tournament size must be >= 1");
    std::size_t best = rng.index(archive.size());
    for (std::size_t t = 1; t < size; ++t) {
        const std::size_t c = rng.index(archive.size());
        const auto& sc = archive[c].spea2;
        const auto& sb = archive[best].spea2;
        if (sc.fitness < sb.fitness ||
            (sc.fitness == sb.fitness &&
             (sc.sigma_k < sb.sigma_k || (sc.sigma_k == sb.sigma_k && c < best))))
            best = c;
    }
    return best;
}

std::vector<Individual> initial_population(const gp::GpParams& params, std::size_t count, Rng& rng) {
    params.validate();
    const int ramps = params.max_depth_init - params.init_min_depth + 1;
    std::vector<Individual> pop(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int depth = params.init_min_depth + static_cast<int>((i / 2) % static_cast<std::size_t>(ramps));
        const auto method = i % 2 == 0 ? gp::InitMethod::Full : gp::InitMethod::Grow;
        for (std::size_t t = 0; t < params.target_dims; ++t)
            pop[i].model.trees.push_back(gp::random_tree(params.n_features, depth, rng, method));
    }
    return pop;
}

std::vector<Individual> breed(std::span<const Individual> archive, const EvolutionConfig& cfg,
                              std::size_t count, Rng& rng) {
    std::vector<Individual> children;
    children.reserve(count + 1);
    const auto& gp = cfg.gp;
    while (children.size() < count) {
        Individual a;
        Individual b;
        a.model = archive[tournament_select(archive, cfg.moea.tournament_size, rng)].model;
        b.model = archive[tournament_select(archive, cfg.moea.tournament_size, rng)].model;
        if (rng.bernoulli(gp.crossover_rate)) {
            const std::size_t t = rng.index(a.model.dims());
            auto [x, y] = gp::subtree_crossover(a.model.trees[t], b.model.trees[t], gp.max_depth, rng);
            a.model.trees[t] = std::move(x);
            b.model.trees[t] = std::move(y);
        }
        for (Individual* child : {&a, &b}) {
            if (rng.bernoulli(gp.mutation_rate)) {
                const std::size_t t = rng.index(child->model.dims());
                child->model.trees[t] = gp::subtree_mutation(child->model.trees[t], gp, rng);
            }
        }
        children.push_back(std::move(a));
        if (children.size() < count) children.push_back(std::move(b));
    }
    return children;
}

namespace {

std::string model_key(const gp::ProjectionModel& m) {
    std::string key;
    for (const auto& t : m.trees) {
        for (const auto& n : t.nodes()) {
            key += n.is_function() ? static_cast<char>('A' + static_cast<int>(n.symbol)) : 'v';
            if (!n.is_function()) key += std::to_string(n.feature);
            key += ' ';
        }
        key += '|';
    }
    return key;
}

HistoryRow summarize(std::size_t generation, std::span<const Individual> archive) {
    HistoryRow h;
    h.generation = generation;
    h.archive_size = archive.size();
    if (archive.empty()) return h;
    h.c_error_min = h.v_index_min = h.s_size_min = 1e300;
    for (const auto& ind : archive) {
        const auto& f = ind.fitness;
        h.c_error_min = std::min(h.c_error_min, f.c_error);
        h.v_index_min = std::min(h.v_index_min, f.v_index);
        h.s_size_min = std::min(h.s_size_min, static_cast<double>(f.s_size));
        h.c_error_mean += f.c_error;
        h.v_index_mean += f.v_index;
        h.s_size_mean += static_cast<double>(f.s_size);
    }
    const auto n = static_cast<double>(archive.size());
    h.c_error_mean /= n;
    h.v_index_mean /= n;
    h.s_size_mean /= n;
    return h;
}

}  // namespace

EvolutionResult run_evolution(const Dataset& train, const EvolutionConfig& config,
                              std::uint64_t seed, int threads) {
    EvolutionConfig cfg = config;
    cfg.gp.n_features = train.d();
    cfg.gp.validate();
    cfg.moea.validate();
    cfg.objectives.validate();

    const obj::ModelEvaluator evaluator(train, cfg.objectives, seed);
    Rng rng(derive_seed(seed, 0xe701));
    std::map<std::string, obj::FitnessVector> cache;

    auto evaluate_all = [&](std::vector<Individual>& pop) {
        // Distinct unseen models are gathered in population order, scored in
        // parallel into fixed slots, then published to the cache.
        std::vector<std::string> keys(pop.size());
        std::vector<std::size_t> todo;
        std::map<std::string, std::size_t> pending;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (pop[i].evaluated) continue;
            keys[i] = model_key(pop[i].model);
            if (!cache.contains(keys[i]) && !pending.contains(keys[i])) {
                pending.emplace(keys[i], todo.size());
                todo.push_back(i);
            }
        }
        std::vector<obj::FitnessVector> scores(todo.size());
        parallel_for(todo.size(), threads,
                     [&](std::size_t j) { scores[j] = evaluator.evaluate(pop[todo[j]].model); });
        for (std::size_t j = 0; j < todo.size(); ++j) cache.emplace(keys[todo[j]], scores[j]);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (pop[i].evaluated) continue;
            pop[i].fitness = cache.at(keys[i]);
            pop[i].evaluated = true;
        }
    };

    EvolutionResult result;
    std::vector<Individual> pop = initial_population(cfg.gp, cfg.moea.population, rng);
    std::vector<Individual> archive;
    for (std::size_t gen = 0;; ++gen) {
        evaluate_all(pop);
        spea2_assign(pop, archive);
        std::vector<Individual> u;
        u.reserve(pop.size() + archive.size());
        std::move(pop.begin(), pop.end(), std::back_inserter(u));
        std::move(archive.begin(), archive.end(), std::back_inserter(u));
        archive = environmental_selection(u, cfg.moea.archive_size);
        result.history.push_back(summarize(gen, archive));
        if (gen == cfg.moea.generations) break;
        pop = breed(archive, cfg, cfg.moea.population, rng);
    }
    result.archive = std::move(archive);
    return result;
}

}  // namespace mog3p::moea
