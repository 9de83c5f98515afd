#include <doctest.h>

#include <vector>

#include "mog3p/error.hpp"
#include "mog3p/moea.hpp"
#include "support.hpp"

using namespace mog3p;
using namespace mog3p::moea;
using obj::FitnessVector;

namespace {

FitnessVector fv(double c, double v, std::size_t s) { return {c, v, s}; }

Individual ind(const FitnessVector& f) {
    Individual i;
    i.model.trees = {gp::ExpressionTree::variable(0), gp::ExpressionTree::variable(0)};
    i.fitness = f;
    i.evaluated = true;
    return i;
}

}  // namespace

TEST_CASE("dominance examples") {
    CHECK(dominates(fv(1, 1, 1), fv(2, 2, 2)));
    CHECK_FALSE(dominates(fv(1, 2, 0), fv(2, 1, 0)));
    CHECK_FALSE(dominates(fv(2, 1, 0), fv(1, 2, 0)));
    CHECK_FALSE(dominates(fv(1, 1, 1), fv(1, 1, 1)));
    CHECK(dominates(fv(1, 1, 1), fv(1, 1, 2)));
}

TEST_CASE("dominance is a strict partial order") {
    Rng rng(1);
    std::vector<FitnessVector> f;
    for (int i = 0; i < 60; ++i) f.push_back(testing::random_fitness(rng));
    for (const auto& a : f) {
        CHECK_FALSE(dominates(a, a));
        for (const auto& b : f) {
            CHECK(dominates(a, b) == testing::ref_dominates(a, b));
            if (dominates(a, b)) CHECK_FALSE(dominates(b, a));
            for (const auto& c : f)
                if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
        }
    }
}

TEST_CASE("spea2_assign: chain example") {
    const std::vector<FitnessVector> f{fv(0, 0, 0), fv(1, 1, 1), fv(2, 2, 2)};
    const auto s = spea2_assign(f);
    CHECK(s[0].strength == 2);
    CHECK(s[1].strength == 1);
    CHECK(s[2].strength == 0);
    CHECK(s[0].raw == 0);
    CHECK(s[1].raw == 2);
    CHECK(s[2].raw == 3);
    CHECK(s[0].fitness < 1.0);
    CHECK(s[2].fitness >= 3.0);
}

TEST_CASE("spea2_assign: incomparable and duplicate members") {
    const std::vector<FitnessVector> inc{fv(0, 2, 4), fv(1, 1, 3), fv(2, 0, 2)};
    for (const auto& s : spea2_assign(inc)) {
        CHECK(s.raw == 0);
        CHECK(s.fitness < 1.0);
    }
    const std::vector<FitnessVector> dup{fv(1, 1, 3), fv(1, 1, 3), fv(2, 2, 4)};
    const auto s = spea2_assign(dup);
    CHECK(s[0].raw == s[1].raw);
    CHECK(s[0].strength == 1);
    CHECK(s[2].raw == 2);
}

TEST_CASE("spea2_assign and environmental_selection match the brute-force reference") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.index(50);
        std::vector<FitnessVector> f;
        for (std::size_t i = 0; i < n; ++i) f.push_back(testing::random_fitness(rng));
        const auto s = spea2_assign(f);
        const auto r = testing::ref_spea2(f);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(s[i].strength == r[i].strength);
            CHECK(s[i].raw == r[i].raw);
            CHECK(s[i].sigma_k == r[i].sigma);
            CHECK(s[i].fitness == r[i].fitness);
        }
        const std::size_t cap = 1 + rng.index(n + 5);
        CHECK(environmental_selection(f, s, cap) == testing::ref_select(f, r, cap));
    }
}

TEST_CASE("environmental_selection: worked cases") {
    const std::vector<FitnessVector> five(5, fv(1, 1, 3));
    auto s = spea2_assign(five);
    CHECK(environmental_selection(five, s, 3).size() == 3);

    const std::vector<FitnessVector> mixed{fv(0, 2, 4), fv(1, 1, 3), fv(2, 0, 2), fv(3, 3, 5), fv(4, 4, 6)};
    s = spea2_assign(mixed);
    CHECK(environmental_selection(mixed, s, 10) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(environmental_selection(mixed, s, 4) == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(environmental_selection(mixed, s, 3) == std::vector<std::size_t>{0, 1, 2});

    // capacity below the nondominated count: the crowded middle point goes first
    const std::vector<FitnessVector> line{fv(0, 4, 4), fv(1.9, 2.1, 3.9), fv(2, 2, 4), fv(4, 0, 4)};
    s = spea2_assign(line);
    const auto kept = environmental_selection(line, s, 3);
    CHECK(kept.size() == 3);
    CHECK(kept.front() == 0);
    CHECK(kept.back() == 3);
}

TEST_CASE("environmental_selection over individuals") {
    std::vector<Individual> pop{ind(fv(0, 2, 4)), ind(fv(1, 1, 3)), ind(fv(3, 3, 5))};
    std::vector<Individual> arch{ind(fv(2, 0, 2))};
    spea2_assign(pop, arch);
    std::vector<Individual> u(pop);
    u.insert(u.end(), arch.begin(), arch.end());
    const auto out = environmental_selection(u, 3);
    REQUIRE(out.size() == 3);
    for (const auto& i : out) CHECK(i.spea2.fitness < 1.0);
}

TEST_CASE("tournament selection") {
    Rng rng(7);
    std::vector<Individual> one{ind(fv(1, 1, 1))};
    one[0].spea2.fitness = 5.0;
    CHECK(tournament_select(one, 2, rng) == 0);

    std::vector<Individual> two{ind(fv(1, 1, 1)), ind(fv(2, 2, 2))};
    two[0].spea2.fitness = 0.4;
    two[1].spea2.fitness = 1.4;
    std::size_t wins = 0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) wins += tournament_select(two, 2, rng) == 0;
    // binary tournament with replacement: P(best) = 1 - 1/4
    CHECK(static_cast<double>(wins) / draws >= 0.74 - 0.03);
    CHECK(static_cast<double>(wins) / draws <= 0.76 + 0.03);
    for (int i = 0; i < 200; ++i) CHECK(tournament_select(two, 8, rng) == 0);
}

TEST_CASE("MoeaParams validation") {
    MoeaParams p;
    CHECK_NOTHROW(p.validate());
    p.population = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = MoeaParams{};
    p.tournament_size = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("initial population: ramped half-and-half") {
    Rng rng(3);
    gp::GpParams gp;
    gp.n_features = 4;
    const auto pop = initial_population(gp, 40, rng);
    REQUIRE(pop.size() == 40);
    for (const auto& i : pop) {
        CHECK(i.model.dims() == 2);
        CHECK_FALSE(i.evaluated);
        for (const auto& t : i.model.trees) {
            CHECK_NOTHROW(gp::validate(t, 4, gp.max_depth_init));
        }
    }
}

namespace {

EvolutionConfig small_config(std::size_t pop, std::size_t gens) {
    EvolutionConfig cfg;
    cfg.moea.population = pop;
    cfg.moea.generations = gens;
    cfg.moea.archive_size = pop;
    cfg.moea.tournament_size = 2;
    cfg.gp.max_depth_init = 4;
    cfg.gp.max_depth = 8;
    return cfg;
}

}  // namespace

TEST_CASE("run_evolution: zero generations selects over the initial population") {
    Rng rng(1);
    const auto ds = testing::blobs({{0, 0, 0}, {3, 3, 3}}, 20, 1.0, rng);
    const auto cfg = small_config(20, 0);
    const auto res = run_evolution(ds, cfg, 5);
    CHECK(res.history.size() == 1);
    CHECK(res.archive.size() == 20);
    for (const auto& i : res.archive) CHECK(i.evaluated);

    // the same archive, rebuilt by hand from the initial population
    Rng r(derive_seed(5, 0xe701));
    auto gp = cfg.gp;
    gp.n_features = 3;
    auto pop = initial_population(gp, 20, r);
    obj::ModelEvaluator ev(ds, cfg.objectives, 5);
    std::vector<FitnessVector> f;
    for (auto& i : pop) f.push_back(ev.evaluate(i.model));
    const auto keep = environmental_selection(f, spea2_assign(f), 20);
    REQUIRE(keep.size() == res.archive.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        CHECK(res.archive[k].model == pop[keep[k]].model);
        CHECK(res.archive[k].fitness == f[keep[k]]);
    }
}

TEST_CASE("run_evolution: deterministic and thread-count independent") {
    Rng rng(2);
    const auto ds = testing::blobs({{0, 0, 0}, {2, 2, 0}}, 25, 1.0, rng);
    const auto cfg = small_config(16, 4);
    const auto a = run_evolution(ds, cfg, 11, 1);
    const auto b = run_evolution(ds, cfg, 11, 1);
    const auto c = run_evolution(ds, cfg, 11, 3);
    REQUIRE(a.archive.size() == b.archive.size());
    REQUIRE(a.archive.size() == c.archive.size());
    for (std::size_t i = 0; i < a.archive.size(); ++i) {
        CHECK(a.archive[i].model == b.archive[i].model);
        CHECK(a.archive[i].model == c.archive[i].model);
        CHECK(a.archive[i].fitness == c.archive[i].fitness);
    }
    CHECK(a.history.size() == 5);
    for (const auto& h : a.history) CHECK(h.archive_size <= 16);
}

TEST_CASE("run_evolution: finds a projection for XOR structure") {
    Rng rng(12);
    const auto ds = testing::xor_dataset(rng, 30);
    auto cfg = small_config(60, 15);
    const auto res = run_evolution(ds, cfg, 3);
    double best = 1.0;
    for (const auto& i : res.archive) best = std::min(best, i.fitness.c_error);
    CHECK(best <= 0.05);
}
