#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mog3p/dataset.hpp"
#include "mog3p/expression.hpp"
#include "mog3p/objectives.hpp"
#include "mog3p/rng.hpp"

namespace mog3p::moea {

// Pareto dominance under minimization of all three objectives.
bool dominates(const obj::FitnessVector& a, const obj::FitnessVector& b) noexcept;

struct Spea2Stats {
    std::size_t strength = 0;  // how many union members this one dominates
    std::size_t raw = 0;       // summed strength of everything dominating this one
    double density = 0.5;      // 1 / (sigma_k + 2)
    double fitness = 0.5;      // raw + density; < 1 exactly when nondominated
    double sigma_k = 0.0;      // distance to the k-th nearest neighbour in objective space
};

struct Individual {
    gp::ProjectionModel model;
    obj::FitnessVector fitness;
    bool evaluated = false;
    Spea2Stats spea2;
};

struct MoeaParams {
    std::size_t population = 400;
    std::size_t generations = 100;
    std::size_t archive_size = 100;
    std::size_t tournament_size = 2;

    void validate() const;
    bool operator==(const MoeaParams&) const = default;
};

// Objectives rescaled to [0,1] by the per-objective min/max of the given set;
// constant objectives map to 0.
std::vector<std::array<double, 3>> normalized_objectives(std::span<const obj::FitnessVector> f);

// Strength, raw fitness and k-NN density (k = floor(sqrt(n))) over the set.
std::vector<Spea2Stats> spea2_assign(std::span<const obj::FitnessVector> f);

// Runs spea2_assign over pop followed by archive and stores the stats.
void spea2_assign(std::span<Individual> pop, std::span<Individual> archive);

// Indices (into the assigned set) of the next archive: every nondominated
// member, truncated by lexicographic nearest-neighbour distance profiles when
// there are more than `capacity`, or padded with dominated members in
// ascending fitness order when there are fewer. Throws ConfigError if capacity < 1.
std::vector<std::size_t> environmental_selection(std::span<const obj::FitnessVector> f,
                                                 std::span<const Spea2Stats> stats,
                                                 std::size_t capacity);

std::vector<Individual> environmental_selection(std::span<const Individual> u, std::size_t capacity);

// Index of the tournament winner: smallest fitness, then smaller sigma_k,
// then lower index.
std::size_t tournament_select(std::span<const Individual> archive, std::size_t size, Rng& rng);

struct EvolutionConfig {
    MoeaParams moea;
    gp::GpParams gp;
    obj::ObjectiveConfig objectives;
};

struct HistoryRow {
    std::size_t generation = 0;
    double c_error_min = 0, c_error_mean = 0;
    double v_index_min = 0, v_index_mean = 0;
    double s_size_min = 0, s_size_mean = 0;
    std::size_t archive_size = 0;
};

struct EvolutionResult {
    std::vector<Individual> archive;
    std::vector<HistoryRow> history;  // one row per environmental selection
};

// Ramped half-and-half over depths init_min_depth..max_depth_init.
std::vector<Individual> initial_population(const gp::GpParams& params, std::size_t count, Rng& rng);

// Children from tournament selection on the archive followed by crossover and
// mutation of one uniformly chosen tree per variation event.
std::vector<Individual> breed(std::span<const Individual> archive, const EvolutionConfig& cfg,
                              std::size_t count, Rng& rng);

// Generational SPEA2 loop. `threads` only changes evaluation scheduling;
// the result is identical for every value.
EvolutionResult run_evolution(const Dataset& train, const EvolutionConfig& cfg,
                              std::uint64_t seed, int threads = 1);

}  // namespace mog3p::moea
