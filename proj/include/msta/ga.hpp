#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "msta/pattern.hpp"
#include "msta/row_graph.hpp"

namespace msta {

// What one fitness evaluation minimizes.
//   sll_min : fitness = SLL in dB at the single steer direction (negative)
//   hinge   : fitness = cost(...) against the thresholds (nonnegative)
//   scan    : fitness = worst SLL in dB over scan_set
// A positive max_q adds 100 * max(0, Q - max_q) to any mode (subarray cap).
struct objective_spec {
    enum class kind { sll_min, hinge, scan };
    kind mode = kind::sll_min;
    cost_weights weights;
    double theta0_deg = 0.0;
    double phi0_deg = 0.0;
    std::vector<std::pair<double, double>> scan_set;
    int resolution = 512;
    const element_pattern* element = nullptr;   // null = isotropic
    int max_q = 0;                              // 0 = unlimited
};

struct ga_config {
    int population = 0;                         // 0 = 3 * anchor_rows
    int iterations = 100;                       // K
    double rho_c = 0.9;                         // crossover probability
    double rho_m = 0.01;                        // per-gene mutation probability
    std::uint64_t seed = 1;
    double eta = -std::numeric_limits<double>::infinity();   // stop when best <= eta
    std::uint64_t init_reject_cap = 1000000;    // per-gene redraw cap
    std::uint64_t repair_cap = 10000;           // per-offspring operator redraws
};

struct individual {
    std::vector<std::uint32_t> genes;   // dictionary indices, bottom row first
    double fitness = 0.0;
};

struct run_history {
    std::vector<double> best_fitness;    // per iteration k = 0..k_end
    std::vector<double> mean_fitness;
    std::vector<std::int64_t> evals_cumulative;
    individual best;
    std::int64_t evaluations = 0;
    int iterations_run = 0;              // k_end
    double wall_seconds = 0.0;
};

double evaluate_individual(pattern_workspace& ws, const aperture_spec& spec,
                           const row_dictionary& dict, const std::vector<std::uint32_t>& genes,
                           const objective_spec& objective);

// Iterative optimizer over anchor encodings: roulette-wheel selection on
// (worst - fitness) + span, single-point crossover, per-gene mutation,
// feasibility repair by redrawing the operators, elitism.  Offspring that
// would repeat an already-evaluated string are redrawn (bounded retries,
// fresh selection included) so the evaluation budget goes to new layouts.
// Fitness is evaluated in a fixed serial order, so a (seed, config) pair
// replays to an identical history.
run_history run_ga(const aperture_spec& spec, const row_dictionary& dict,
                   const ga_config& config, const objective_spec& objective);

// One "k, phi_best, phi_mean, evals_cumulative" record per iteration, then a
// final record with the best encoding as space-separated 1-based indices.
std::string format_run_log(const run_history& history);

} // namespace msta
