#include "msta/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "msta/errors.hpp"
#include "msta/rng.hpp"

namespace msta {

namespace {

std::uint64_t dilate(std::uint64_t word, int l_hat) {
    std::uint64_t out = word;
    for (int s = 1; s < l_hat; ++s) out |= (word << s) | (word >> s);
    return out;
}

bool better(double fa, const std::vector<std::uint32_t>& ta, double fb,
            const std::vector<std::uint32_t>& tb) {
    if (fa != fb) return fa < fb;
    return ta < tb;   // deterministic tie-break: lexicographically smallest
}

// Offspring that repeat an already-evaluated string burn budget without
// learning anything, which matters a lot here: the search spaces are small
// enough that a converged population would otherwise spend most of its
// evaluations on clones of the champion.  Each child gets this many redraw
// rounds (fresh selection + operators) to land on an unseen string before a
// repeat is accepted anyway -- the fallback keeps degenerate instances
// (e.g. a dictionary too small to fill the population distinctly) legal.
constexpr std::uint64_t kRevisitRetryCap = 15;

} // namespace

double evaluate_individual(pattern_workspace& ws, const aperture_spec& spec,
                           const row_dictionary& dict, const std::vector<std::uint32_t>& genes,
                           const objective_spec& objective) {
    tiling_layout layout = decode(spec, dict, genes);
    // partition sanity: tile areas must add up to the whole aperture
    if (std::int64_t(layout.q_small) * spec.S * spec.S +
            std::int64_t(layout.q_large) * spec.L * spec.L !=
        std::int64_t(spec.M) * spec.N)
        fail(errc::contract, "decoded layout does not cover the aperture");

    const element_pattern iso;
    const element_pattern& ep = objective.element ? *objective.element : iso;
    double fitness;
    switch (objective.mode) {
        case objective_spec::kind::sll_min: {
            metrics_report rep = evaluate_metrics(ws, layout, objective.theta0_deg,
                                                  objective.phi0_deg, objective.resolution, ep,
                                                  false, false);
            fitness = rep.sll_db;
            break;
        }
        case objective_spec::kind::hinge: {
            bool need_bw = objective.weights.w_bw > 0.0;
            metrics_report rep = evaluate_metrics(ws, layout, objective.theta0_deg,
                                                  objective.phi0_deg, objective.resolution, ep,
                                                  need_bw, false);
            fitness = cost(rep.sll_db, rep.hpbw_az_deg, rep.hpbw_el_deg, objective.weights);
            break;
        }
        case objective_spec::kind::scan:
            fitness = scan_cost(ws, layout, objective.scan_set, objective.resolution, ep);
            break;
        default:
            fail(errc::contract, "unknown objective");
    }
    if (objective.max_q > 0 && layout.q() > objective.max_q)
        fitness += 100.0 * (layout.q() - objective.max_q);
    return fitness;
}

run_history run_ga(const aperture_spec& spec, const row_dictionary& dict,
                   const ga_config& config, const objective_spec& objective) {
    const auto t_start = std::chrono::steady_clock::now();
    const virtual_grid grid = to_virtual(spec);
    if (grid.anchor_rows < 1 || grid.anchor_cols < 1)
        fail(errc::invalid_instance, "aperture is thinner than one large tile; nothing to optimize");
    if (dict.word_bits != grid.anchor_cols || dict.l_hat != grid.l_hat)
        fail(errc::contract, "dictionary does not match this aperture");
    const int v = grid.anchor_rows;
    const std::size_t h = dict.words.size();
    const int pop = config.population > 0 ? config.population : 3 * v;
    if (pop < 2) fail(errc::contract, "population must be >= 2");
    if (config.iterations < 0) fail(errc::contract, "iteration count must be >= 0");
    if (config.rho_c < 0.0 || config.rho_c > 1.0 || config.rho_m < 0.0 || config.rho_m > 1.0)
        fail(errc::contract, "operator probabilities must lie in [0, 1]");
    if (objective.mode == objective_spec::kind::scan && objective.scan_set.empty())
        fail(errc::contract, "scan objective requires a steering set");

    std::vector<std::uint64_t> dil(h);
    for (std::size_t i = 0; i < h; ++i) dil[i] = dilate(dict.words[i], dict.l_hat);

    rng64 rng(config.seed);
    pattern_workspace ws;

    // gene-by-gene conditional sampling: uniform proposals per gene, redrawn
    // until compatible with the rows already fixed below (the all-zeros word
    // is compatible with anything, so this always terminates)
    auto random_individual = [&]() {
        std::vector<std::uint32_t> genes(static_cast<std::size_t>(v));
        for (int i = 0; i < v; ++i) {
            std::uint64_t rejects = 0;
            for (;;) {
                auto g = std::uint32_t(rng.below(h));
                bool ok = true;
                int back = std::min(dict.l_hat - 1, i);
                for (int gap = 1; gap <= back && ok; ++gap)
                    ok = (dict.words[g] & dil[genes[std::size_t(i - gap)]]) == 0;
                if (ok) {
                    genes[std::size_t(i)] = g;
                    break;
                }
                if (++rejects > config.init_reject_cap)
                    fail(errc::resource_limit, "initialization rejection cap exceeded");
            }
        }
        return genes;
    };

    std::vector<individual> population(static_cast<std::size_t>(pop));
    for (auto& ind : population) ind.genes = random_individual();

    run_history history;
    std::int64_t evals = 0;
    std::set<std::vector<std::uint32_t>> seen;
    auto evaluate_population = [&](std::size_t first) {
        for (std::size_t p = first; p < population.size(); ++p) {
            population[p].fitness =
                evaluate_individual(ws, spec, dict, population[p].genes, objective);
            seen.insert(population[p].genes);
            ++evals;
        }
    };
    evaluate_population(0);

    individual best = population[0];
    for (const auto& ind : population)
        if (better(ind.fitness, ind.genes, best.fitness, best.genes)) best = ind;

    auto record = [&]() {
        double sum = 0.0;
        for (const auto& ind : population) sum += ind.fitness;
        history.best_fitness.push_back(best.fitness);
        history.mean_fitness.push_back(sum / double(pop));
        history.evals_cumulative.push_back(evals);
    };
    record();

    // roulette weights: (worst - phi) + span, so the generation's best draws
    // exactly twice the weight of its worst at any fitness scale -- enough
    // pull to exploit, gentle enough that small populations stay mixed.
    // Degenerate generations (all equal) select uniformly.
    auto select_parent = [&]() -> const individual& {
        double worst = population[0].fitness, bestf = population[0].fitness;
        for (const auto& ind : population) {
            worst = std::max(worst, ind.fitness);
            bestf = std::min(bestf, ind.fitness);
        }
        double span = worst - bestf;
        if (span <= 0.0) return population[rng.below(population.size())];
        double total = 0.0;
        for (const auto& ind : population) total += (worst - ind.fitness) + span;
        double target = rng.unit() * total, acc = 0.0;
        for (const auto& ind : population) {
            acc += (worst - ind.fitness) + span;
            if (target < acc) return ind;
        }
        return population.back();
    };

    int k = 0;
    while (k < config.iterations && !(best.fitness <= config.eta)) {
        std::vector<individual> next;
        next.reserve(std::size_t(pop));
        next.push_back(best);   // elitism: best-so-far survives unchanged
        for (int slot = 1; slot < pop; ++slot) {
            std::vector<std::uint32_t> child;
            std::uint64_t attempts = 0;
            for (std::uint64_t round = 0;; ++round) {
                const individual& pa = select_parent();
                const individual& pb = select_parent();
                for (;;) {
                    child = pa.genes;
                    if (v > 1 && rng.unit() < config.rho_c) {
                        auto cut = std::size_t(1 + rng.below(std::uint64_t(v - 1)));
                        std::copy(pb.genes.begin() + long(cut), pb.genes.end(),
                                  child.begin() + long(cut));
                    }
                    for (auto& g : child)
                        if (rng.unit() < config.rho_m) g = std::uint32_t(rng.below(h));
                    if (is_feasible(dict, child)) break;
                    if (++attempts >= config.repair_cap)
                        fail(errc::resource_limit, "offspring repair cap exceeded");
                }
                if (round >= kRevisitRetryCap) break;   // give up: accept a repeat
                bool repeat = seen.count(child) != 0;
                for (std::size_t p = 0; p < next.size() && !repeat; ++p)
                    repeat = next[p].genes == child;
                if (!repeat) break;
            }
            next.push_back({std::move(child), 0.0});
        }
        population.swap(next);
        evaluate_population(1);
        for (const auto& ind : population)
            if (better(ind.fitness, ind.genes, best.fitness, best.genes)) best = ind;
        ++k;
        record();
    }

    history.best = best;
    history.evaluations = evals;
    history.iterations_run = k;
    history.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return history;
}

std::string format_run_log(const run_history& history) {
    std::string out;
    char buf[128];
    for (std::size_t k = 0; k < history.best_fitness.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%lld\n", k, history.best_fitness[k],
                      history.mean_fitness[k], (long long)history.evals_cumulative[k]);
        out += buf;
    }
    out += "best_t=";
    for (std::size_t i = 0; i < history.best.genes.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(history.best.genes[i] + 1);   // 1-based in logs
    }
    out += '\n';
    return out;
}

} // namespace msta
