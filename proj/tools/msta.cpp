#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "msta/config.hpp"
#include "msta/errors.hpp"
#include "msta/ga.hpp"
#include "msta/layout_io.hpp"
#include "msta/parallel.hpp"
#include "msta/pattern_io.hpp"

namespace {

using namespace msta;

int exit_code(errc kind) {
    switch (kind) {
        case errc::io_format: return 2;
        case errc::resource_limit: return 3;
        default: return 1;   // constraint / infeasibility / contract
    }
}

run_config load_config(const std::string& config_path, const std::vector<std::string>& overrides,
                       const tiling_layout* layout = nullptr) {
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = parse_config_file(config_path);
    apply_overrides(kv, overrides);
    if (layout) {   // the layout file is authoritative for the aperture
        const auto& s = layout->spec;
        char buf[40];
        kv["M"] = std::to_string(s.M);
        kv["N"] = std::to_string(s.N);
        kv["S"] = std::to_string(s.S);
        kv["L"] = std::to_string(s.L);
        std::snprintf(buf, sizeof buf, "%.17g", s.dx);
        kv["dx"] = buf;
        std::snprintf(buf, sizeof buf, "%.17g", s.dy);
        kv["dy"] = buf;
    }
    return make_run_config(kv);
}

std::uint64_t resolve_seed(run_config& cfg) {
    if (!cfg.seed) {
        std::random_device rd;
        cfg.seed = (std::uint64_t(rd()) << 32) ^ rd();
        std::printf("seed=%llu (auto)\n", (unsigned long long)*cfg.seed);
    }
    return *cfg.seed;
}

element_pattern load_element(const run_config& cfg) {
    if (cfg.element_pattern_file.empty()) return element_pattern::isotropic();
    return element_pattern::load_csv(cfg.element_pattern_file);
}

row_dictionary dictionary_for(const run_config& cfg, virtual_grid& grid) {
    grid = to_virtual(cfg.aperture);
    if (grid.anchor_rows < 1 || grid.anchor_cols < 1)
        fail(errc::invalid_instance,
             "aperture is thinner than one large tile; no anchor encoding exists");
    return build_dictionary(grid.anchor_cols, grid.l_hat);
}

int cmd_check(const run_config& cfg, bool no_require_large) {
    tileability_report report = check_tileability(cfg.aperture, !no_require_large);
    for (const auto& reason : report.reasons) std::printf("# %s\n", reason.c_str());
    std::printf("tileable=%s\n", report.tileable ? "true" : "false");
    return report.tileable ? 0 : 1;
}

int cmd_count(const run_config& cfg) {
    virtual_grid grid;
    row_dictionary dict = dictionary_for(cfg, grid);
    big_uint total;
    if (grid.l_hat == 2) {
        total = count_tilings(build_graph(dict), grid.anchor_rows);
    } else {
        total = enumerate_count(dict, grid.anchor_rows, cfg.enum_cap);
    }
    std::printf("H=%zu U=%s (%s) My=%d Nx=%d\n", dict.size(), total.str().c_str(),
                sci4(total).c_str(), grid.anchor_rows, grid.anchor_cols);
    return 0;
}

int cmd_enumerate(run_config cfg, const std::string& out_dir) {
    virtual_grid grid;
    row_dictionary dict = dictionary_for(cfg, grid);
    if (grid.l_hat == 2) {
        big_uint total = count_tilings(build_graph(dict), grid.anchor_rows);
        if (total > cfg.enum_cap) {
            std::printf("U=%s (%s) exceeds enum_cap=%llu; refusing to enumerate\n",
                        total.str().c_str(), sci4(total).c_str(),
                        (unsigned long long)cfg.enum_cap);
            return 3;
        }
    }
    element_pattern element = load_element(cfg);
    objective_spec objective = make_objective(cfg, &element);
    pattern_workspace ws;

    std::vector<std::vector<std::uint32_t>> all_t;
    std::vector<double> fitness;
    enumerate_tilings(dict, grid.anchor_rows, cfg.enum_cap,
                      [&](const std::vector<std::uint32_t>& t) {
                          fitness.push_back(
                              evaluate_individual(ws, cfg.aperture, dict, t, objective));
                          all_t.push_back(t);
                      });

    // worst-to-best fitness trace (stable layout ordering for equal values)
    std::vector<std::size_t> order(fitness.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fitness[a] > fitness[b];
    });
    {
        std::ofstream csv(out_dir + "/fitness_sorted.csv");
        if (!csv) fail(errc::io_format, "cannot write " + out_dir + "/fitness_sorted.csv");
        csv << "rank,fitness\n";
        char buf[64];
        for (std::size_t r = 0; r < order.size(); ++r) {
            std::snprintf(buf, sizeof buf, "%zu,%.10g\n", r + 1, fitness[order[r]]);
            csv << buf;
        }
    }

    double best = fitness[order.back()];
    // co-optimal = equal to the best at the 2-decimal reporting precision
    auto round2 = [](double x) { return std::round(x * 100.0) / 100.0; };
    std::vector<std::size_t> co;
    for (std::size_t i = 0; i < fitness.size(); ++i)
        if (std::abs(round2(fitness[i]) - round2(best)) < 1e-9) co.push_back(i);

    tiling_layout best_layout = decode(cfg.aperture, dict, all_t[order.back()]);
    for (std::size_t k = 0; k < co.size(); ++k) {
        tiling_layout layout = decode(cfg.aperture, dict, all_t[co[k]]);
        write_layout_file(out_dir + "/best_" + std::to_string(k + 1) + ".msta", layout);
    }
    std::printf("layouts=%zu best=%.10g co_optimal=%zu q=%d q_small=%d q_large=%d\n",
                fitness.size(), best, co.size(), best_layout.q(), best_layout.q_small,
                best_layout.q_large);
    return 0;
}

int cmd_optimize(run_config cfg, const std::string& out_dir) {
    virtual_grid grid;
    row_dictionary dict = dictionary_for(cfg, grid);
    std::uint64_t seed0 = resolve_seed(cfg);
    element_pattern element = load_element(cfg);
    objective_spec objective = make_objective(cfg, &element);

    const int runs = cfg.runs;
    std::vector<run_history> histories(static_cast<std::size_t>(runs));
    unsigned threads = cfg.threads ? cfg.threads : default_threads();
    parallel_for(std::size_t(runs), threads, [&](std::size_t i, unsigned) {
        ga_config gc;
        gc.population = cfg.population;
        gc.iterations = cfg.iterations;
        gc.rho_c = cfg.rho_c;
        gc.rho_m = cfg.rho_m;
        gc.eta = cfg.eta_stop;
        gc.seed = seed0 + i;
        histories[i] = run_ga(cfg.aperture, dict, gc, objective);
    });

    pattern_workspace ws;
    std::size_t best_run = 0;
    double mn = 1e300, mx = -1e300, sum = 0.0, sum2 = 0.0;
    int successes = 0;
    std::printf("run,seed,fitness,sll_db,hpbw_az_deg,hpbw_el_deg,directivity_dbi,q,q_small,"
                "q_large,evals,iterations,seconds\n");
    for (std::size_t i = 0; i < histories.size(); ++i) {
        const run_history& h = histories[i];
        {
            std::ofstream log(out_dir + "/run_" + std::to_string(seed0 + i) + ".log");
            if (!log) fail(errc::io_format, "cannot write run log in " + out_dir);
            log << format_run_log(h);
        }
        double f = h.best.fitness;
        mn = std::min(mn, f);
        mx = std::max(mx, f);
        sum += f;
        sum2 += f * f;
        if (cfg.success_sll_db && f <= *cfg.success_sll_db + cfg.success_tol_db) ++successes;
        if (f < histories[best_run].best.fitness ||
            (f == histories[best_run].best.fitness && h.best.genes < histories[best_run].best.genes))
            best_run = i;
        tiling_layout layout = decode(cfg.aperture, dict, h.best.genes);
        metrics_report rep = evaluate_metrics(ws, layout, cfg.theta0_deg, cfg.phi0_deg,
                                              cfg.resolution, element);
        std::printf("%zu,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%d,%d,%lld,%d,%.2f\n", i,
                    (unsigned long long)(seed0 + i), f, rep.sll_db, rep.hpbw_az_deg,
                    rep.hpbw_el_deg, rep.directivity_dbi, layout.q(), layout.q_small,
                    layout.q_large, (long long)h.evaluations, h.iterations_run, h.wall_seconds);
    }
    double mean = sum / runs, var = sum2 / runs - mean * mean;
    std::printf("summary: runs=%d min=%.6f max=%.6f mean=%.6f var=%.6f", runs, mn, mx, mean,
                std::max(var, 0.0));
    if (cfg.success_sll_db)
        std::printf(" success_rate=%.1f%%", 100.0 * successes / runs);
    std::printf("\n");

    tiling_layout best_layout = decode(cfg.aperture, dict, histories[best_run].best.genes);
    write_layout_file(out_dir + "/best.msta", best_layout);
    std::printf("best_run=%zu best_fitness=%.6f layout=%s/best.msta\n", best_run,
                histories[best_run].best.fitness, out_dir.c_str());
    return 0;
}

int cmd_evaluate(const run_config& cfg, const tiling_layout& layout,
                 const std::string& pattern_out, const std::string& cuts_prefix) {
    element_pattern element = load_element(cfg);
    pattern_workspace ws;
    metrics_report rep =
        evaluate_metrics(ws, layout, cfg.theta0_deg, cfg.phi0_deg, cfg.resolution, element);
    std::printf("q=%d\nq_small=%d\nq_large=%d\n", layout.q(), layout.q_small, layout.q_large);
    std::printf("sll_db=%.6f\nhpbw_az_deg=%.6f\nhpbw_el_deg=%.6f\ndirectivity_dbi=%.6f\n",
                rep.sll_db, rep.hpbw_az_deg, rep.hpbw_el_deg, rep.directivity_dbi);
    std::printf("peak_u=%.6f\npeak_v=%.6f\n", rep.peak_u, rep.peak_v);
    if (!cfg.scan_set.empty())
        std::printf("scan_cost_db=%.6f\n",
                    scan_cost(ws, layout, cfg.scan_set, cfg.resolution, element));

    if (!pattern_out.empty() || !cuts_prefix.empty()) {
        const auto centers = tile_centers(layout);
        const auto phases = steering_phases(centers, cfg.theta0_deg, cfg.phi0_deg);
        const auto weights = element_weights(layout, phases);
        pattern_grid grid = compute_pattern(ws, weights, layout.spec, cfg.resolution, element);
        if (!pattern_out.empty()) {
            std::ofstream out(pattern_out);
            if (!out) fail(errc::io_format, "cannot write '" + pattern_out + "'");
            export_pattern_csv(out, grid);
        }
        if (!cuts_prefix.empty()) {
            std::ofstream az(cuts_prefix + "_az.csv"), el(cuts_prefix + "_el.csv");
            if (!az || !el) fail(errc::io_format, "cannot write cut CSVs at '" + cuts_prefix + "'");
            export_cut_csv(az, grid, cut_plane::azimuth);
            export_cut_csv(el, grid, cut_plane::elevation);
        }
    }
    return 0;
}

int cmd_export_pattern(const run_config& cfg, const tiling_layout& layout,
                       const std::string& out_path) {
    element_pattern element = load_element(cfg);
    pattern_workspace ws;
    const auto centers = tile_centers(layout);
    const auto phases = steering_phases(centers, cfg.theta0_deg, cfg.phi0_deg);
    const auto weights = element_weights(layout, phases);
    pattern_grid grid = compute_pattern(ws, weights, layout.spec, cfg.resolution, element);
    std::ofstream out(out_path);
    if (!out) fail(errc::io_format, "cannot write '" + out_path + "'");
    export_pattern_csv(out, grid);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-size square tiling designer for isophoric phased arrays"};
    app.require_subcommand(1);
    app.footer(msta::config_keys_help());

    struct {
        std::string config, out_dir = ".", layout, pattern_out, cuts_prefix, out_path;
        std::vector<std::string> sets;
        bool no_require_large = false;
    } opt;

    auto add_common = [&](CLI::App* cmd, bool with_config = true) {
        if (with_config)
            cmd->add_option("config", opt.config, "key=value config file")->check(CLI::ExistingFile);
        cmd->add_option("--set", opt.sets, "override a config key (key=value, repeatable)");
        cmd->footer(msta::config_keys_help());
    };

    CLI::App* check = app.add_subcommand("check", "tileability of an aperture");
    add_common(check);
    check->add_flag("--no-require-large", opt.no_require_large,
                    "only require divisibility by the small tile side");

    CLI::App* count = app.add_subcommand("count", "count all feasible tilings exactly");
    add_common(count);

    CLI::App* enumerate = app.add_subcommand("enumerate", "enumerate and rank all tilings");
    add_common(enumerate);
    enumerate->add_option("--out-dir", opt.out_dir, "output directory (default .)");

    CLI::App* optimize = app.add_subcommand("optimize", "genetic search over tilings");
    add_common(optimize);
    optimize->add_option("--out-dir", opt.out_dir, "output directory (default .)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "metrics for a stored layout");
    add_common(evaluate);
    evaluate->add_option("--layout", opt.layout, "layout file")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--pattern-out", opt.pattern_out, "write the full pattern CSV here");
    evaluate->add_option("--cuts-out", opt.cuts_prefix, "write principal cuts <prefix>_az/_el.csv");

    CLI::App* exportp = app.add_subcommand("export-pattern", "pattern CSV for a stored layout");
    add_common(exportp);
    exportp->add_option("--layout", opt.layout, "layout file")->required()->check(CLI::ExistingFile);
    exportp->add_option("--out", opt.out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);   // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed())
            return cmd_check(load_config(opt.config, opt.sets), opt.no_require_large);
        if (count->parsed()) return cmd_count(load_config(opt.config, opt.sets));
        if (enumerate->parsed())
            return cmd_enumerate(load_config(opt.config, opt.sets), opt.out_dir);
        if (optimize->parsed())
            return cmd_optimize(load_config(opt.config, opt.sets), opt.out_dir);
        if (evaluate->parsed()) {
            tiling_layout layout = read_layout_file(opt.layout);
            return cmd_evaluate(load_config(opt.config, opt.sets, &layout), layout,
                                opt.pattern_out, opt.cuts_prefix);
        }
        if (exportp->parsed()) {
            tiling_layout layout = read_layout_file(opt.layout);
            return cmd_export_pattern(load_config(opt.config, opt.sets, &layout), layout,
                                      opt.out_path);
        }
    } catch (const msta::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
