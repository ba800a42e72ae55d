#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msta/aperture.hpp"
#include "msta/ga.hpp"

namespace msta {

// Everything a run needs, collected from a key=value config file plus
// command-line overrides.  M, N, S are the only keys without defaults.
struct run_config {
    aperture_spec aperture;             // L defaults to 2*S
    double theta0_deg = 0.0;
    double phi0_deg = 0.0;
    std::vector<std::pair<double, double>> scan_set;   // "t:p;t:p;..."

    std::string objective = "sll";      // sll | hinge | scan
    cost_weights weights;

    int population = 0;                 // 0 -> 3 * anchor_rows
    int iterations = 100;
    double rho_c = 0.9;
    double rho_m = 0.01;
    std::optional<std::uint64_t> seed;  // unset -> auto-chosen and printed
    int runs = 1;
    double eta_stop = -1e300;
    int max_q = 0;                      // 0 = unlimited

    int resolution = 512;
    std::string element_pattern_file;

    std::uint64_t enum_cap = 1000000;
    unsigned threads = 0;               // 0 -> hardware concurrency

    // success-rate bookkeeping for multi-run reports (optional)
    std::optional<double> success_sll_db;
    double success_tol_db = 0.05;
};

// '#' starts a comment, blank lines ignored, duplicate keys: last wins.
// throws errc::io_format on anything malformed
std::map<std::string, std::string> parse_config_file(const std::string& path);

// key=value fragments from the command line, applied on top
void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides);

// Validates every key and value; unknown keys are rejected.
// throws errc::io_format (bad key/format) or errc::invalid_instance
run_config make_run_config(const std::map<std::string, std::string>& kv);

objective_spec make_objective(const run_config& cfg, const element_pattern* element);

// one line per config key with its default, for --help output
std::string config_keys_help();

} // namespace msta
