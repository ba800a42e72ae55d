#include "msta/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>

#include "msta/errors.hpp"

namespace msta {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "M", "N", "S", "L", "dx", "dy",
        "theta0_deg", "phi0_deg", "scan",
        "objective", "w_sl", "w_bw", "eta_sll_db", "eta_az_deg", "eta_el_deg",
        "P", "K", "rho_c", "rho_m", "seed", "runs", "eta_stop", "max_q",
        "resolution", "element_pattern", "enum_cap", "threads",
        "success_sll_db", "success_tol_db",
    };
    return keys;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long long to_ll(const std::string& key, const std::string& v) {
    long long out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(errc::io_format, "key '" + key + "': '" + v + "' is not an integer");
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(errc::io_format, "key '" + key + "': '" + v + "' is not a nonnegative integer");
    return out;
}

double to_dbl(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double out = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        fail(errc::io_format, "key '" + key + "': '" + v + "' is not a number");
    return out;
}

std::vector<std::pair<double, double>> parse_scan(const std::string& v) {
    std::vector<std::pair<double, double>> set;
    std::size_t pos = 0;
    while (pos < v.size()) {
        std::size_t semi = v.find(';', pos);
        std::string item = trim(v.substr(pos, semi == std::string::npos ? semi : semi - pos));
        pos = semi == std::string::npos ? v.size() : semi + 1;
        if (item.empty()) continue;
        std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            fail(errc::io_format, "scan entries must look like 'theta:phi', got '" + item + "'");
        set.emplace_back(to_dbl("scan", trim(item.substr(0, colon))),
                         to_dbl("scan", trim(item.substr(colon + 1))));
    }
    if (set.empty()) fail(errc::io_format, "scan list is empty");
    return set;
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_format, "cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail(errc::io_format,
                 "config line " + std::to_string(line_no) + " is not 'key = value': " + t);
        std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (key.empty()) fail(errc::io_format, "empty key at config line " + std::to_string(line_no));
        kv[key] = value;   // last occurrence wins
    }
    return kv;
}

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides) {
    for (const std::string& item : overrides) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            fail(errc::io_format, "override '" + item + "' is not key=value");
        kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
}

run_config make_run_config(const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv)
        if (!known_keys().count(key)) fail(errc::io_format, "unknown config key '" + key + "'");
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&](const char* key) -> const std::string& {
        const std::string* v = get(key);
        if (!v) fail(errc::io_format, std::string("missing required key '") + key + "'");
        return *v;
    };

    run_config cfg;
    cfg.aperture.M = int(to_ll("M", require("M")));
    cfg.aperture.N = int(to_ll("N", require("N")));
    cfg.aperture.S = int(to_ll("S", require("S")));
    cfg.aperture.L = get("L") ? int(to_ll("L", *get("L"))) : 2 * cfg.aperture.S;
    if (auto* v = get("dx")) cfg.aperture.dx = to_dbl("dx", *v);
    if (auto* v = get("dy")) cfg.aperture.dy = to_dbl("dy", *v);
    if (auto* v = get("theta0_deg")) cfg.theta0_deg = to_dbl("theta0_deg", *v);
    if (auto* v = get("phi0_deg")) cfg.phi0_deg = to_dbl("phi0_deg", *v);
    if (auto* v = get("scan")) cfg.scan_set = parse_scan(*v);

    if (auto* v = get("objective")) {
        if (*v != "sll" && *v != "hinge" && *v != "scan")
            fail(errc::io_format, "objective must be sll, hinge, or scan");
        cfg.objective = *v;
    }
    if (cfg.objective == "scan" && cfg.scan_set.empty())
        fail(errc::io_format, "objective=scan requires a scan list");
    if (auto* v = get("w_sl")) cfg.weights.w_sl = to_dbl("w_sl", *v);
    if (auto* v = get("w_bw")) cfg.weights.w_bw = to_dbl("w_bw", *v);
    if (auto* v = get("eta_sll_db")) cfg.weights.eta_sll_db = to_dbl("eta_sll_db", *v);
    if (auto* v = get("eta_az_deg")) cfg.weights.eta_az_deg = to_dbl("eta_az_deg", *v);
    if (auto* v = get("eta_el_deg")) cfg.weights.eta_el_deg = to_dbl("eta_el_deg", *v);

    if (auto* v = get("P")) cfg.population = int(to_ll("P", *v));
    if (auto* v = get("K")) cfg.iterations = int(to_ll("K", *v));
    if (auto* v = get("rho_c")) cfg.rho_c = to_dbl("rho_c", *v);
    if (auto* v = get("rho_m")) cfg.rho_m = to_dbl("rho_m", *v);
    if (auto* v = get("seed")) cfg.seed = to_u64("seed", *v);
    if (auto* v = get("runs")) cfg.runs = int(to_ll("runs", *v));
    if (auto* v = get("eta_stop")) cfg.eta_stop = to_dbl("eta_stop", *v);
    if (auto* v = get("max_q")) cfg.max_q = int(to_ll("max_q", *v));

    if (auto* v = get("resolution")) cfg.resolution = int(to_ll("resolution", *v));
    if (auto* v = get("element_pattern")) cfg.element_pattern_file = *v;
    if (auto* v = get("enum_cap")) cfg.enum_cap = to_u64("enum_cap", *v);
    if (auto* v = get("threads")) cfg.threads = unsigned(to_u64("threads", *v));
    if (auto* v = get("success_sll_db")) cfg.success_sll_db = to_dbl("success_sll_db", *v);
    if (auto* v = get("success_tol_db")) cfg.success_tol_db = to_dbl("success_tol_db", *v);

    if (cfg.runs < 1) fail(errc::io_format, "runs must be >= 1");
    if (cfg.resolution < 64) fail(errc::io_format, "resolution must be >= 64");
    return cfg;
}

objective_spec make_objective(const run_config& cfg, const element_pattern* element) {
    objective_spec obj;
    if (cfg.objective == "sll") obj.mode = objective_spec::kind::sll_min;
    else if (cfg.objective == "hinge") obj.mode = objective_spec::kind::hinge;
    else obj.mode = objective_spec::kind::scan;
    obj.weights = cfg.weights;
    obj.theta0_deg = cfg.theta0_deg;
    obj.phi0_deg = cfg.phi0_deg;
    obj.scan_set = cfg.scan_set;
    obj.resolution = cfg.resolution;
    obj.element = element && !element->is_isotropic() ? element : nullptr;
    obj.max_q = cfg.max_q;
    return obj;
}

std::string config_keys_help() {
    return "config keys (key=value file or --set overrides):\n"
           "  M, N            aperture size in elements (required)\n"
           "  S               small tile side in elements (required)\n"
           "  L               large tile side (default 2*S; multiple of S, L/S >= 2)\n"
           "  dx, dy          element spacing in wavelengths (default 0.5)\n"
           "  theta0_deg      steering theta (default 0)\n"
           "  phi0_deg        steering phi (default 0)\n"
           "  scan            steer list 'theta:phi;theta:phi;...' (objective=scan)\n"
           "  objective       sll | hinge | scan (default sll)\n"
           "  w_sl, w_bw      hinge objective weights (default 1, 0)\n"
           "  eta_sll_db      SLL threshold, dB (default 0)\n"
           "  eta_az_deg      azimuth HPBW threshold, deg (default inf)\n"
           "  eta_el_deg      elevation HPBW threshold, deg (default inf)\n"
           "  P               population size (default 3 * anchor rows)\n"
           "  K               iteration count (default 100)\n"
           "  rho_c, rho_m    crossover / per-gene mutation rates (default 0.9, 0.01)\n"
           "  seed            64-bit RNG seed (default: auto-chosen and printed)\n"
           "  runs            optimize run count, seeds seed..seed+runs-1 (default 1)\n"
           "  eta_stop        stop early when best fitness <= this (default off)\n"
           "  max_q           penalize layouts with more than this many tiles (default off)\n"
           "  resolution      (u,v) grid resolution R, R >= 64 (default 512)\n"
           "  element_pattern tabulated element pattern CSV (default isotropic)\n"
           "  enum_cap        enumeration refusal cap (default 1000000)\n"
           "  threads         worker threads (default: hardware)\n"
           "  success_sll_db  success threshold for run statistics (default off)\n"
           "  success_tol_db  tolerance on success threshold (default 0.05)\n";
}

} // namespace msta
