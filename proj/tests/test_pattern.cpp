#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "msta/errors.hpp"
#include "msta/layout.hpp"
#include "msta/pattern.hpp"
#include "msta/row_graph.hpp"
#include "oracles.hpp"

using namespace msta;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<std::complex<double>> ones(int m, int n) {
    return std::vector<std::complex<double>>(std::size_t(m) * n, {1.0, 0.0});
}

std::vector<std::complex<double>> random_weights(std::mt19937_64& rng, int m, int n) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<std::complex<double>> w(std::size_t(m) * n);
    for (auto& x : w) x = {amp(rng), amp(rng)};
    w[rng() % w.size()] = 0.0;   // a dead element now and then
    return w;
}

// worst absolute deviation from the element-wise double sum, relative to peak
double worst_vs_direct(const pattern_grid& g, const std::vector<std::complex<double>>& w,
                       const aperture_spec& spec) {
    double peak = g.power[g.peak_index()];
    double worst = 0.0;
    for (int jv = 0; jv < g.r; ++jv)
        for (int ju = 0; ju < g.r; ++ju) {
            double u = g.u_at(ju), v = g.v_at(jv);
            bool vis = u * u + v * v <= 1.0;
            REQUIRE(g.visible(jv, ju) == vis);
            if (!vis) continue;
            double ref = oracle::direct_power(w, spec.M, spec.N, spec.dx, spec.dy, u, v);
            worst = std::max(worst, std::abs(g.at(jv, ju) - ref));
        }
    return worst / peak;
}

// peak sidelobe of a uniform n-element line factor, fine 1D scan past the
// first null, in dB below the mainlobe
double line_sidelobe_db(int n, double d) {
    double first_null = 1.0 / (n * d);
    double best = 0.0;
    for (double u = first_null; u <= 1.0; u += 1e-5)
        best = std::max(best, oracle::dirichlet_power(n, d, u));
    return 10.0 * std::log10(best / (double(n) * n));
}

// half-power width of the uniform n-element line factor, degrees
double line_hpbw_deg(int n, double d) {
    double pk = oracle::dirichlet_power(n, d, 0.0);
    double lo = 0.0, hi = 1.0 / (n * d);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (oracle::dirichlet_power(n, d, mid) >= 0.5 * pk ? lo : hi) = mid;
    }
    return 2.0 * std::asin(0.5 * (lo + hi)) * 180.0 / kPi;
}

// directivity of a uniform rows x cols array from the separable closed form,
// integrating P/sqrt(1-u^2-v^2) with u = a sin(psi) to kill the weight
double uniform_directivity_db(int rows, int cols, double d, int nv, int npsi) {
    double integral = 0.0;
    for (int j = 0; j <= nv; ++j) {
        double v = -1.0 + 2.0 * j / nv;
        double a2 = 1.0 - v * v;
        double inner = 0.0;
        if (a2 > 0.0) {
            double a = std::sqrt(a2);
            for (int k = 0; k <= npsi; ++k) {
                double psi = -0.5 * kPi + kPi * k / npsi;
                double wt = (k == 0 || k == npsi) ? 0.5 : 1.0;
                inner += wt * oracle::dirichlet_power(cols, d, a * std::sin(psi));
            }
            inner *= kPi / npsi;
        }
        double wv = (j == 0 || j == nv) ? 0.5 : 1.0;
        integral += wv * oracle::dirichlet_power(rows, d, v) * inner;
    }
    integral *= 2.0 / nv;
    double peak = double(rows) * rows * double(cols) * cols;
    return 10.0 * std::log10(4.0 * kPi * peak / integral);
}

tiling_layout all_small_layout(int m, int n) {
    aperture_spec spec{m, n, 1, 2, 0.5, 0.5};
    virtual_grid vg = to_virtual(spec);
    // word 0 in every row: no anchors, every tile 1x1
    std::vector<std::uint32_t> t(std::size_t(vg.anchor_rows), 0);
    row_dictionary dict = build_dictionary(vg.anchor_cols, vg.l_hat);
    return decode(spec, dict, t);
}

void write_file(const char* path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

} // namespace

TEST_CASE("uniform line array matches the Dirichlet kernel") {
    aperture_spec spec{1, 8, 1, 2, 0.5, 0.5};
    pattern_grid g = compute_pattern(ones(1, 8), spec, 256);
    double worst = 0.0;
    for (int jv = 0; jv < g.r; ++jv)
        for (int ju = 0; ju < g.r; ++ju) {
            if (!g.visible(jv, ju)) continue;
            // single row at y=0: no v dependence
            double ref = oracle::dirichlet_power(8, 0.5, g.u_at(ju));
            worst = std::max(worst, std::abs(g.at(jv, ju) - ref));
        }
    CHECK(worst <= 1e-10 * 64.0);
    CHECK(g.power[g.peak_index()] == doctest::Approx(64.0).epsilon(1e-12));
    auto [pu, pv] = g.peak_uv();
    CHECK(pu == 0.0);
    CHECK(pv == 0.0);
}

TEST_CASE("fft path matches the direct sum on random apertures") {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    pattern_workspace ws;
    for (int it = 0; it < 100; ++it) {
        int m = 1 + int(rng() % 16), n = 1 + int(rng() % 16);
        int r = it % 9 == 0 ? 128 : 64;
        aperture_spec spec{m, n, 1, 2, 0.5, 0.5};
        auto w = random_weights(rng, m, n);
        pattern_grid g = compute_pattern(ws, w, spec, r);
        CHECK(worst_vs_direct(g, w, spec) <= 1e-10);
    }
}

TEST_CASE("matrix path matches the direct sum off the aligned lattice") {
    std::mt19937_64 rng(0x51ed270b0a3b71ffull);
    pattern_workspace ws;
    for (int it = 0; it < 12; ++it) {
        int m = 1 + int(rng() % 10), n = 1 + int(rng() % 10);
        aperture_spec spec{m, n, 1, 2, 0.52, 0.47};
        auto w = random_weights(rng, m, n);
        pattern_grid g = compute_pattern(ws, w, spec, 64);
        CHECK(worst_vs_direct(g, w, spec) <= 1e-10);
    }
    // one axis aligned, the other not
    aperture_spec mixed{6, 9, 1, 2, 0.5, 0.61};
    auto w = random_weights(rng, 6, 9);
    pattern_grid g = compute_pattern(ws, w, mixed, 64);
    CHECK(worst_vs_direct(g, w, mixed) <= 1e-10);
}

TEST_CASE("pattern guards reject bad calls") {
    aperture_spec spec{2, 2, 1, 2, 0.5, 0.5};
    CHECK_THROWS_AS((void)compute_pattern(ones(2, 2), spec, 32), error);
    try {
        (void)compute_pattern(ones(3, 2), spec, 64);   // wrong weight count
        FAIL("expected a contract error");
    } catch (const error& e) {
        CHECK(e.kind() == errc::contract);
    }
}

TEST_CASE("steering phases wrap into (-pi, pi]") {
    // theta0 = 90 gives u0 = 1 exactly, so x*u0 = 0.5 lands beta on -pi,
    // which must wrap to +pi
    auto ph = steering_phases({{0.5, 0.0}}, 90.0, 0.0);
    REQUIRE(ph.size() == 1);
    CHECK(ph[0] == kPi);

    auto zero = steering_phases({{1.25, -0.75}, {0.0, 3.5}}, 0.0, 0.0);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-20.0, 20.0), ang(0.0, 90.0);
    for (int it = 0; it < 200; ++it) {
        auto p = steering_phases({{pos(rng), pos(rng)}}, ang(rng), 4.0 * ang(rng));
        CHECK(p[0] > -kPi);
        CHECK(p[0] <= kPi);
    }
}

TEST_CASE("steering moves the peak without losing it") {
    tiling_layout lay = all_small_layout(5, 8);
    auto centers = tile_centers(lay);
    double u0 = std::sin(20.0 * kPi / 180.0) * std::cos(60.0 * kPi / 180.0);
    double v0 = std::sin(20.0 * kPi / 180.0) * std::sin(60.0 * kPi / 180.0);

    pattern_workspace ws;
    auto broadside = compute_pattern(ws, element_weights(lay, steering_phases(centers, 0, 0)),
                                     lay.spec, 512);
    auto steered = compute_pattern(ws, element_weights(lay, steering_phases(centers, 20, 60)),
                                   lay.spec, 512);
    auto [pu, pv] = steered.peak_uv();
    CHECK(std::abs(pu - u0) <= 2.5 / 512);
    CHECK(std::abs(pv - v0) <= 2.5 / 512);
    // progressive phase keeps the coherent sum
    double pb = broadside.power[broadside.peak_index()];
    double ps = steered.power[steered.peak_index()];
    CHECK(ps >= 0.98 * pb);

    metrics_report rep = evaluate_metrics(ws, lay, 20.0, 60.0, 512);
    CHECK(std::abs(rep.peak_u - u0) <= 2.5 / 512);
    CHECK(std::abs(rep.peak_v - v0) <= 2.5 / 512);
    CHECK(rep.sll_db < -10.0);
}

TEST_CASE("a global phase factor leaves the power untouched") {
    std::mt19937_64 rng(99);
    aperture_spec spec{6, 7, 1, 2, 0.5, 0.5};
    auto w = random_weights(rng, 6, 7);
    auto w2 = w;
    for (auto& x : w2) x *= std::polar(1.0, 0.777);
    pattern_workspace ws;
    pattern_grid a = compute_pattern(ws, w, spec, 128);
    pattern_grid b = compute_pattern(ws, w2, spec, 128);
    double peak = a.power[a.peak_index()];
    for (int j = 0; j < a.r * a.r; ++j) {
        if (a.power[std::size_t(j)] != a.power[std::size_t(j)]) continue;
        CHECK(std::abs(a.power[std::size_t(j)] - b.power[std::size_t(j)]) <= 1e-12 * peak);
    }
}

TEST_CASE("rotating the aperture 180 degrees mirrors the pattern") {
    std::mt19937_64 rng(123);
    aperture_spec spec{5, 8, 1, 2, 0.5, 0.5};
    auto w = random_weights(rng, 5, 8);
    auto wr = w;
    std::reverse(wr.begin(), wr.end());
    pattern_workspace ws;
    pattern_grid a = compute_pattern(ws, w, spec, 128);
    pattern_grid b = compute_pattern(ws, wr, spec, 128);
    double peak = a.power[a.peak_index()];
    int r = a.r;
    for (int jv = 1; jv < r; ++jv)
        for (int ju = 1; ju < r; ++ju) {
            if (!a.visible(jv, ju)) continue;
            REQUIRE(b.visible(r - jv, r - ju));
            CHECK(std::abs(b.at(r - jv, r - ju) - a.at(jv, ju)) <= 1e-11 * peak);
        }
}

TEST_CASE("sidelobe level of the uniform aperture matches the line factors") {
    aperture_spec spec{5, 8, 1, 2, 0.5, 0.5};
    pattern_workspace ws;
    pattern_grid g = compute_pattern(ws, ones(5, 8), spec, 512);
    double mine = sll(g);
    // separable pattern: worst lobe sits on one of the principal cuts
    double ref = std::max(line_sidelobe_db(5, 0.5), line_sidelobe_db(8, 0.5));
    CHECK(ref == doctest::Approx(-12.04).epsilon(0.002));
    CHECK(std::abs(mine - ref) <= 0.02);
    CHECK(mine <= ref + 1e-6);   // grid samples cannot beat the continuum

    // scale invariance
    auto w3 = ones(5, 8);
    for (auto& x : w3) x *= 7.25;
    pattern_grid g3 = compute_pattern(ws, w3, spec, 512);
    CHECK(sll(g3) == doctest::Approx(mine).epsilon(1e-12));
}

TEST_CASE("flat pattern reports the no-sidelobe floor and no half-power crossing") {
    aperture_spec spec{1, 1, 1, 2, 0.5, 0.5};
    pattern_grid g = compute_pattern(ones(1, 1), spec, 64);
    CHECK(sll(g) == -300.0);
    CHECK_THROWS_AS((void)hpbw(g, cut_plane::azimuth), error);
}

TEST_CASE("a beam that fills visible space still evaluates") {
    // one large 2x2 tile: the flood covers the whole disc, SLL floors out
    aperture_spec spec{2, 2, 1, 2, 0.5, 0.5};
    row_dictionary dict = build_dictionary(1, 2);
    tiling_layout lay = decode(spec, dict, {1});
    REQUIRE(lay.q_large == 1);
    pattern_workspace ws;
    metrics_report rep = evaluate_metrics(ws, lay, 0.0, 0.0, 128);
    CHECK(rep.sll_db == -300.0);
    // 4 cos^2(pi u / 2) halves at u = 0.5, so the width is 2 asin(0.5)
    CHECK(rep.hpbw_az_deg == doctest::Approx(60.0).epsilon(0.01));
    CHECK(rep.hpbw_el_deg == doctest::Approx(60.0).epsilon(0.01));
    CHECK(rep.directivity_dbi > 0.0);
}

TEST_CASE("half-power beamwidth of the uniform square") {
    aperture_spec spec{90, 90, 6, 12, 0.5, 0.5};
    pattern_workspace ws;
    pattern_grid g = compute_pattern(ws, ones(90, 90), spec, 512);
    double ref = line_hpbw_deg(90, 0.5);
    CHECK(ref == doctest::Approx(1.128).epsilon(0.01));
    double az = hpbw(g, cut_plane::azimuth);
    double el = hpbw(g, cut_plane::elevation);
    CHECK(std::abs(az - ref) <= 0.05);
    CHECK(std::abs(az - el) <= 1e-9);
}

TEST_CASE("line array beamwidth and the elevation cut that never drops") {
    aperture_spec spec{1, 8, 1, 2, 0.5, 0.5};
    pattern_grid g = compute_pattern(ones(1, 8), spec, 512);
    double ref = line_hpbw_deg(8, 0.5);
    CHECK(std::abs(hpbw(g, cut_plane::azimuth) - ref) <= 0.1);
    // the elevation cut is constant: no -3 dB crossing exists
    CHECK_THROWS_AS((void)hpbw(g, cut_plane::elevation), error);
}

TEST_CASE("directivity of reference apertures") {
    pattern_workspace ws;

    // single isotropic element: hemisphere integration gives exactly D = 2
    aperture_spec one{1, 1, 1, 2, 0.5, 0.5};
    pattern_grid g1 = compute_pattern(ws, ones(1, 1), one, 512);
    CHECK(directivity(g1) == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-9));

    aperture_spec mid{15, 20, 1, 2, 0.5, 0.5};
    pattern_grid g2 = compute_pattern(ws, ones(15, 20), mid, 512);
    double d2 = directivity(g2);
    double ref2 = uniform_directivity_db(15, 20, 0.5, 3000, 1500);
    CHECK(std::abs(d2 - ref2) <= 0.05);
    // the 4*pi*A/lambda^2 asymptote overshoots a 15x20 aperture by ~0.18 dB
    CHECK(std::abs(d2 - 10.0 * std::log10(kPi * 300.0)) <= 0.2);

    aperture_spec big{90, 90, 6, 12, 0.5, 0.5};
    pattern_grid g3 = compute_pattern(ws, ones(90, 90), big, 512);
    double d3 = directivity(g3);
    double ref3 = uniform_directivity_db(90, 90, 0.5, 6000, 4000);
    CHECK(std::abs(d3 - ref3) <= 0.15);
    CHECK(std::abs(d3 - 10.0 * std::log10(kPi * 8100.0)) <= 0.2);

    // amplitude scale cancels
    auto w = ones(15, 20);
    for (auto& x : w) x *= 3.0;
    pattern_grid g4 = compute_pattern(ws, w, mid, 512);
    CHECK(directivity(g4) == doctest::Approx(d2).epsilon(1e-9));

    pattern_grid norm = g2;
    norm.absolute = false;
    CHECK_THROWS_AS((void)directivity(norm), error);
}

TEST_CASE("hinge cost") {
    cost_weights w{1.0, 0.0, -20.0, 0.0, 0.0};
    CHECK(cost(-20.0, 6.0, 7.0, w) == 0.0);
    CHECK(cost(-25.0, 6.0, 7.0, w) == 0.0);
    CHECK(cost(-18.0, 6.0, 7.0, w) == doctest::Approx(2.0).epsilon(1e-12));

    cost_weights wb{1.0, 0.5, -20.0, 8.0, 8.0};
    CHECK(cost(-18.0, 10.5, 7.0, wb) == doctest::Approx(2.0 + 0.5 * 2.5).epsilon(1e-12));
    CHECK(cost(-20.0, 8.0, 8.0, wb) == 0.0);

    cost_weights bad{-1.0, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)cost(-20.0, 1.0, 1.0, bad), error);
}

TEST_CASE("scan cost is the worst steered sidelobe level") {
    tiling_layout lay = all_small_layout(5, 8);
    pattern_workspace ws;
    double broadside = evaluate_metrics(ws, lay, 0.0, 0.0, 256, {}, false, false).sll_db;
    CHECK(scan_cost(ws, lay, {{0.0, 0.0}}, 256) == doctest::Approx(broadside).epsilon(1e-12));
    double wider = scan_cost(ws, lay, {{0.0, 0.0}, {8.0, 45.0}, {15.0, 0.0}}, 256);
    CHECK(wider >= broadside - 1e-12);
    CHECK_THROWS_AS((void)scan_cost(ws, lay, {}, 256), error);
}

TEST_CASE("tabulated element pattern scales the power pointwise") {
    // magnitude linear in dB vs theta (-theta/3 dB), so the bilinear dB
    // interpolation is exact at every query angle
    std::string body = "theta_deg,phi_deg,re,im\n";
    for (int t = 0; t <= 90; t += 5)
        for (int p = 0; p < 360; p += 30) {
            char row[96];
            std::snprintf(row, sizeof row, "%d,%d,%.17g,0\n", t, p,
                          std::pow(10.0, -double(t) / 60.0));
            body += row;
        }
    write_file("ep_db_linear.csv", body);
    element_pattern ep = element_pattern::load_csv("ep_db_linear.csv");
    CHECK_FALSE(ep.is_isotropic());
    CHECK(ep.covers_visible());
    CHECK(std::abs(ep.sample(45.0, 120.0) - std::pow(10.0, -45.0 / 60.0)) <= 1e-12);
    CHECK(std::abs(ep.sample(37.5, 123.4) - std::pow(10.0, -37.5 / 60.0)) <= 1e-12);
    CHECK(ep.power(60.0, 10.0) == doctest::Approx(std::pow(10.0, -60.0 / 30.0)).epsilon(1e-9));

    aperture_spec spec{5, 8, 1, 2, 0.5, 0.5};
    pattern_workspace ws;
    pattern_grid iso = compute_pattern(ws, ones(5, 8), spec, 128);
    pattern_grid tab = compute_pattern(ws, ones(5, 8), spec, 128, ep);
    double peak = iso.power[iso.peak_index()];
    double worst = 0.0;
    for (int jv = 0; jv < iso.r; ++jv)
        for (int ju = 0; ju < iso.r; ++ju) {
            if (!iso.visible(jv, ju)) continue;
            REQUIRE(tab.visible(jv, ju));
            double u = iso.u_at(ju), v = iso.v_at(jv);
            double theta = std::asin(std::min(1.0, std::sqrt(u * u + v * v))) * 180.0 / kPi;
            double expect = iso.at(jv, ju) * std::pow(10.0, -theta / 30.0);
            worst = std::max(worst, std::abs(tab.at(jv, ju) - expect));
        }
    CHECK(worst <= 1e-9 * peak);

    // phase content of the table must not change the power pattern
    std::string body2 = "theta_deg,phi_deg,re,im\n";
    for (int t = 0; t <= 90; t += 5)
        for (int p = 0; p < 360; p += 30) {
            double mag = std::pow(10.0, -double(t) / 60.0);
            double ph = 0.01 * t;
            char row[128];
            std::snprintf(row, sizeof row, "%d,%d,%.17g,%.17g\n", t, p, mag * std::cos(ph),
                          mag * std::sin(ph));
            body2 += row;
        }
    write_file("ep_db_linear_phase.csv", body2);
    element_pattern ep2 = element_pattern::load_csv("ep_db_linear_phase.csv");
    pattern_grid tab2 = compute_pattern(ws, ones(5, 8), spec, 128, ep2);
    for (int j = 0; j < tab.r * tab.r; ++j) {
        if (tab.power[std::size_t(j)] != tab.power[std::size_t(j)]) continue;
        CHECK(std::abs(tab.power[std::size_t(j)] - tab2.power[std::size_t(j)]) <= 1e-9 * peak);
    }

    std::remove("ep_db_linear.csv");
    std::remove("ep_db_linear_phase.csv");
}

TEST_CASE("all-ones table behaves exactly like the isotropic element") {
    std::string body = "theta_deg,phi_deg,re,im\n";
    for (int t = 0; t <= 90; t += 15)
        for (int p = 0; p < 360; p += 15) body += std::to_string(t) + "," + std::to_string(p) + ",1,0\n";
    write_file("ep_ones.csv", body);
    element_pattern ep = element_pattern::load_csv("ep_ones.csv");
    aperture_spec spec{4, 6, 1, 2, 0.5, 0.5};
    std::mt19937_64 rng(5);
    auto w = random_weights(rng, 4, 6);
    pattern_workspace ws;
    pattern_grid iso = compute_pattern(ws, w, spec, 64);
    pattern_grid tab = compute_pattern(ws, w, spec, 64, ep);
    double peak = iso.power[iso.peak_index()];
    for (int j = 0; j < 64 * 64; ++j) {
        bool nan_a = iso.power[std::size_t(j)] != iso.power[std::size_t(j)];
        bool nan_b = tab.power[std::size_t(j)] != tab.power[std::size_t(j)];
        REQUIRE(nan_a == nan_b);
        if (nan_a) continue;
        CHECK(std::abs(iso.power[std::size_t(j)] - tab.power[std::size_t(j)]) <= 1e-12 * peak);
    }
    std::remove("ep_ones.csv");
}

TEST_CASE("element pattern loader rejects malformed tables") {
    auto expect_io = [](const char* path, const std::string& body) {
        write_file(path, body);
        try {
            (void)element_pattern::load_csv(path);
            FAIL_CHECK("expected an io_format error for ", path);
        } catch (const error& e) {
            CHECK(e.kind() == errc::io_format);
        }
        std::remove(path);
    };

    expect_io("ep_bad1.csv", "theta,phi,re,im\n0,0,1,0\n");
    expect_io("ep_bad2.csv", "theta_deg,phi_deg,re,im\n");
    expect_io("ep_bad3.csv", "theta_deg,phi_deg,re,im\n0,0,1,0\n0,360,1,0\n90,0,1,0\n90,360,1,0\n");
    expect_io("ep_bad4.csv", "theta_deg,phi_deg,re,im\n90,0,1,0\n0,0,1,0\n");
    expect_io("ep_bad5.csv",
              "theta_deg,phi_deg,re,im\n0,0,1,0\n0,180,1,0\n90,0,1,0\n");   // ragged grid
    expect_io("ep_bad6.csv",
              "theta_deg,phi_deg,re,im\n0,0,1,0\n0,180,1,0\n90,0,1,0\n90,90,1,0\n");   // irregular
    expect_io("ep_bad7.csv", "theta_deg,phi_deg,re,im\n0,0,x,0\n");
    CHECK_THROWS_AS((void)element_pattern::load_csv("ep_no_such_file.csv"), error);

    // partial theta coverage loads but cannot be used for visible space
    write_file("ep_partial.csv", "theta_deg,phi_deg,re,im\n0,0,1,0\n60,0,1,0\n");
    element_pattern partial = element_pattern::load_csv("ep_partial.csv");
    CHECK_FALSE(partial.covers_visible());
    CHECK_THROWS_AS((void)partial.sample(75.0, 0.0), error);
    aperture_spec spec{2, 2, 1, 2, 0.5, 0.5};
    CHECK_THROWS_AS((void)compute_pattern(ones(2, 2), spec, 64, partial), error);
    std::remove("ep_partial.csv");
}

TEST_CASE("workspace reuse across shapes is transparent") {
    std::mt19937_64 rng(42);
    pattern_workspace ws;
    aperture_spec a{3, 4, 1, 2, 0.5, 0.5}, b{7, 2, 1, 2, 0.52, 0.5};
    auto wa = random_weights(rng, 3, 4);
    auto wb = random_weights(rng, 7, 2);
    pattern_grid first = compute_pattern(ws, wa, a, 64);
    (void)compute_pattern(ws, wb, b, 96);
    (void)compute_pattern(ws, wa, a, 128);
    pattern_grid again = compute_pattern(ws, wa, a, 64);

    pattern_workspace fresh;
    pattern_grid clean = compute_pattern(fresh, wa, a, 64);
    double peak = first.power[first.peak_index()];
    for (int j = 0; j < 64 * 64; ++j) {
        bool nan_a = first.power[std::size_t(j)] != first.power[std::size_t(j)];
        REQUIRE((again.power[std::size_t(j)] != again.power[std::size_t(j)]) == nan_a);
        if (nan_a) continue;
        CHECK(std::abs(first.power[std::size_t(j)] - again.power[std::size_t(j)]) <= 1e-13 * peak);
        CHECK(std::abs(first.power[std::size_t(j)] - clean.power[std::size_t(j)]) <= 1e-13 * peak);
    }
}
