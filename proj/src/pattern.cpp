#include "msta/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

#include "msta/errors.hpp"

namespace msta {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kHalfPowerDb = -3.0102999566398119521;   // 10*log10(1/2)

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Gauss-Legendre nodes/weights on [-1,1], computed once (Newton on P_n);
// used for the per-cell visible-disc Jacobian integrals in directivity().
struct gl_rule {
    std::vector<double> x, w;
};

const gl_rule& gl16() {
    static const gl_rule rule = [] {
        const int n = 16;
        gl_rule r;
        r.x.resize(n);
        r.w.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (x * p1 - p0) / (x * x - 1.0);
                double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            r.x[std::size_t(i)] = x;
            r.w[std::size_t(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

struct fft_entry {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t count = 0;
};

// smallest FFT length n with 2*d*n/r an exact integer (grid nodes land on
// DFT bins); 0 when no acceptable length exists
int aligned_fft_base(int r, double d) {
    for (int s = 1; s <= 128; ++s) {
        double t = double(r) * s / (2.0 * d);
        double rounded = std::round(t);
        if (rounded >= 1.0 && std::abs(t - rounded) < 1e-6) return int(rounded);
    }
    return 0;
}

} // namespace

struct pattern_workspace::impl {
    std::map<std::pair<int, int>, fft_entry> plans;
    std::map<std::tuple<int, int, long long>, std::vector<std::complex<double>>> kernels;
    pattern_grid scratch;
    std::vector<std::uint8_t> flood;
    std::vector<std::size_t> queue;

    fft_entry& plan_for(int ny, int nx) {
        auto key = std::make_pair(ny, nx);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        fft_entry e;
        e.count = std::size_t(ny) * nx;
        std::lock_guard<std::mutex> lock(fftw_mutex());
        e.in = fftw_alloc_complex(e.count);
        e.out = fftw_alloc_complex(e.count);
        if (!e.in || !e.out) fail(errc::resource_limit, "FFT buffer allocation failed");
        e.plan = fftw_plan_dft_2d(ny, nx, e.in, e.out, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!e.plan) fail(errc::resource_limit, "FFT plan creation failed");
        return plans.emplace(key, e).first->second;
    }

    // positional DFT kernel exp(+j*2*pi*c_j*d*(k-1)) for grid nodes c_j,
    // cached by (len, r, d bits)
    const std::vector<std::complex<double>>& kernel_for(int len, int r, double d) {
        long long dbits;
        static_assert(sizeof dbits == sizeof d);
        std::memcpy(&dbits, &d, sizeof d);
        auto key = std::make_tuple(len, r, dbits);
        auto it = kernels.find(key);
        if (it != kernels.end()) return it->second;
        std::vector<std::complex<double>> k(std::size_t(r) * len);
        for (int j = 0; j < r; ++j) {
            double c = -1.0 + 2.0 * j / r;
            for (int p = 0; p < len; ++p)
                k[std::size_t(j) * len + p] = std::polar(1.0, 2.0 * kPi * c * d * p);
        }
        return kernels.emplace(key, std::move(k)).first->second;
    }

    ~impl() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        for (auto& [key, e] : plans) {
            if (e.plan) fftw_destroy_plan(e.plan);
            if (e.in) fftw_free(e.in);
            if (e.out) fftw_free(e.out);
        }
    }
};

pattern_workspace::pattern_workspace() : impl_(std::make_unique<impl>()) {}
pattern_workspace::~pattern_workspace() = default;

std::size_t pattern_grid::peak_index() const {
    double best = -1.0;
    std::size_t at = 0;
    long best_d2 = 0;
    const long c = r / 2;
    for (std::size_t i = 0; i < power.size(); ++i) {
        if (power[i] != power[i]) continue;
        long du = long(i % std::size_t(r)) - c, dv = long(i / std::size_t(r)) - c;
        long d2 = du * du + dv * dv;
        // exact ties (flat ridges, e.g. single-row apertures) go to the
        // sample nearest broadside so the cuts through the peak stay useful
        if (power[i] > best || (power[i] == best && d2 < best_d2)) {
            best = power[i];
            at = i;
            best_d2 = d2;
        }
    }
    if (best < 0.0) fail(errc::contract, "pattern grid has no visible samples");
    return at;
}

std::pair<double, double> pattern_grid::peak_uv() const {
    std::size_t i = peak_index();
    return {u_at(int(i % std::size_t(r))), v_at(int(i / std::size_t(r)))};
}

std::vector<double> steering_phases(const std::vector<std::pair<double, double>>& centers,
                                    double theta0_deg, double phi0_deg) {
    const double th = theta0_deg * kPi / 180.0, ph = phi0_deg * kPi / 180.0;
    const double u0 = std::sin(th) * std::cos(ph), v0 = std::sin(th) * std::sin(ph);
    std::vector<double> beta(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double raw = -2.0 * kPi * (centers[i].first * u0 + centers[i].second * v0);
        double wrapped = std::remainder(raw, 2.0 * kPi);
        if (wrapped <= -kPi) wrapped = kPi;   // land on (-pi, pi]
        beta[i] = wrapped;
    }
    return beta;
}

std::vector<std::complex<double>> element_weights(const tiling_layout& layout,
                                                  const std::vector<double>& phases) {
    if (phases.size() != layout.tiles.size())
        fail(errc::contract, "phase vector length " + std::to_string(phases.size()) +
                                 " != tile count " + std::to_string(layout.tiles.size()));
    std::vector<std::complex<double>> w(layout.membership.size());
    std::vector<std::complex<double>> per_tile(layout.tiles.size());
    for (std::size_t i = 0; i < layout.tiles.size(); ++i)
        per_tile[i] = std::polar(1.0 / layout.tiles[i].side, phases[i]);
    for (std::size_t e = 0; e < w.size(); ++e)
        w[e] = per_tile[std::size_t(layout.membership[e] - 1)];
    return w;
}

namespace {

// array factor moduli-squared on the r x r grid, into grid.power
void array_power(pattern_workspace::impl& ws, const std::vector<std::complex<double>>& w,
                 const aperture_spec& spec, int r, pattern_grid& grid) {
    const int rows = spec.M, cols = spec.N;
    grid.r = r;
    grid.absolute = true;
    grid.power.assign(std::size_t(r) * r, 0.0);

    int base_x = aligned_fft_base(r, spec.dx);
    int base_y = aligned_fft_base(r, spec.dy);
    long long nx = 0, ny = 0;
    if (base_x > 0 && base_y > 0) {
        nx = base_x * ((cols + base_x - 1) / base_x);
        ny = base_y * ((rows + base_y - 1) / base_y);
    }
    const bool use_fft = nx > 0 && ny > 0 && nx * ny <= (1ll << 21);   // <= ~2M bins

    if (use_fft) {
        fft_entry& fft = ws.plan_for(int(ny), int(nx));
        std::memset(fft.in, 0, fft.count * sizeof(fftw_complex));
        for (int m = 0; m < rows; ++m)
            for (int n = 0; n < cols; ++n) {
                const auto& c = w[std::size_t(m) * cols + n];
                fft.in[std::size_t(m) * nx + n][0] = c.real();
                fft.in[std::size_t(m) * nx + n][1] = c.imag();
            }
        fftw_execute(fft.plan);

        const long long mx = std::llround(2.0 * spec.dx * double(nx) / r);
        const long long my = std::llround(2.0 * spec.dy * double(ny) / r);
        std::vector<std::size_t> ix(static_cast<std::size_t>(r));
        std::vector<std::size_t> iy(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) {
            long long kx = ((j - r / 2) * mx) % nx;
            long long ky = ((j - r / 2) * my) % ny;
            ix[std::size_t(j)] = std::size_t(kx < 0 ? kx + nx : kx);
            iy[std::size_t(j)] = std::size_t(ky < 0 ? ky + ny : ky);
        }
        for (int jv = 0; jv < r; ++jv) {
            const std::size_t row = iy[std::size_t(jv)] * std::size_t(nx);
            double* out_row = &grid.power[std::size_t(jv) * r];
            for (int ju = 0; ju < r; ++ju) {
                const fftw_complex& z = fft.out[row + ix[std::size_t(ju)]];
                out_row[ju] = z[0] * z[0] + z[1] * z[1];
            }
        }
    } else {
        // exact per-axis DFT products for grids that do not align with bins
        const auto& kx = ws.kernel_for(cols, r, spec.dx);
        const auto& ky = ws.kernel_for(rows, r, spec.dy);
        std::vector<std::complex<double>> t(std::size_t(rows) * r);
        for (int m = 0; m < rows; ++m)
            for (int ju = 0; ju < r; ++ju) {
                std::complex<double> acc = 0.0;
                const std::complex<double>* wr = &w[std::size_t(m) * cols];
                const std::complex<double>* kr = &kx[std::size_t(ju) * cols];
                for (int n = 0; n < cols; ++n) acc += wr[n] * kr[n];
                t[std::size_t(m) * r + ju] = acc;
            }
        for (int jv = 0; jv < r; ++jv) {
            const std::complex<double>* kr = &ky[std::size_t(jv) * rows];
            double* out_row = &grid.power[std::size_t(jv) * r];
            for (int ju = 0; ju < r; ++ju) {
                std::complex<double> acc = 0.0;
                for (int m = 0; m < rows; ++m) acc += kr[m] * t[std::size_t(m) * r + ju];
                out_row[ju] = std::norm(acc);
            }
        }
    }
}

void apply_visibility_and_element(pattern_grid& grid, const element_pattern& element) {
    const int r = grid.r;
    const bool tab = !element.is_isotropic();
    for (int jv = 0; jv < r; ++jv) {
        double v = grid.v_at(jv);
        for (int ju = 0; ju < r; ++ju) {
            double u = grid.u_at(ju);
            double rho2 = u * u + v * v;
            double& p = grid.power[std::size_t(jv) * r + ju];
            if (rho2 > 1.0) {
                p = kNan;
            } else if (tab) {
                double theta = std::asin(std::min(1.0, std::sqrt(rho2))) * 180.0 / kPi;
                double phi = std::atan2(v, u) * 180.0 / kPi;
                if (phi < 0.0) phi += 360.0;
                p *= element.power(theta, phi);
            }
        }
    }
}

void compute_into(pattern_workspace::impl& ws, const std::vector<std::complex<double>>& weights,
                  const aperture_spec& spec, int r, const element_pattern& element,
                  pattern_grid& grid) {
    validate(spec);
    if (r < 64) fail(errc::contract, "pattern resolution must be >= 64");
    if (weights.size() != std::size_t(spec.M) * spec.N)
        fail(errc::contract, "weight grid size does not match the aperture");
    if (!element.covers_visible())
        fail(errc::contract, "tabulated element pattern does not cover theta in [0, 90]");
    array_power(ws, weights, spec, r, grid);
    apply_visibility_and_element(grid, element);
}

} // namespace

pattern_grid compute_pattern(pattern_workspace& ws, const std::vector<std::complex<double>>& weights,
                             const aperture_spec& spec, int r, const element_pattern& element) {
    pattern_grid grid;
    compute_into(ws.state(), weights, spec, r, element, grid);
    return grid;
}

pattern_grid compute_pattern(const std::vector<std::complex<double>>& weights,
                             const aperture_spec& spec, int r, const element_pattern& element) {
    pattern_workspace ws;
    return compute_pattern(ws, weights, spec, r, element);
}

namespace {

// mainlobe mask: samples reachable from the peak by non-increasing
// 8-neighbor steps; returns the largest visible power outside the mask
double worst_sidelobe(const pattern_grid& grid, std::vector<std::uint8_t>& mask,
                      std::vector<std::size_t>& queue) {
    const int r = grid.r;
    const std::size_t total = grid.power.size();
    mask.assign(total, 0);
    queue.clear();
    std::size_t peak = grid.peak_index();
    mask[peak] = 1;
    queue.push_back(peak);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t cur = queue[head];
        int cv = int(cur / std::size_t(r)), cu = int(cur % std::size_t(r));
        double pcur = grid.power[cur];
        for (int dv = -1; dv <= 1; ++dv)
            for (int du = -1; du <= 1; ++du) {
                if (dv == 0 && du == 0) continue;
                int nv = cv + dv, nu = cu + du;
                if (nv < 0 || nv >= r || nu < 0 || nu >= r) continue;
                std::size_t nb = std::size_t(nv) * r + std::size_t(nu);
                if (mask[nb]) continue;
                double pn = grid.power[nb];
                if (pn != pn || pn > pcur) continue;
                mask[nb] = 1;
                queue.push_back(nb);
            }
    }
    double worst = -1.0;
    for (std::size_t i = 0; i < total; ++i) {
        double p = grid.power[i];
        if (p == p && !mask[i] && p > worst) worst = p;
    }
    return worst;   // -1 when the mainlobe covers every visible sample
}

constexpr double kSllFloorDb = -300.0;

double sll_impl(const pattern_grid& grid, std::vector<std::uint8_t>& mask,
                std::vector<std::size_t>& queue) {
    double peak = grid.power[grid.peak_index()];
    double worst = worst_sidelobe(grid, mask, queue);
    if (worst < 0.0) return kSllFloorDb;
    double floor_ratio = 1e-30;
    return 10.0 * std::log10(std::max(worst / peak, floor_ratio));
}

// one principal-plane cut through the peak: crossing of the half-power level
// on each side, linear interpolation in dB, width asin(right) - asin(left)
double hpbw_impl(const pattern_grid& grid, cut_plane plane) {
    const int r = grid.r;
    const std::size_t peak = grid.peak_index();
    const int pv = int(peak / std::size_t(r)), pu = int(peak % std::size_t(r));
    const double peak_power = grid.power[peak];

    auto sample = [&](int i) -> double {
        return plane == cut_plane::azimuth ? grid.at(pv, i) : grid.at(i, pu);
    };
    auto coord = [&](double i) -> double { return -1.0 + 2.0 * i / r; };
    const int center = plane == cut_plane::azimuth ? pu : pv;
    const double half = peak_power * 0.5;

    double cross[2];
    for (int dir = 0; dir < 2; ++dir) {
        int step = dir == 0 ? -1 : 1;
        int i = center;
        for (;;) {
            int next = i + step;
            if (next < 0 || next >= r || sample(next) != sample(next))
                fail(errc::contract, "half-power crossing falls outside the visible cut");
            if (sample(next) < half) break;
            i = next;
        }
        double db_i = 10.0 * std::log10(sample(i) / peak_power);
        double db_n = 10.0 * std::log10(std::max(sample(i + step) / peak_power, 1e-30));
        double frac = (db_i - kHalfPowerDb) / (db_i - db_n);
        cross[dir] = coord(double(i) + step * frac);
    }
    return (std::asin(cross[1]) - std::asin(cross[0])) * 180.0 / kPi;
}

} // namespace

double sll(const pattern_grid& grid) {
    std::vector<std::uint8_t> mask;
    std::vector<std::size_t> queue;
    return sll_impl(grid, mask, queue);
}

double hpbw(const pattern_grid& grid, cut_plane plane) { return hpbw_impl(grid, plane); }

double directivity(const pattern_grid& grid) {
    if (!grid.absolute)
        fail(errc::contract, "directivity requires an absolute (un-normalized) grid");
    const int r = grid.r;
    const auto& gl = gl16();

    // cell boundaries at sample midpoints, outermost cells extended to +-1 so
    // the union covers the disc exactly
    auto lo = [&](int i) { return i == 0 ? -1.0 : -1.0 + (2.0 * i - 1.0) / r; };
    auto hi = [&](int i) { return i == r - 1 ? 1.0 : -1.0 + (2.0 * i + 1.0) / r; };

    double integral = 0.0;
    for (int jv = 0; jv < r; ++jv) {
        double v0 = lo(jv), v1 = hi(jv);
        if (v0 >= 1.0 || v1 <= -1.0) continue;
        v0 = std::max(v0, -1.0);
        v1 = std::min(v1, 1.0);
        for (int ju = 0; ju < r; ++ju) {
            double u0 = lo(ju), u1 = hi(ju);
            // integral over the cell of du dv / sqrt(1-u^2-v^2), u clipped to
            // the disc chord at each v node
            double w_cell = 0.0;
            for (std::size_t g = 0; g < gl.x.size(); ++g) {
                double v = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * gl.x[g];
                double a2 = 1.0 - v * v;
                if (a2 <= 0.0) continue;
                double a = std::sqrt(a2);
                double ulo = std::clamp(u0, -a, a), uhi = std::clamp(u1, -a, a);
                if (uhi <= ulo) continue;
                w_cell += gl.w[g] * (std::asin(uhi / a) - std::asin(ulo / a));
            }
            if (w_cell <= 0.0) continue;
            w_cell *= 0.5 * (v1 - v0);

            double p = grid.at(jv, ju);
            if (p != p) {
                // invisible center but the cell clips into the disc: borrow
                // the nearest visible sample along the inward diagonal
                int nv = jv, nu = ju;
                while (p != p && (nv != r / 2 || nu != r / 2)) {
                    if (nv != r / 2) nv += nv < r / 2 ? 1 : -1;
                    if (nu != r / 2) nu += nu < r / 2 ? 1 : -1;
                    p = grid.at(nv, nu);
                }
                if (p != p) continue;
            }
            integral += p * w_cell;
        }
    }
    if (integral <= 0.0) fail(errc::contract, "pattern integrates to zero power");
    double peak = grid.power[grid.peak_index()];
    return 10.0 * std::log10(4.0 * kPi * peak / integral);
}

double cost(double sll_db, double hpbw_az_deg, double hpbw_el_deg, const cost_weights& w) {
    if (w.w_sl < 0.0 || w.w_bw < 0.0) fail(errc::contract, "cost weights must be nonnegative");
    double c = w.w_sl * std::max(0.0, sll_db - w.eta_sll_db);
    c += w.w_bw * (std::max(0.0, hpbw_az_deg - w.eta_az_deg) +
                   std::max(0.0, hpbw_el_deg - w.eta_el_deg));
    return c;
}

metrics_report evaluate_metrics(pattern_workspace& ws, const tiling_layout& layout,
                                double theta0_deg, double phi0_deg, int r,
                                const element_pattern& element, bool want_hpbw,
                                bool want_directivity) {
    auto& state = ws.state();
    const auto centers = tile_centers(layout);
    const auto phases = steering_phases(centers, theta0_deg, phi0_deg);
    const auto weights = element_weights(layout, phases);
    compute_into(state, weights, layout.spec, r, element, state.scratch);

    metrics_report rep;
    rep.sll_db = sll_impl(state.scratch, state.flood, state.queue);
    auto [pu, pv] = state.scratch.peak_uv();
    rep.peak_u = pu;
    rep.peak_v = pv;
    if (want_hpbw) {
        rep.hpbw_az_deg = hpbw_impl(state.scratch, cut_plane::azimuth);
        rep.hpbw_el_deg = hpbw_impl(state.scratch, cut_plane::elevation);
    }
    if (want_directivity) rep.directivity_dbi = directivity(state.scratch);
    return rep;
}

double scan_cost(pattern_workspace& ws, const tiling_layout& layout,
                 const std::vector<std::pair<double, double>>& steer_set, int r,
                 const element_pattern& element) {
    if (steer_set.empty()) fail(errc::contract, "steering set must not be empty");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [theta0, phi0] : steer_set) {
        metrics_report rep = evaluate_metrics(ws, layout, theta0, phi0, r, element, false, false);
        worst = std::max(worst, rep.sll_db);
    }
    return worst;
}

} // namespace msta
