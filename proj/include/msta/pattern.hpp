#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "msta/element_pattern.hpp"
#include "msta/layout.hpp"

namespace msta {

// Power pattern sampled on a uniform R x R grid over u,v in [-1, 1),
// u_j = -1 + 2j/R (u = sin(theta)cos(phi), v = sin(theta)sin(phi)).
// Samples outside the visible circle u^2+v^2 > 1 hold NaN.  Power is stored
// absolute (un-normalized); exports divide by the peak.
struct pattern_grid {
    int r = 0;
    std::vector<double> power;   // index (iv, iu) -> iv*r + iu
    bool absolute = true;

    double u_at(int iu) const { return -1.0 + 2.0 * iu / r; }
    double v_at(int iv) const { return -1.0 + 2.0 * iv / r; }
    double at(int iv, int iu) const { return power[std::size_t(iv) * r + iu]; }
    bool visible(int iv, int iu) const { return at(iv, iu) == at(iv, iu); }   // !NaN

    // flat index of the largest visible sample; exact ties go to the sample
    // nearest the grid center
    std::size_t peak_index() const;
    std::pair<double, double> peak_uv() const;
};

// Owns FFT plans and scratch buffers; reuse across evaluations of the same
// resolution for speed.  One instance per thread (not thread-safe).
class pattern_workspace {
  public:
    pattern_workspace();
    ~pattern_workspace();
    pattern_workspace(const pattern_workspace&) = delete;
    pattern_workspace& operator=(const pattern_workspace&) = delete;

    struct impl;
    impl& state() { return *impl_; }

  private:
    std::unique_ptr<impl> impl_;
};

// Per-tile steering phases beta = -2*pi*(x*u0 + y*v0) wrapped to (-pi, pi],
// indexed like the centers vector.  Angles in degrees.
std::vector<double> steering_phases(const std::vector<std::pair<double, double>>& centers,
                                    double theta0_deg, double phi0_deg);

// Complex excitation I(m,n) = amplitude * exp(j*beta(tile of (m,n))),
// indexed like membership.  phases.size() must equal the tile count.
std::vector<std::complex<double>> element_weights(const tiling_layout& layout,
                                                  const std::vector<double>& phases);

// Array pattern |E|^2 on the R x R grid (R >= 64).  The array factor is
// evaluated exactly at the grid nodes, via a zero-padded 2D FFT when the
// nodes land on DFT bins (always true for dx = dy = 0.5) and via per-axis
// DFT matrix products otherwise; a tabulated element pattern multiplies the
// result pointwise in power.
pattern_grid compute_pattern(pattern_workspace& ws,
                             const std::vector<std::complex<double>>& weights,
                             const aperture_spec& spec, int r,
                             const element_pattern& element = {});
pattern_grid compute_pattern(const std::vector<std::complex<double>>& weights,
                             const aperture_spec& spec, int r,
                             const element_pattern& element = {});

// Peak-relative sidelobe level in dB (negative for any real beam).  The
// mainlobe is the set of samples reachable from the peak by monotonically
// non-increasing 8-neighbor steps (flood to the first null ring); SLL is the
// largest visible sample outside that set, relative to the peak sample.
// A pattern whose mainlobe covers the whole visible region (possible only
// for very small apertures) reports the -300 dB floor: no sidelobes exist.
double sll(const pattern_grid& grid);

enum class cut_plane { azimuth, elevation };

// Half-power beamwidth in degrees along the grid cut through the peak
// (azimuth: v = v_peak varying u; elevation: u = u_peak varying v).
// Crossings located by linear interpolation in dB; the width is
// asin(c_right) - asin(c_left) of the crossing coordinates.
// throws errc::contract when a crossing falls outside the visible cut
double hpbw(const pattern_grid& grid, cut_plane plane);

// Peak directivity in dBi with hemisphere-only integration:
// D = 4*pi*P_peak / sum P * w_cell, cell weights = integral of
// du dv / sqrt(1-u^2-v^2) over the cell clipped to the visible disc.
// Requires an absolute (un-normalized) grid.
double directivity(const pattern_grid& grid);

struct cost_weights {
    double w_sl = 1.0;
    double w_bw = 0.0;
    double eta_sll_db = 0.0;
    double eta_az_deg = 0.0;
    double eta_el_deg = 0.0;
};

// Nonnegative hinge cost: w_sl*max(0, SLL - eta_sll) +
// w_bw*(max(0, az - eta_az) + max(0, el - eta_el)).
// throws errc::contract on negative weights
double cost(double sll_db, double hpbw_az_deg, double hpbw_el_deg, const cost_weights& w);

struct metrics_report {
    double sll_db = 0.0;
    double hpbw_az_deg = 0.0;
    double hpbw_el_deg = 0.0;
    double directivity_dbi = 0.0;
    double peak_u = 0.0;
    double peak_v = 0.0;
};

// Steer, evaluate, and extract the metric set for one layout.  hpbw and
// directivity can be skipped when only SLL is needed (optimizer hot path).
metrics_report evaluate_metrics(pattern_workspace& ws, const tiling_layout& layout,
                                double theta0_deg, double phi0_deg, int r,
                                const element_pattern& element = {},
                                bool want_hpbw = true, bool want_directivity = true);

// Worst-case SLL (max, dB) over a steering set [(theta0, phi0), ...].
// throws errc::contract on an empty set
double scan_cost(pattern_workspace& ws, const tiling_layout& layout,
                 const std::vector<std::pair<double, double>>& steer_set, int r,
                 const element_pattern& element = {});

} // namespace msta
