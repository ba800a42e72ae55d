#pragma once

#include <complex>
#include <string>
#include <vector>

namespace msta {

// Per-element radiation pattern e(theta, phi).  Either the isotropic unit
// pattern or a tabulated one loaded from CSV:
//   header "theta_deg,phi_deg,re,im", rows sorted by (theta, phi), complete
//   regular grid.
// Tabulated values are interpolated bilinearly in (theta, phi) on the
// dB-magnitude and unwrapped-phase planes; queries past the last phi row
// wrap to the nearest grid line (phi seam).
class element_pattern {
  public:
    element_pattern() = default;   // isotropic

    static element_pattern isotropic() { return {}; }
    static element_pattern load_csv(const std::string& path);

    bool is_isotropic() const { return theta_deg_.empty(); }

    // requires theta coverage of [0, 90] for visible-space evaluation
    bool covers_visible() const;

    std::complex<double> sample(double theta_deg, double phi_deg) const;
    double power(double theta_deg, double phi_deg) const;

  private:
    std::vector<double> theta_deg_;              // ascending
    std::vector<double> phi_deg_;                // ascending, [0, 360)
    std::vector<std::complex<double>> values_;   // theta-major grid

    std::complex<double> at(std::size_t it, std::size_t ip) const {
        return values_[it * phi_deg_.size() + ip];
    }
};

} // namespace msta
