#include "msta/element_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "msta/errors.hpp"

namespace msta {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kFloorDb = -300.0;

double mag_db(const std::complex<double>& v) {
    double a = std::abs(v);
    return a < 1e-15 ? kFloorDb : 20.0 * std::log10(a);
}

// bring `p` within pi of `ref` by whole turns
double unwrap_to(double p, double ref) {
    while (p - ref > kPi) p -= 2.0 * kPi;
    while (p - ref < -kPi) p += 2.0 * kPi;
    return p;
}

} // namespace

element_pattern element_pattern::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_format, "cannot open element pattern file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) fail(errc::io_format, "empty element pattern file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "theta_deg,phi_deg,re,im")
        fail(errc::io_format, "element pattern header must be 'theta_deg,phi_deg,re,im'");

    struct row { double theta, phi, re, im; };
    std::vector<row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        row r{};
        char c1, c2, c3;
        if (!(ls >> r.theta >> c1 >> r.phi >> c2 >> r.re >> c3 >> r.im) || c1 != ',' ||
            c2 != ',' || c3 != ',')
            fail(errc::io_format, "bad element pattern row at line " + std::to_string(line_no));
        rows.push_back(r);
    }
    if (rows.empty()) fail(errc::io_format, "element pattern has no samples");

    element_pattern ep;
    for (const row& r : rows) {
        if (ep.theta_deg_.empty() || r.theta > ep.theta_deg_.back()) ep.theta_deg_.push_back(r.theta);
        else if (r.theta < ep.theta_deg_.back())
            fail(errc::io_format, "element pattern rows must be sorted by (theta, phi)");
    }
    std::size_t np = rows.size() / ep.theta_deg_.size();
    if (np == 0 || rows.size() != ep.theta_deg_.size() * np)
        fail(errc::io_format, "element pattern grid is not a complete theta x phi product");
    for (std::size_t p = 0; p < np; ++p) {
        double phi = rows[p].phi;
        if (p > 0 && phi <= ep.phi_deg_.back())
            fail(errc::io_format, "element pattern phi values must be strictly ascending");
        if (phi < 0.0 || phi >= 360.0)
            fail(errc::io_format, "element pattern phi values must lie in [0, 360)");
        ep.phi_deg_.push_back(phi);
    }
    ep.values_.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t it = i / np, ip = i % np;
        if (rows[i].theta != ep.theta_deg_[it] || rows[i].phi != ep.phi_deg_[ip])
            fail(errc::io_format, "element pattern grid is irregular at data line " +
                                      std::to_string(i + 2));
        ep.values_[i] = {rows[i].re, rows[i].im};
    }
    return ep;
}

bool element_pattern::covers_visible() const {
    if (is_isotropic()) return true;
    return theta_deg_.front() <= 1e-9 && theta_deg_.back() >= 90.0 - 1e-9;
}

std::complex<double> element_pattern::sample(double theta_deg, double phi_deg) const {
    if (is_isotropic()) return {1.0, 0.0};
    if (theta_deg < theta_deg_.front() - 1e-9 || theta_deg > theta_deg_.back() + 1e-9)
        fail(errc::contract, "element pattern query theta=" + std::to_string(theta_deg) +
                                 " outside the tabulated range");

    // theta segment + fraction
    std::size_t it;
    double ft;
    if (theta_deg_.size() == 1) {
        it = 0;
        ft = 0.0;
    } else {
        auto hi = std::upper_bound(theta_deg_.begin(), theta_deg_.end(), theta_deg);
        std::size_t seg = std::size_t(hi - theta_deg_.begin());
        if (seg == 0) seg = 1;
        if (seg >= theta_deg_.size()) seg = theta_deg_.size() - 1;
        it = seg - 1;
        ft = (theta_deg - theta_deg_[it]) / (theta_deg_[it + 1] - theta_deg_[it]);
        ft = std::clamp(ft, 0.0, 1.0);
    }

    // phi: wrap into [0, 360); between the last line and the first (+360) use
    // the nearest line instead of interpolating across the seam
    double phi = std::fmod(phi_deg, 360.0);
    if (phi < 0.0) phi += 360.0;
    std::size_t ip0, ip1;
    double fp;
    const std::size_t np = phi_deg_.size();
    if (np == 1) {
        ip0 = ip1 = 0;
        fp = 0.0;
    } else if (phi < phi_deg_.front() || phi >= phi_deg_.back()) {
        double gap_up = phi >= phi_deg_.back() ? phi - phi_deg_.back() : phi + 360.0 - phi_deg_.back();
        double gap_dn = phi >= phi_deg_.back() ? phi_deg_.front() + 360.0 - phi : phi_deg_.front() - phi;
        ip0 = ip1 = gap_up <= gap_dn ? np - 1 : 0;
        fp = 0.0;
    } else {
        auto hi = std::upper_bound(phi_deg_.begin(), phi_deg_.end(), phi);
        std::size_t seg = std::size_t(hi - phi_deg_.begin());
        if (seg >= np) seg = np - 1;
        ip0 = seg - 1;
        ip1 = seg;
        fp = (phi - phi_deg_[ip0]) / (phi_deg_[ip1] - phi_deg_[ip0]);
    }

    const std::size_t jt = theta_deg_.size() == 1 ? it : it + 1;
    std::complex<double> c00 = at(it, ip0), c01 = at(it, ip1);
    std::complex<double> c10 = at(jt, ip0), c11 = at(jt, ip1);

    double m00 = mag_db(c00), m01 = mag_db(c01), m10 = mag_db(c10), m11 = mag_db(c11);
    double p00 = std::arg(c00);
    double p01 = unwrap_to(std::arg(c01), p00);
    double p10 = unwrap_to(std::arg(c10), p00);
    double p11 = unwrap_to(std::arg(c11), p10);

    double mdB = (1 - ft) * ((1 - fp) * m00 + fp * m01) + ft * ((1 - fp) * m10 + fp * m11);
    double ph = (1 - ft) * ((1 - fp) * p00 + fp * p01) + ft * ((1 - fp) * p10 + fp * p11);
    double mag = mdB <= kFloorDb ? 0.0 : std::pow(10.0, mdB / 20.0);
    return std::polar(mag, ph);
}

double element_pattern::power(double theta_deg, double phi_deg) const {
    if (is_isotropic()) return 1.0;
    double a = std::abs(sample(theta_deg, phi_deg));
    return a * a;
}

} // namespace msta
