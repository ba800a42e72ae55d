#include "msta/pattern_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "msta/errors.hpp"

namespace msta {

void export_pattern_csv(std::ostream& out, const pattern_grid& grid) {
    const double peak = grid.power[grid.peak_index()];
    out << "u,v,power_db\n";
    char buf[96];
    for (int jv = 0; jv < grid.r; ++jv)
        for (int ju = 0; ju < grid.r; ++ju) {
            double p = grid.at(jv, ju);
            if (p == p) {
                double db = 10.0 * std::log10(std::max(p / peak, 1e-30));
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.4f\n", grid.u_at(ju), grid.v_at(jv),
                              db);
            } else {
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,nan\n", grid.u_at(ju), grid.v_at(jv));
            }
            out << buf;
        }
}

void export_cut_csv(std::ostream& out, const pattern_grid& grid, cut_plane plane) {
    const double peak = grid.power[grid.peak_index()];
    const std::size_t pk = grid.peak_index();
    const int pv = int(pk / std::size_t(grid.r)), pu = int(pk % std::size_t(grid.r));
    out << (plane == cut_plane::azimuth ? "u,power_db\n" : "v,power_db\n");
    char buf[64];
    for (int i = 0; i < grid.r; ++i) {
        double p = plane == cut_plane::azimuth ? grid.at(pv, i) : grid.at(i, pu);
        if (p != p) continue;
        double c = plane == cut_plane::azimuth ? grid.u_at(i) : grid.v_at(i);
        double db = 10.0 * std::log10(std::max(p / peak, 1e-30));
        std::snprintf(buf, sizeof buf, "%.10g,%.4f\n", c, db);
        out << buf;
    }
}

} // namespace msta
