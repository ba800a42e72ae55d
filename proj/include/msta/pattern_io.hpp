#pragma once

#include <iosfwd>

#include "msta/pattern.hpp"

namespace msta {

// "u,v,power_db" rows over the full grid (u fastest), peak-normalized dB,
// invisible samples written as "nan".  Byte-deterministic.
void export_pattern_csv(std::ostream& out, const pattern_grid& grid);

// Single principal-plane cut through the peak: "u,power_db" (azimuth) or
// "v,power_db" (elevation), visible samples only.
void export_cut_csv(std::ostream& out, const pattern_grid& grid, cut_plane plane);

} // namespace msta
