#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "msta/aperture.hpp"
#include "msta/row_graph.hpp"

namespace msta {

// One subarray tile: physical bottom-left corner (1-based element
// coordinates) and its side length in elements (spec.S or spec.L).
struct tile {
    int row0 = 0;
    int col0 = 0;
    int side = 0;
};

// Complete partition of the aperture into small and large square tiles.
// membership[(m-1)*N + (n-1)] holds the 1-based tile ID of element (m,n),
// m=1 is the bottom row.  tiles[id-1] describes tile `id`.
struct tiling_layout {
    aperture_spec spec;
    std::vector<std::int32_t> membership;
    std::vector<tile> tiles;
    int q_small = 0;
    int q_large = 0;

    int q() const { return q_small + q_large; }
    std::int32_t id_at(int m, int n) const { return membership[std::size_t(m - 1) * spec.N + (n - 1)]; }
};

// Anchor coordinates (row, col) on the anchor grid, bottom row first,
// ascending columns within a row, extracted from an encoding t.
std::vector<std::pair<int, int>> anchors_of(const row_dictionary& dict,
                                            const std::vector<std::uint32_t>& t);

// Expands an anchor encoding into the physical layout.  Tile IDs are
// assigned in one row-major scan of the virtual grid from (1,1): an anchor
// pixel claims the next ID for its whole large tile, any pixel still
// uncovered claims the next ID as a small tile.  Virtual pixel (mh,nh) maps
// to physical rows (mh-1)*S+1 .. mh*S and columns likewise (stretch by S).
// throws errc::infeasible naming the first overlapping anchor pair
tiling_layout decode(const aperture_spec& spec, const row_dictionary& dict,
                     const std::vector<std::uint32_t>& t);

// Full structural check of an arbitrary layout (e.g. one read from disk):
// IDs 1..Q each form one contiguous square block of side S or L, every
// element is covered exactly once, counts match.  throws errc::infeasible
void validate_layout(const tiling_layout& layout);

// Per-tile phase-center coordinates in wavelengths, indexed like tiles[].
// Element (m,n) sits at x = (n - (N+1)/2)*dx, y = (m - (M+1)/2)*dy; a tile
// center is the mean over its member elements.
std::vector<std::pair<double, double>> tile_centers(const tiling_layout& layout);

// Isophoric two-level weights |I| = 1/sqrt(tile element count), one value
// per element, indexed like membership.
std::vector<double> element_amplitudes(const tiling_layout& layout);

} // namespace msta
