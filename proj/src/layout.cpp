#include "msta/layout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msta/errors.hpp"

namespace msta {

std::vector<std::pair<int, int>> anchors_of(const row_dictionary& dict,
                                            const std::vector<std::uint32_t>& t) {
    std::vector<std::pair<int, int>> anchors;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= dict.words.size())
            fail(errc::infeasible, "encoding index out of dictionary range");
        std::uint64_t w = dict.words[t[i]];
        for (int k = 0; k < dict.word_bits; ++k)
            if ((w >> k) & 1u) anchors.emplace_back(int(i) + 1, k + 1);
    }
    return anchors;
}

tiling_layout decode(const aperture_spec& spec, const row_dictionary& dict,
                     const std::vector<std::uint32_t>& t) {
    const virtual_grid grid = to_virtual(spec);
    if (grid.anchor_rows < 1 || grid.anchor_cols < 1)
        fail(errc::invalid_instance, "aperture is thinner than one large tile; no anchor grid");
    if (int(t.size()) != grid.anchor_rows)
        fail(errc::contract, "encoding length " + std::to_string(t.size()) +
                                 " != anchor rows " + std::to_string(grid.anchor_rows));
    if (dict.word_bits != grid.anchor_cols || dict.l_hat != grid.l_hat)
        fail(errc::contract, "dictionary does not match this aperture");

    const auto anchors = anchors_of(dict, t);
    const int mh = grid.m_hat, nh = grid.n_hat, lh = grid.l_hat;

    // paint large tiles onto the virtual grid; owner = index into `anchors`
    std::vector<int> owner(std::size_t(mh) * nh, -1);
    for (std::size_t a = 0; a < anchors.size(); ++a) {
        auto [ar, ac] = anchors[a];
        for (int r = ar; r < ar + lh; ++r)
            for (int c = ac; c < ac + lh; ++c) {
                int& cell = owner[std::size_t(r - 1) * nh + (c - 1)];
                if (cell >= 0) {
                    auto [br, bc] = anchors[std::size_t(cell)];
                    fail(errc::infeasible,
                         "anchors (" + std::to_string(br) + "," + std::to_string(bc) + ") and (" +
                             std::to_string(ar) + "," + std::to_string(ac) + ") overlap");
                }
                cell = int(a);
            }
    }

    // single row-major ID scan: an anchor claims its large tile, any still
    // unlabeled pixel claims a small tile
    std::vector<std::int32_t> vid(std::size_t(mh) * nh, 0);
    tiling_layout layout;
    layout.spec = spec;
    std::int32_t next_id = 0;
    std::size_t next_anchor = 0;
    std::vector<std::pair<int, int>> anchor_sorted = anchors;   // already (row, col) ordered
    for (int r = 1; r <= mh; ++r)
        for (int c = 1; c <= nh; ++c) {
            std::size_t cell = std::size_t(r - 1) * nh + (c - 1);
            if (next_anchor < anchor_sorted.size() && anchor_sorted[next_anchor].first == r &&
                anchor_sorted[next_anchor].second == c) {
                ++next_id;
                for (int rr = r; rr < r + lh; ++rr)
                    for (int cc = c; cc < c + lh; ++cc)
                        vid[std::size_t(rr - 1) * nh + (cc - 1)] = next_id;
                layout.tiles.push_back({(r - 1) * spec.S + 1, (c - 1) * spec.S + 1, spec.L});
                ++layout.q_large;
                ++next_anchor;
            } else if (vid[cell] == 0) {
                vid[cell] = ++next_id;
                layout.tiles.push_back({(r - 1) * spec.S + 1, (c - 1) * spec.S + 1, spec.S});
                ++layout.q_small;
            }
        }

    // stretch the virtual labeling S-fold onto the element lattice
    layout.membership.assign(std::size_t(spec.M) * spec.N, 0);
    for (int m = 1; m <= spec.M; ++m)
        for (int n = 1; n <= spec.N; ++n)
            layout.membership[std::size_t(m - 1) * spec.N + (n - 1)] =
                vid[std::size_t((m - 1) / spec.S) * nh + std::size_t((n - 1) / spec.S)];
    return layout;
}

void validate_layout(const tiling_layout& layout) {
    const auto& spec = layout.spec;
    validate(spec);
    if (layout.membership.size() != std::size_t(spec.M) * spec.N)
        fail(errc::infeasible, "membership grid size mismatch");
    const int q = int(layout.tiles.size());
    if (q == 0) fail(errc::infeasible, "layout has no tiles");

    int small = 0, large = 0;
    for (int id = 1; id <= q; ++id) {
        const tile& tl = layout.tiles[std::size_t(id - 1)];
        if (tl.side != spec.S && tl.side != spec.L)
            fail(errc::infeasible, "tile " + std::to_string(id) + " has side " +
                                       std::to_string(tl.side) + ", expected " +
                                       std::to_string(spec.S) + " or " + std::to_string(spec.L));
        if (tl.row0 < 1 || tl.col0 < 1 || tl.row0 + tl.side - 1 > spec.M ||
            tl.col0 + tl.side - 1 > spec.N)
            fail(errc::infeasible, "tile " + std::to_string(id) + " exceeds the aperture");
        (tl.side == spec.S ? small : large) += 1;
    }
    if (small != layout.q_small || large != layout.q_large)
        fail(errc::infeasible, "tile kind counts do not match the tile list");

    // each element labeled by exactly the tile whose block contains it
    std::vector<std::int64_t> seen(std::size_t(q) + 1, 0);
    for (int m = 1; m <= spec.M; ++m)
        for (int n = 1; n <= spec.N; ++n) {
            std::int32_t id = layout.id_at(m, n);
            if (id < 1 || id > q)
                fail(errc::infeasible, "element (" + std::to_string(m) + "," + std::to_string(n) +
                                           ") has out-of-range tile ID " + std::to_string(id));
            const tile& tl = layout.tiles[std::size_t(id - 1)];
            if (m < tl.row0 || m >= tl.row0 + tl.side || n < tl.col0 || n >= tl.col0 + tl.side)
                fail(errc::infeasible, "element (" + std::to_string(m) + "," + std::to_string(n) +
                                           ") labeled with non-containing tile " +
                                           std::to_string(id));
            ++seen[std::size_t(id)];
        }
    for (int id = 1; id <= q; ++id) {
        const tile& tl = layout.tiles[std::size_t(id - 1)];
        if (seen[std::size_t(id)] != std::int64_t(tl.side) * tl.side)
            fail(errc::infeasible, "tile " + std::to_string(id) + " covers " +
                                       std::to_string(seen[std::size_t(id)]) +
                                       " elements, expected a full square block");
    }
}

std::vector<std::pair<double, double>> tile_centers(const tiling_layout& layout) {
    const auto& spec = layout.spec;
    const double x0 = (spec.N + 1) / 2.0, y0 = (spec.M + 1) / 2.0;
    std::vector<std::pair<double, double>> centers;
    centers.reserve(layout.tiles.size());
    for (const tile& tl : layout.tiles) {
        double cm = tl.row0 + (tl.side - 1) / 2.0;   // mean member row
        double cn = tl.col0 + (tl.side - 1) / 2.0;
        centers.emplace_back((cn - x0) * spec.dx, (cm - y0) * spec.dy);
    }
    return centers;
}

std::vector<double> element_amplitudes(const tiling_layout& layout) {
    std::vector<double> alpha(layout.membership.size());
    std::vector<double> per_tile(layout.tiles.size());
    for (std::size_t i = 0; i < layout.tiles.size(); ++i)
        per_tile[i] = 1.0 / layout.tiles[i].side;   // 1/sqrt(side^2)
    for (std::size_t e = 0; e < layout.membership.size(); ++e)
        alpha[e] = per_tile[std::size_t(layout.membership[e] - 1)];
    return alpha;
}

} // namespace msta
