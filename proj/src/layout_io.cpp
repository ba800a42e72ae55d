#include "msta/layout_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "msta/errors.hpp"

namespace msta {

namespace {

std::string fmt_spacing(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_layout(std::ostream& out, const tiling_layout& layout) {
    validate_layout(layout);
    const auto& spec = layout.spec;
    out << "MSTA v1\n";
    out << spec.M << ' ' << spec.N << ' ' << spec.S << ' ' << spec.L << ' ' << fmt_spacing(spec.dx)
        << ' ' << fmt_spacing(spec.dy) << '\n';
    for (int m = 1; m <= spec.M; ++m) {
        for (int n = 1; n <= spec.N; ++n) {
            if (n > 1) out << ' ';
            out << layout.id_at(m, n);
        }
        out << '\n';
    }
}

void write_layout_file(const std::string& path, const tiling_layout& layout) {
    std::ofstream out(path);
    if (!out) fail(errc::io_format, "cannot open '" + path + "' for writing");
    write_layout(out, layout);
    if (!out) fail(errc::io_format, "write failed for '" + path + "'");
}

tiling_layout read_layout(std::istream& in) {
    std::string magic;
    if (!std::getline(in, magic)) fail(errc::io_format, "empty layout file");
    if (!magic.empty() && magic.back() == '\r') magic.pop_back();
    if (magic != "MSTA v1") fail(errc::io_format, "bad magic line '" + magic + "'");

    tiling_layout layout;
    auto& spec = layout.spec;
    std::string header;
    if (!std::getline(in, header)) fail(errc::io_format, "missing header line");
    {
        std::istringstream hs(header);
        std::string extra;
        if (!(hs >> spec.M >> spec.N >> spec.S >> spec.L >> spec.dx >> spec.dy) || (hs >> extra))
            fail(errc::io_format, "header must be exactly 'M N S L dx dy'");
    }
    validate(spec);

    layout.membership.assign(std::size_t(spec.M) * spec.N, 0);
    std::int32_t max_id = 0;
    for (int m = 1; m <= spec.M; ++m) {
        std::string line;
        if (!std::getline(in, line)) fail(errc::io_format, "missing element row " + std::to_string(m));
        std::istringstream ls(line);
        for (int n = 1; n <= spec.N; ++n) {
            std::int32_t id;
            if (!(ls >> id)) fail(errc::io_format, "row " + std::to_string(m) + " is short");
            if (id < 1) fail(errc::io_format, "tile IDs must be positive");
            layout.membership[std::size_t(m - 1) * spec.N + (n - 1)] = id;
            max_id = std::max(max_id, id);
        }
        std::int32_t trailing;
        if (ls >> trailing) fail(errc::io_format, "row " + std::to_string(m) + " has extra entries");
    }
    std::string rest;
    while (std::getline(in, rest))
        if (!rest.empty() && rest != "\r") fail(errc::io_format, "trailing content after the grid");

    // rebuild tile records from the membership grid, then validate fully
    layout.tiles.assign(std::size_t(max_id), tile{0, 0, 0});
    std::vector<std::int64_t> counts(std::size_t(max_id) + 1, 0);
    for (int m = 1; m <= spec.M; ++m)
        for (int n = 1; n <= spec.N; ++n) {
            std::int32_t id = layout.id_at(m, n);
            tile& tl = layout.tiles[std::size_t(id - 1)];
            if (counts[std::size_t(id)] == 0) {
                tl.row0 = m;   // first visit in scan order = bottom-left corner
                tl.col0 = n;
            } else {
                tl.row0 = std::min(tl.row0, m);
                tl.col0 = std::min(tl.col0, n);
            }
            ++counts[std::size_t(id)];
        }
    for (std::int32_t id = 1; id <= max_id; ++id) {
        std::int64_t c = counts[std::size_t(id)];
        if (c == 0) fail(errc::io_format, "tile ID " + std::to_string(id) + " never appears");
        if (c == std::int64_t(spec.S) * spec.S)
            layout.tiles[std::size_t(id - 1)].side = spec.S, ++layout.q_small;
        else if (c == std::int64_t(spec.L) * spec.L)
            layout.tiles[std::size_t(id - 1)].side = spec.L, ++layout.q_large;
        else
            fail(errc::io_format, "tile ID " + std::to_string(id) + " covers " + std::to_string(c) +
                                      " elements; not a small or large square");
    }
    validate_layout(layout);
    return layout;
}

tiling_layout read_layout_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_format, "cannot open layout file '" + path + "'");
    return read_layout(in);
}

} // namespace msta
