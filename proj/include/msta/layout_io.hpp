#pragma once

#include <iosfwd>
#include <string>

#include "msta/layout.hpp"

namespace msta {

// Layout text format, one file per layout:
//   line 1: "MSTA v1"
//   line 2: M N S L dx dy
//   lines 3..M+2: N tile IDs per line, bottom element row first
// The reader re-validates every structural invariant and rejects anything
// malformed with errc::io_format / errc::infeasible.
void write_layout(std::ostream& out, const tiling_layout& layout);
void write_layout_file(const std::string& path, const tiling_layout& layout);

tiling_layout read_layout(std::istream& in);
tiling_layout read_layout_file(const std::string& path);

} // namespace msta
