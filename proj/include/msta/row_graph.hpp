#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "msta/aperture.hpp"

namespace msta {

using big_uint = boost::multiprecision::cpp_int;

// All admissible anchor rows for a given anchor grid width: binary words of
// length word_bits where any two set bits are at least l_hat columns apart.
// Bit (k-1) of a word marks an anchor in column k, so the canonical ascending
// integer order matches the usual binary-literal display (column 1 is the
// rightmost character of word_string()).
struct row_dictionary {
    int word_bits = 0;  // anchor grid width (one bit per anchor column)
    int l_hat = 0;
    std::vector<std::uint64_t> words;   // ascending by integer value

    std::size_t size() const { return words.size(); }
};

// Exact dictionary size by recurrence T(n) = T(n-1) + T(n-l_hat),
// T(k) = k+1 for k < l_hat.  (Fibonacci numbers when l_hat = 2.)
big_uint dictionary_size(int word_bits, int l_hat);

// throws errc::invalid_instance for word_bits < 1 or l_hat < 2,
// errc::resource_limit when the dictionary would not fit in memory
// (word_bits > 63 or predicted size above ~16.7M words)
row_dictionary build_dictionary(int word_bits, int l_hat);

std::string word_string(const row_dictionary& dict, std::size_t index);

// Anchors in rows row_gap apart never overlap when row_gap >= l_hat;
// otherwise every pair of set columns must be >= l_hat apart.
bool rows_compatible(std::uint64_t a, std::uint64_t b, int row_gap, int l_hat);

// Dense symmetric adjacency over the dictionary: g[i][j] = 1 iff words i, j
// may occupy consecutive anchor rows.  Exact walk counting through this
// graph is valid only for l_hat = 2 (one-row lookback covers all conflicts).
struct solution_graph {
    std::size_t order = 0;              // H
    std::size_t stride = 0;             // 64-bit words per adjacency row
    std::vector<std::uint64_t> bits;    // row-major packed rows

    bool adjacent(std::size_t i, std::size_t j) const {
        return (bits[i * stride + j / 64] >> (j % 64)) & 1u;
    }
};

// throws errc::contract when dict.l_hat != 2,
// errc::resource_limit when the packed matrix would exceed ~2 GB
solution_graph build_graph(const row_dictionary& dict);

// Number of walks of anchor_rows nodes = 1^T G^(anchor_rows-1) 1, computed
// with exact integer matrix-vector iteration (no floating point anywhere).
big_uint count_tilings(const solution_graph& graph, int anchor_rows);

// Anchor encoding t: one dictionary index (0-based) per anchor row, bottom
// row first.  Feasible iff no two large tiles overlap, i.e. every pair of
// anchors separated by fewer than l_hat rows is also >= l_hat columns apart.
// throws errc::infeasible on out-of-range indices
bool is_feasible(const row_dictionary& dict, const std::vector<std::uint32_t>& t);

// Streams every feasible encoding in lexicographic order (t[0] major) via
// DFS with window pruning; returns the total streamed.  limit = 0 means
// unlimited; exceeding a nonzero limit raises errc::resource_limit after
// streaming `limit` encodings.
std::uint64_t enumerate_tilings(const row_dictionary& dict, int anchor_rows,
                                std::uint64_t limit,
                                const std::function<void(const std::vector<std::uint32_t>&)>& visit);

// Count-only variant (no visitor dispatch overhead, same traversal).
std::uint64_t enumerate_count(const row_dictionary& dict, int anchor_rows, std::uint64_t limit);

// "36.41e29" -> "3.641e+30": round a nonnegative big integer to 4
// significant digits in scientific notation (reporting format for counts).
std::string sci4(const big_uint& value);

} // namespace msta
