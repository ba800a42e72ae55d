#include "msta/row_graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>

#include "msta/errors.hpp"

namespace msta {

namespace {

// widen every set bit to an interval of half-width l_hat-1; two rows closer
// than l_hat rows apart conflict exactly when this hits the other word
std::uint64_t dilate(std::uint64_t word, int l_hat) {
    std::uint64_t out = word;
    for (int s = 1; s < l_hat; ++s) out |= (word << s) | (word >> s);
    return out;
}

} // namespace

big_uint dictionary_size(int word_bits, int l_hat) {
    if (word_bits < 0 || l_hat < 2) fail(errc::invalid_instance, "bad dictionary parameters");
    std::vector<big_uint> t(std::size_t(std::max(word_bits + 1, l_hat)));
    for (int k = 0; k < l_hat && k <= word_bits; ++k) t[std::size_t(k)] = k + 1;
    for (int n = l_hat; n <= word_bits; ++n)
        t[std::size_t(n)] = t[std::size_t(n - 1)] + t[std::size_t(n - l_hat)];
    return t[std::size_t(word_bits)];
}

row_dictionary build_dictionary(int word_bits, int l_hat) {
    if (word_bits < 1) fail(errc::invalid_instance, "anchor grid width must be >= 1");
    if (l_hat < 2) fail(errc::invalid_instance, "side ratio must be >= 2");
    if (word_bits > 63)
        fail(errc::resource_limit, "anchor grid width " + std::to_string(word_bits) +
                                       " exceeds the 63-column dictionary limit");
    const big_uint predicted = dictionary_size(word_bits, l_hat);
    if (predicted > (std::uint64_t(1) << 24))
        fail(errc::resource_limit,
             "dictionary would hold " + predicted.str() + " words; refusing to materialize");

    row_dictionary dict;
    dict.word_bits = word_bits;
    dict.l_hat = l_hat;
    dict.words.reserve(std::size_t(predicted));

    // place set bits left to right with gaps >= l_hat; every admissible word
    // is reached exactly once
    struct frame { std::uint64_t mask; int next; };
    std::vector<frame> stack{{0u, 0}};
    while (!stack.empty()) {
        frame f = stack.back();
        stack.pop_back();
        dict.words.push_back(f.mask);
        for (int p = f.next; p < word_bits; ++p)
            stack.push_back({f.mask | (std::uint64_t(1) << p), p + l_hat});
    }
    std::sort(dict.words.begin(), dict.words.end());
    return dict;
}

std::string word_string(const row_dictionary& dict, std::size_t index) {
    if (index >= dict.words.size()) fail(errc::contract, "dictionary index out of range");
    std::string s(std::size_t(dict.word_bits), '0');
    for (int k = 0; k < dict.word_bits; ++k)
        if ((dict.words[index] >> k) & 1u) s[std::size_t(dict.word_bits - 1 - k)] = '1';
    return s;
}

bool rows_compatible(std::uint64_t a, std::uint64_t b, int row_gap, int l_hat) {
    if (row_gap < 0) fail(errc::contract, "row gap must be nonnegative");
    if (row_gap >= l_hat) return true;
    return (dilate(a, l_hat) & b) == 0;
}

solution_graph build_graph(const row_dictionary& dict) {
    if (dict.l_hat != 2)
        fail(errc::contract, "adjacency walk counting is exact only for side ratio 2");
    const std::size_t h = dict.words.size();
    if (h == 0) fail(errc::contract, "empty dictionary");
    solution_graph g;
    g.order = h;
    g.stride = (h + 63) / 64;
    if (h * g.stride > (std::size_t(1) << 28))
        fail(errc::resource_limit, "adjacency matrix too large to build");
    g.bits.assign(h * g.stride, 0u);

    std::vector<std::uint64_t> dil(h);
    for (std::size_t i = 0; i < h; ++i) dil[i] = dilate(dict.words[i], 2);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = i; j < h; ++j)
            if ((dil[i] & dict.words[j]) == 0) {
                g.bits[i * g.stride + j / 64] |= std::uint64_t(1) << (j % 64);
                g.bits[j * g.stride + i / 64] |= std::uint64_t(1) << (i % 64);
            }
    return g;
}

big_uint count_tilings(const solution_graph& graph, int anchor_rows) {
    if (anchor_rows < 1) fail(errc::contract, "need at least one anchor row");
    const std::size_t h = graph.order;
    std::vector<big_uint> v(h, 1), next(h);
    for (int step = 1; step < anchor_rows; ++step) {
        for (std::size_t i = 0; i < h; ++i) {
            big_uint acc = 0;
            const std::uint64_t* row = &graph.bits[i * graph.stride];
            for (std::size_t w = 0; w < graph.stride; ++w) {
                std::uint64_t word = row[w];
                while (word) {
                    int bit = std::countr_zero(word);
                    acc += v[w * 64 + std::size_t(bit)];
                    word &= word - 1;
                }
            }
            next[i] = acc;
        }
        v.swap(next);
    }
    big_uint total = 0;
    for (const auto& x : v) total += x;
    return total;
}

bool is_feasible(const row_dictionary& dict, const std::vector<std::uint32_t>& t) {
    const std::size_t h = dict.words.size();
    for (std::uint32_t g : t)
        if (g >= h)
            fail(errc::infeasible, "encoding index " + std::to_string(g) +
                                       " out of dictionary range [0, " + std::to_string(h) + ")");
    for (std::size_t i = 1; i < t.size(); ++i) {
        std::uint64_t d = dilate(dict.words[t[i]], dict.l_hat);
        std::size_t back = std::min<std::size_t>(std::size_t(dict.l_hat) - 1, i);
        for (std::size_t g = 1; g <= back; ++g)
            if (d & dict.words[t[i - g]]) return false;
    }
    return true;
}

namespace {

template <typename Visit>
std::uint64_t dfs_enumerate(const row_dictionary& dict, int anchor_rows, std::uint64_t limit,
                            Visit&& visit) {
    if (anchor_rows < 1) fail(errc::contract, "need at least one anchor row");
    const std::size_t h = dict.words.size();
    std::vector<std::uint64_t> dil(h);
    for (std::size_t i = 0; i < h; ++i) dil[i] = dilate(dict.words[i], dict.l_hat);

    std::vector<std::uint32_t> t(std::size_t(anchor_rows), 0);
    std::uint64_t count = 0;
    int depth = 0;
    std::uint32_t candidate = 0;
    for (;;) {
        if (candidate == h) {            // backtrack
            if (depth == 0) break;
            --depth;
            candidate = t[std::size_t(depth)] + 1;
            continue;
        }
        bool ok = true;
        int back = std::min(dict.l_hat - 1, depth);
        for (int g = 1; g <= back && ok; ++g)
            ok = (dict.words[candidate] & dil[t[std::size_t(depth - g)]]) == 0;
        if (!ok) {
            ++candidate;
            continue;
        }
        t[std::size_t(depth)] = candidate;
        if (depth + 1 == anchor_rows) {
            if (limit != 0 && count == limit)
                fail(errc::resource_limit, "enumeration exceeds the cap of " +
                                               std::to_string(limit) + " tilings");
            ++count;
            visit(t);
            ++candidate;
        } else {
            ++depth;
            candidate = 0;
        }
    }
    return count;
}

} // namespace

std::uint64_t enumerate_tilings(const row_dictionary& dict, int anchor_rows, std::uint64_t limit,
                                const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
    return dfs_enumerate(dict, anchor_rows, limit, visit);
}

std::uint64_t enumerate_count(const row_dictionary& dict, int anchor_rows, std::uint64_t limit) {
    return dfs_enumerate(dict, anchor_rows, limit, [](const std::vector<std::uint32_t>&) {});
}

std::string sci4(const big_uint& value) {
    if (value < 0) fail(errc::contract, "counts are nonnegative");
    std::string digits = value.str();
    if (value == 0) return "0.000e+00";
    int exponent = int(digits.size()) - 1;
    long mantissa = 0;
    for (std::size_t i = 0; i < 4; ++i)
        mantissa = mantissa * 10 + (i < digits.size() ? digits[i] - '0' : 0);
    if (digits.size() > 4 && digits[4] >= '5') ++mantissa;
    if (mantissa == 10000) {
        mantissa = 1000;
        ++exponent;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%ld.%03lde%+03d", mantissa / 1000, mantissa % 1000, exponent);
    return buf;
}

} // namespace msta
