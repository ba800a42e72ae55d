#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "msta/errors.hpp"
#include "msta/row_graph.hpp"
#include "oracles.hpp"

using namespace msta;

TEST_CASE("dictionary size recurrence and brute filter agree") {
    for (int lh = 2; lh <= 4; ++lh)
        for (int n = 1; n <= 16; ++n) {
            auto brute = oracle::brute_words(n, lh);
            CHECK(dictionary_size(n, lh) == brute.size());
            row_dictionary d = build_dictionary(n, lh);
            REQUIRE(d.size() == brute.size());
            CHECK(std::equal(d.words.begin(), d.words.end(), brute.begin()));
        }
}

TEST_CASE("dictionary cardinalities for the benchmark widths") {
    CHECK(build_dictionary(1, 2).size() == 2);
    CHECK(build_dictionary(3, 2).size() == 5);
    CHECK(build_dictionary(7, 2).size() == 34);
    CHECK(build_dictionary(14, 2).size() == 987);
    CHECK(build_dictionary(15, 2).size() == 1597);
    CHECK(dictionary_size(19, 2) == 10946);
    CHECK(build_dictionary(5, 3).size() == 9);
}

TEST_CASE("fibonacci recurrence for pairs of adjacent widths") {
    for (int n = 3; n <= 30; ++n)
        CHECK(dictionary_size(n, 2) == dictionary_size(n - 1, 2) + dictionary_size(n - 2, 2));
    CHECK(dictionary_size(1, 2) == 2);
    CHECK(dictionary_size(2, 2) == 3);
}

TEST_CASE("canonical order and word rendering") {
    row_dictionary d = build_dictionary(3, 2);
    std::vector<std::uint64_t> expect = {0, 1, 2, 4, 5};
    CHECK(d.words == expect);
    CHECK(word_string(d, 0) == "000");
    CHECK(word_string(d, 1) == "001");
    CHECK(word_string(d, 2) == "010");
    CHECK(word_string(d, 3) == "100");
    CHECK(word_string(d, 4) == "101");
}

TEST_CASE("dictionary guards") {
    CHECK_THROWS_AS(build_dictionary(0, 2), error);
    CHECK_THROWS_AS(build_dictionary(5, 1), error);
    CHECK_THROWS_AS(build_dictionary(64, 2), error);   // word does not fit
}

TEST_CASE("row compatibility matches the painter oracle") {
    for (int lh = 2; lh <= 3; ++lh) {
        int n = 6;
        auto words = oracle::brute_words(n, lh);
        for (std::uint64_t a : words)
            for (std::uint64_t b : words)
                for (int gap = 1; gap <= lh + 1; ++gap) {
                    // two anchor rows `gap` apart on a tall enough grid
                    int m_hat = gap + 2 * lh;
                    std::vector<std::pair<int, int>> anchors;
                    for (int c = 0; c < n; ++c) {
                        if ((a >> c) & 1) anchors.emplace_back(1, c + 1);
                        if ((b >> c) & 1) anchors.emplace_back(1 + gap, c + 1);
                    }
                    bool expect = oracle::paint_ok(m_hat, n + lh - 1, lh, anchors);
                    CHECK(rows_compatible(a, b, gap, lh) == expect);
                }
    }
}

TEST_CASE("specific adjacency facts") {
    CHECK(rows_compatible(0b101, 0b000, 1, 2));
    CHECK_FALSE(rows_compatible(0b010, 0b100, 1, 2));      // columns 2,3 too close
    CHECK_FALSE(rows_compatible(0b00010, 0b00100, 1, 3));  // columns 2,3 with l_hat=3
    CHECK(rows_compatible(0b00010, 0b00100, 3, 3));        // disjoint vertical ranges

    row_dictionary d = build_dictionary(3, 2);
    solution_graph g = build_graph(d);
    REQUIRE(g.order == 5);
    // 010 and 101 touch every non-zero word, so both pair only with 000
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(g.adjacent(2, j) == (j == 0));
        CHECK(g.adjacent(4, j) == (j == 0));
    }
    for (std::size_t j = 0; j < 5; ++j) CHECK(g.adjacent(0, j));   // zeros row: full degree
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(g.adjacent(i, j) == g.adjacent(j, i));
}

TEST_CASE("graph construction rejects l_hat > 2") {
    row_dictionary d = build_dictionary(5, 3);
    CHECK_THROWS_AS(build_graph(d), error);
}

TEST_CASE("walk counts match the odometer oracle on small grids") {
    for (int n_x = 1; n_x <= 5; ++n_x)
        for (int rows = 1; rows <= 4; ++rows) {
            row_dictionary d = build_dictionary(n_x, 2);
            auto words = oracle::brute_words(n_x, 2);
            big_uint got = count_tilings(build_graph(d), rows);
            std::uint64_t expect = oracle::brute_count(words, rows, rows + 1, n_x + 1, 2);
            CHECK(got == expect);
        }
}

TEST_CASE("benchmark counts") {
    auto count_for = [](int n_x, int rows) {
        return count_tilings(build_graph(build_dictionary(n_x, 2)), rows);
    };
    CHECK(count_for(3, 3) == 35);
    CHECK(count_for(7, 4) == 16334);
    CHECK(count_for(7, 7) == 12727570);
    CHECK(count_for(11, 11) == big_uint("60711713670028729"));
    CHECK(count_for(15, 15) == big_uint("3641548665525780178990584908643"));
    CHECK(count_for(7, 1) == 34);   // single row: every word stands alone
}

TEST_CASE("four significant digit rendering") {
    CHECK(sci4(big_uint(0)) == "0.000e+00");
    CHECK(sci4(big_uint(35)) == "3.500e+01");
    CHECK(sci4(big_uint(16334)) == "1.633e+04");
    CHECK(sci4(big_uint(12727570)) == "1.273e+07");
    CHECK(sci4(big_uint(99999)) == "1.000e+05");   // carry across the decade
    CHECK(sci4(big_uint("60711713670028729")) == "6.071e+16");
    CHECK(sci4(big_uint("3641548665525780178990584908643")) == "3.642e+30");
}

TEST_CASE("feasibility equals the painter on every stack of a small instance") {
    // N_x=5, l_hat=3, 2 anchor rows: H=9, 81 stacks, exhaustive
    row_dictionary d3 = build_dictionary(5, 3);
    for (std::uint32_t a = 0; a < d3.size(); ++a)
        for (std::uint32_t b = 0; b < d3.size(); ++b) {
            std::vector<std::uint32_t> t = {a, b};
            std::vector<std::uint64_t> stack = {d3.words[a], d3.words[b]};
            bool expect = oracle::paint_ok(4, 7, 3, oracle::anchors_from(stack, 5));
            CHECK(is_feasible(d3, t) == expect);
        }

    // N_x=4, l_hat=2, 4 anchor rows: 8^4 = 4096 stacks
    row_dictionary d2 = build_dictionary(4, 2);
    std::vector<std::uint32_t> t(4, 0);
    std::uint64_t feasible = 0;
    while (true) {
        std::vector<std::uint64_t> stack;
        for (auto i : t) stack.push_back(d2.words[i]);
        bool expect = oracle::paint_ok(5, 5, 2, oracle::anchors_from(stack, 4));
        CHECK(is_feasible(d2, t) == expect);
        feasible += expect;
        int pos = 3;
        while (pos >= 0 && ++t[std::size_t(pos)] == d2.size()) t[std::size_t(pos--)] = 0;
        if (pos < 0) break;
    }
    CHECK(feasible == count_tilings(build_graph(d2), 4));
}

TEST_CASE("out of range gene is an encoding error") {
    row_dictionary d = build_dictionary(3, 2);
    std::vector<std::uint32_t> t = {0, 5};
    CHECK_THROWS_AS(is_feasible(d, t), error);
}

TEST_CASE("enumeration is lexicographic, complete, and matches the count") {
    for (int n_x = 2; n_x <= 7; ++n_x)
        for (int rows = 1; rows <= 5; ++rows) {
            row_dictionary d = build_dictionary(n_x, 2);
            big_uint expect = count_tilings(build_graph(d), rows);
            std::vector<std::vector<std::uint32_t>> seen;
            std::uint64_t n = enumerate_tilings(d, rows, 0, [&](const std::vector<std::uint32_t>& t) {
                seen.push_back(t);
            });
            CHECK(big_uint(n) == expect);
            CHECK(seen.size() == n);
            CHECK(std::is_sorted(seen.begin(), seen.end()));
            CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
            for (const auto& t : seen) CHECK(is_feasible(d, t));
        }
}

TEST_CASE("enumeration for l_hat=3 matches the odometer oracle") {
    row_dictionary d = build_dictionary(5, 3);
    auto words = oracle::brute_words(5, 3);
    for (int rows = 1; rows <= 4; ++rows) {
        std::uint64_t got = enumerate_count(d, rows, 0);
        CHECK(got == oracle::brute_count(words, rows, rows + 2, 7, 3));
    }
}

TEST_CASE("enumeration limit trips the resource guard") {
    row_dictionary d = build_dictionary(7, 2);
    std::uint64_t streamed = 0;
    CHECK_THROWS_AS(
        enumerate_tilings(d, 4, 100, [&](const std::vector<std::uint32_t>&) { ++streamed; }),
        error);
    CHECK(streamed == 100);
    try {
        enumerate_count(d, 4, 100);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.kind() == errc::resource_limit);
    }
}
