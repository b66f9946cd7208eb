#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mapstat/mapping.hpp"
#include "mapstat/montecarlo.hpp"

using namespace mapstat;

TEST_SUITE_BEGIN("graph");

TEST_CASE("from_one_based validates targets") {
    CHECK_THROWS_AS(Mapping::from_one_based({}), std::invalid_argument);
    CHECK_THROWS_AS(Mapping::from_one_based({0}), std::invalid_argument);
    CHECK_THROWS_AS(Mapping::from_one_based({1, 3}), std::invalid_argument);
    const Mapping m = Mapping::from_one_based({2, 1});
    CHECK(m.size() == 2);
    CHECK(m.target_one_based(1) == 2);
    CHECK(m.target_one_based(2) == 1);
}

TEST_CASE("decompose: single vertex") {
    const auto d = decompose(Mapping::from_one_based({1}));
    REQUIRE(d.components.size() == 1);
    CHECK(d.components[0].size == 1);
    CHECK(d.components[0].cycle_len == 1);
    CHECK(d.components[0].tree_sizes == std::vector<std::int64_t>{1});
    CHECK(d.is_cyclic[0] == 1);
}

TEST_CASE("decompose: one component with a 2-cycle and a hanging path") {
    // 1 -> 2 -> 1, 3 -> 2, 4 -> 3
    const auto d = decompose(Mapping::from_one_based({2, 1, 2, 3}));
    REQUIRE(d.components.size() == 1);
    const auto& c = d.components[0];
    CHECK(c.size == 4);
    CHECK(c.cycle_len == 2);
    CHECK(c.min_label == 1);
    // vertex 1 carries only itself, vertex 2 carries {2,3,4}
    CHECK(c.tree_sizes == std::vector<std::int64_t>{1, 3});
    CHECK(d.is_cyclic == std::vector<std::uint8_t>{1, 1, 0, 0});
}

TEST_CASE("decompose: two fixed points plus a 3-cycle") {
    const auto d = decompose(Mapping::from_one_based({1, 2, 4, 5, 3}));
    REQUIRE(d.components.size() == 3);
    CHECK(d.components[0].size == 1);
    CHECK(d.components[0].cycle_len == 1);
    CHECK(d.components[1].size == 1);
    CHECK(d.components[1].cycle_len == 1);
    CHECK(d.components[2].size == 3);
    CHECK(d.components[2].cycle_len == 3);
    for (const auto& c : d.components)
        for (const auto t : c.tree_sizes) CHECK(t == 1);
}

TEST_CASE("stats: worked examples") {
    SUBCASE("[2,1,2,3]") {
        const auto s = mapping_stats(Mapping::from_one_based({2, 1, 2, 3}));
        CHECK(s.lambda == 2);
        CHECK(s.mu == 4);
        CHECK(s.nu == 2);
        CHECK(s.kappa == 2);
        CHECK(s.tau == 3);
        CHECK(s.richest_size == 4);
        CHECK(s.richest_is_largest);
        CHECK(s.tau_in_largest);
    }
    SUBCASE("[1,2,4,5,3]") {
        const auto s = mapping_stats(Mapping::from_one_based({1, 2, 4, 5, 3}));
        CHECK(s.lambda == 5);
        CHECK(s.mu == 3);
        CHECK(s.nu == 3);
        CHECK(s.kappa == 3);
        CHECK(s.tau == 1);
        CHECK(s.richest_is_largest);
        CHECK(s.tau_in_largest);
    }
    SUBCASE("n=1") {
        const auto s = mapping_stats(Mapping::from_one_based({1}));
        CHECK(s.lambda == 1);
        CHECK(s.mu == 1);
        CHECK(s.nu == 1);
        CHECK(s.kappa == 1);
        CHECK(s.tau == 1);
        CHECK(s.richest_is_largest);
        CHECK(s.tau_in_largest);
    }
}

TEST_CASE("stats: min-label tie-breaking") {
    // Components {1,2} (2-cycle) and {3,4} (3<->4 swap): tie on size, the
    // smaller min label wins for both mu and kappa.
    const auto s = mapping_stats(Mapping::from_one_based({2, 1, 4, 3}));
    CHECK(s.mu == 2);
    CHECK(s.nu == 2);
    CHECK(s.kappa == 2);
    CHECK(s.richest_size == 2);
    CHECK(s.richest_is_largest);
}

TEST_CASE("bruteforce cyclic flags") {
    CHECK(cyclic_vertices_bruteforce(Mapping::from_one_based({2, 1, 2, 3})) ==
          std::vector<std::uint8_t>{1, 1, 0, 0});
    CHECK(cyclic_vertices_bruteforce(Mapping::from_one_based({1})) ==
          std::vector<std::uint8_t>{1});
    CHECK(cyclic_vertices_bruteforce(Mapping::from_one_based({2, 2})) ==
          std::vector<std::uint8_t>{0, 1});
    Mapping big;
    big.next.assign(10001, 0);
    CHECK_THROWS_AS(cyclic_vertices_bruteforce(big), std::invalid_argument);
}

TEST_CASE("peeling matches brute force on random mappings") {
    SplitMix64 pick(2024);
    Mapping m;
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::int64_t>(1 + uniform_below(pick, 200));
        mc::random_mapping(n, pick, m);
        const auto d = decompose(m);
        CHECK(d.is_cyclic == cyclic_vertices_bruteforce(m));
    }
}

TEST_CASE("structural invariants on random mappings") {
    SplitMix64 pick(77);
    Mapping m;
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::int64_t>(1 + uniform_below(pick, 200));
        mc::random_mapping(n, pick, m);
        const auto d = decompose(m);
        const auto s = stats(d);

        std::int64_t size_sum = 0, cycle_sum = 0;
        for (const auto& c : d.components) {
            size_sum += c.size;
            cycle_sum += c.cycle_len;
            CHECK(c.cycle_len >= 1);
            CHECK(static_cast<std::int64_t>(c.tree_sizes.size()) == c.cycle_len);
            CHECK(std::accumulate(c.tree_sizes.begin(), c.tree_sizes.end(),
                                  std::int64_t{0}) == c.size);
        }
        CHECK(size_sum == n);
        CHECK(cycle_sum == s.lambda);
        CHECK(cycle_sum ==
              std::count(d.is_cyclic.begin(), d.is_cyclic.end(), std::uint8_t{1}));

        CHECK(s.nu >= 1);
        CHECK(s.nu <= std::min(s.mu, s.lambda));
        CHECK(s.nu <= s.kappa);
        CHECK(s.kappa <= s.lambda);
        CHECK(s.tau <= s.mu);
        CHECK(s.kappa <= s.richest_size);
        if (s.richest_is_largest) CHECK(s.nu == s.kappa);
    }
}

TEST_CASE("decompose is deterministic") {
    const Mapping m = mc::random_mapping(500, 99, 7);
    const auto a = decompose(m);
    const auto b = decompose(m);
    CHECK(a.component_id == b.component_id);
    CHECK(a.is_cyclic == b.is_cyclic);
    REQUIRE(a.components.size() == b.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        CHECK(a.components[i].size == b.components[i].size);
        CHECK(a.components[i].cycle_len == b.components[i].cycle_len);
        CHECK(a.components[i].min_label == b.components[i].min_label);
        CHECK(a.components[i].tree_sizes == b.components[i].tree_sizes);
    }
}

TEST_SUITE_END();
