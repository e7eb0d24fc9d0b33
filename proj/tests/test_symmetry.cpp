#include "doctest.h"

#include "influence/symmetry.hpp"

#include <json.hpp>

using namespace influence;
using namespace influence::symmetry;

TEST_CASE("known BW-automorphisms verify") {
    auto h4 = build_hypercube(4);
    CHECK(verify_bw(*h4, hypercube_flip3(4)).ok());

    auto t46 = build_torus(4, 6);
    auto phi = lattice_shift(4, 6, true);
    // v_{i,j} -> v_{(i+2) mod 4, 5-j}
    CHECK(phi[0 * 6 + 0] == 2 * 6 + 5);
    CHECK(phi[3 * 6 + 4] == 1 * 6 + 1);
    CHECK(verify_bw(*t46, phi).ok());

    auto s2 = build_segment(2);
    auto swap = verify_bw(*s2, {1, 0});
    CHECK(swap.bijection);
    CHECK(swap.color_swap);
    CHECK(!swap.distance);
    CHECK(!swap.ok());
    CHECK(!swap.detail.empty());

    CHECK(!verify_bw(*h4, VertexMapping(16, 0)).bijection);
}

TEST_CASE("distances") {
    auto d = all_pairs_distances(*build_segment(4));
    CHECK(d[0][3] == 3);
    CHECK(d[1][1] == 0);
    auto two = all_pairs_distances(*disjoint_union({build_segment(2), build_segment(2)}));
    CHECK(two[0][2] == -1);
}

TEST_CASE("search outcomes") {
    for (auto g : {build_hypercube(3), build_hypercube(4), build_cylinder(6, 3), build_torus(4, 6)}) {
        auto r = find_bw(*g);
        REQUIRE(r.status == SearchStatus::Found);
        REQUIRE(r.mapping.has_value());
        CHECK(verify_bw(*g, *r.mapping).ok());
    }
    CHECK(find_bw(*build_grid(4, 4)).status == SearchStatus::ProvenAbsent);
    CHECK(find_bw(*build_segment(2)).status == SearchStatus::ProvenAbsent);
    CHECK(find_bw(*build_segment(3)).status == SearchStatus::ProvenAbsent);
    // Two far apart opposite copies of S_3 swap with each other.
    auto pair = disjoint_union({build_segment(3), build_segment(-3)});
    CHECK(find_bw(*pair).status == SearchStatus::Found);
    CHECK(find_bw(*build_torus(4, 6), 1).status == SearchStatus::BudgetExceeded);
    CHECK(to_string(SearchStatus::ProvenAbsent) == "proven-absent");
}

TEST_CASE("mirror strategy") {
    auto h3 = build_hypercube(3);
    auto m = mirror_strategy_check(*h3, hypercube_flip3(3));
    CHECK(m.ok);
    CHECK(m.lines > 0);
    auto c = build_cylinder(6, 3);
    CHECK(mirror_strategy_check(*c, lattice_shift(6, 3, false)).ok);
    // A mapping that is not a BW-automorphism lets the first player win somewhere.
    auto s4 = build_segment(4);
    CHECK(!mirror_strategy_check(*s4, {3, 2, 1, 0}).ok);
}

TEST_CASE("draw certificates") {
    auto h3 = certify_draw(*build_hypercube(3));
    CHECK(h3.certified());
    REQUIRE(h3.scores.has_value());
    CHECK(*h3.scores == ScorePair{0, 0});

    auto t44 = certify_draw(*build_torus(4, 4));
    CHECK(t44.certified());
    REQUIRE(t44.scores.has_value());
    CHECK(*t44.scores == ScorePair{0, 0});

    auto grid = certify_draw(*build_grid(4, 4));
    CHECK(!grid.certified());
    CHECK(grid.search.status == SearchStatus::ProvenAbsent);

    auto j = nlohmann::json::parse(report_json(*build_hypercube(3), h3));
    CHECK(j["status"] == "found");
    CHECK(nlohmann::json::parse(mapping_json({1, 0})) == nlohmann::json::array({1, 0}));
}
