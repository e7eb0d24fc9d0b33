#include "doctest.h"

#include "influence/error.hpp"
#include "influence/graph.hpp"
#include "influence/io.hpp"

#include <algorithm>

using namespace influence;

namespace {

VertexSet set_of(std::initializer_list<int> vs) {
    VertexSet s;
    for (int v : vs) s.set(v);
    return s;
}

int black_count(const GroundGraph& g) { return g.color_mask(Color::Black).count(); }

} // namespace

TEST_CASE("segments alternate colors from the signed end") {
    auto s = build_segment(-7);
    CHECK(s->size() == 7);
    CHECK(s->edge_count() == 6);
    CHECK(s->color(0) == Color::White);
    CHECK(s->color(1) == Color::Black);
    CHECK(s->color(6) == Color::White);

    auto one = build_segment(1);
    CHECK(one->size() == 1);
    CHECK(one->color(0) == Color::Black);
    CHECK(one->edge_count() == 0);

    auto two = build_segment(2);
    auto neg = negate_graph(*two);
    CHECK(neg->color(0) == Color::White);
    // Even parts are reported positive since S_{-2k} and S_{2k} are the same game.
    CHECK(segment_parts(Position(neg)) == std::optional<std::vector<int>>(std::vector<int>{2}));
    CHECK(canonical_key(Position(two)) == canonical_key(Position(neg)));

    CHECK_THROWS_AS(build_segment(0), InputError);
}

TEST_CASE("grid, hypercube, cylinder and torus sizes") {
    auto g27 = build_grid(2, 7);
    CHECK(g27->size() == 14);
    CHECK(g27->edge_count() == 7 + 2 * 6);
    CHECK(g27->color(0) == Color::Black);

    auto g38 = build_grid(3, 8);
    CHECK(g38->size() == 24);
    CHECK(g38->edge_count() == 3 * 7 + 2 * 8);

    auto row = build_grid(1, 6);
    CHECK(segment_parts(Position(row)) == std::optional<std::vector<int>>(std::vector<int>{6}));

    auto h4 = build_hypercube(4);
    CHECK(h4->size() == 16);
    CHECK(h4->edge_count() == 32);
    CHECK(black_count(*h4) == 8);

    auto h1 = build_hypercube(1);
    CHECK(h1->edge_count() == 1);
    CHECK(h1->color(1) == Color::Black);
    CHECK(h1->color(0) == Color::White);

    auto h3 = build_hypercube(3);
    CHECK(h3->size() == 8);
    CHECK(h3->edge_count() == 12);
    CHECK(black_count(*h3) == 4);

    auto t46 = build_torus(4, 6);
    CHECK(t46->size() == 24);
    CHECK(t46->edge_count() == 48);
    auto c46 = build_cylinder(4, 6);
    CHECK(c46->edge_count() == 44);

    auto t44 = build_torus(4, 4);
    for (int v = 0; v < t44->size(); ++v) CHECK(t44->degree(v) == 4);

    CHECK_THROWS_AS(build_grid(0, 3), InputError);
    CHECK_THROWS_AS(build_torus(3, 4), InputError);
}

TEST_CASE("graph construction rejects improper input") {
    using enum Color;
    CHECK_THROWS_AS(make_graph({Black, Black}, {{0, 1}}), InputError);
    CHECK_THROWS_AS(make_graph({Black, White}, {{0, 2}}), InputError);
    CHECK_THROWS_AS(make_graph({Black, White}, {{0, 1}, {1, 0}}), InputError);
    CHECK_THROWS_AS(make_graph({Black}, {{0, 0}}), InputError);
}

TEST_CASE("removal closure") {
    Position s5(build_segment(5));
    auto mid = removal_closure(s5, 2);
    CHECK(mid.size() == 5);
    CHECK(mid.gain == 5);

    Position s2(build_segment(2));
    auto end = removal_closure(s2, 0);
    CHECK(end.size() == 2);

    auto g55 = build_grid(5, 5);
    Position grid(g55);
    auto centre = removal_closure(grid, 12);
    CHECK(centre.size() == 5);
    CHECK(centre.removed == set_of({12, 7, 11, 13, 17}));

    // White move on S_5 from the second vertex takes the first three.
    auto w = removal_closure(s5, 1);
    CHECK(w.removed == set_of({0, 1, 2}));
    CHECK(w.gain == -3);

    Position partial(build_segment(5), set_of({3, 4}));
    CHECK_THROWS_AS(removal_closure(partial, 0), InputError);
}

TEST_CASE("legal moves") {
    Position s2(build_segment(2));
    auto black = legal_moves(s2, Color::Black);
    REQUIRE(black.size() == 1);
    CHECK(black[0].gain == 2);

    Position g27(build_grid(2, 7));
    CHECK(legal_moves(g27, Color::White).size() == 7);

    Position empty(build_segment(3), VertexSet{});
    CHECK(legal_moves(empty, Color::Black).empty());
    CHECK(legal_moves(empty, Color::White).empty());
}

TEST_CASE("isolated vertices are stripped into the offset") {
    using enum Color;
    auto g = make_graph({Black, White}, {});
    Position p(g);
    CHECK(p.empty());
    CHECK(p.offset() == 0);

    Position s1(build_segment(1));
    CHECK(s1.empty());
    CHECK(s1.offset() == 1);

    Position ends(build_segment(5), set_of({0, 4}));
    CHECK(ends.empty());
    CHECK(ends.offset() == 2);

    auto raw = Position::raw(build_segment(3), set_of({0, 2}), 4);
    auto stripped = strip_isolated(raw);
    CHECK(stripped.empty());
    CHECK(stripped.offset() == 6);
}

TEST_CASE("components") {
    Position s7(build_segment(7));
    auto after = apply_move(s7, removal_closure(s7, 3));
    auto parts = components(after);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].alive_count() == 2);
    CHECK(parts[1].alive_count() == 2);

    CHECK(components(Position(build_grid(3, 3))).size() == 1);

    auto both = disjoint_union({build_segment(9), build_segment(2)});
    auto comps = components(Position(both));
    REQUIRE(comps.size() == 2);
    std::vector<int> sizes{comps[0].alive_count(), comps[1].alive_count()};
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{2, 9});
}

TEST_CASE("canonical keys") {
    auto g27 = build_grid(2, 7);
    // Vertices 0,1,2 of the top row and 7,8,9 of the bottom row are each a Black-first S_3.
    Position top(g27, set_of({0, 1, 2}));
    Position bottom(g27, set_of({8, 9, 10}));
    REQUIRE(segment_parts(top) == std::optional<std::vector<int>>(std::vector<int>{3}));
    REQUIRE(segment_parts(bottom) == std::optional<std::vector<int>>(std::vector<int>{3}));
    CHECK(canonical_key(top) == canonical_key(bottom));

    Position p(build_grid(3, 3));
    CHECK(canonical_key(p) == canonical_key(p.shifted(7)));

    CHECK(canonical_key(Position(build_segment(2))) == canonical_key(Position(build_segment(-2))));
    CHECK(!(canonical_key(Position(build_segment(3))) == canonical_key(Position(build_segment(-3)))));
}

TEST_CASE("negation swaps colors and the offset") {
    Position p(build_segment(4), VertexSet::first_n(4), 3);
    auto n = negate(p);
    CHECK(n.offset() == -3);
    CHECK(n.ground().color(0) == Color::White);
    CHECK(segment_parts(n) == std::optional<std::vector<int>>(std::vector<int>{4}));
    CHECK(segment_parts(negate(Position(build_segment(5)))) == std::optional<std::vector<int>>(std::vector<int>{-5}));
}

TEST_CASE("twin classes") {
    using enum Color;
    // Star with a White center and three Black leaves: the leaves are twins.
    auto star = make_graph({White, Black, Black, Black}, {{0, 1}, {0, 2}, {0, 3}});
    auto classes = twin_classes(Position(star));
    REQUIRE(classes.size() == 2);
    CHECK(classes[0] == std::vector<int>{0});
    CHECK(classes[1] == std::vector<int>{1, 2, 3});
}

TEST_CASE("graph json round trip") {
    const std::string text = R"({"name": "house", "vertices": [
        {"id": 10, "color": "B"}, {"id": 11, "color": "W"}, {"id": 12, "color": "B"},
        {"id": 13, "color": "W"}, {"id": 14, "color": "B", "label": "tip"}],
        "edges": [[10, 11], [11, 12], [12, 13], [13, 14], [14, 11]]})";
    auto g = io::parse_graph_json(text);
    CHECK(g->size() == 5);
    CHECK(g->edge_count() == 5);
    CHECK(g->label(0) == "10");
    CHECK(g->label(4) == "tip");
    auto again = io::parse_graph_json(io::graph_json(*g));
    CHECK(again->edges() == g->edges());
    CHECK(again->name() == "house");

    CHECK_THROWS_AS(io::parse_graph_json("{"), InputError);
    CHECK_THROWS_AS(io::parse_graph_json(R"({"vertices": [{"id": 1, "color": "X"}], "edges": []})"), InputError);
    CHECK_THROWS_AS(io::parse_graph_json(R"({"vertices": [{"id": 1, "color": "B"}], "edges": [[1, 2]]})"),
                    InputError);
    auto empty = io::parse_graph_json(R"({"vertices": [], "edges": []})");
    CHECK(empty->size() == 0);
}
