#include "doctest.h"

#include "influence/error.hpp"
#include "influence/io.hpp"
#include "influence/reduction.hpp"
#include "support/oracles.hpp"

using namespace influence;
using namespace influence::reduction;

namespace {

const std::string kData = INFLUENCE_TEST_DATA;

} // namespace

TEST_CASE("positive CNF parsing") {
    auto f = parse_pos_cnf(io::read_text_file(kData + "/cycle4.cnf"));
    CHECK(f.num_vars == 4);
    CHECK(f.clauses == std::vector<std::vector<int>>{{1, 2}, {2, 3}, {3, 4}, {1, 4}});
    CHECK(parse_pos_cnf(format_pos_cnf(f)).clauses == f.clauses);

    auto one = parse_pos_cnf("p pcnf 1 1\n1 0\n");
    CHECK(one.declared_vars == 1);
    CHECK(one.num_vars == 2);
    CHECK(one.padded());

    CHECK_THROWS_AS(parse_pos_cnf("p pcnf 2 1\n1 -2 0\n"), InputError);
    CHECK_THROWS_AS(parse_pos_cnf("p pcnf 2 2\n1 2 0\n"), InputError);
    CHECK_THROWS_AS(parse_pos_cnf("p cnf 2 1\n1 2 0\n"), InputError);
    CHECK_THROWS_AS(parse_pos_cnf("p pcnf 2 1\n3 0\n"), InputError);
    CHECK_THROWS_AS(make_pos_cnf(2, {{}}), InputError);
}

TEST_CASE("gadget of the four-variable cycle") {
    auto f = parse_pos_cnf(io::read_text_file(kData + "/cycle4.cnf"));
    auto gd = reduce(f);
    CHECK(gd.graph->size() == 56);
    CHECK(gd.bag_size == 11);
    CHECK(expected_vertices(f) == 56);
    CHECK(static_cast<int>(gd.graph->edge_count()) == expected_edges(f));
    CHECK(gd.graph->edge_count() == 4 * 12 + 8);
    CHECK(bags_are_twin_classes(gd));
    for (int c : gd.clause_vertex) CHECK(gd.graph->color(c) == Color::White);
    for (int i = 0; i < 4; ++i) {
        CHECK(gd.graph->adjacent(gd.var_white[i], gd.var_black[i]));
        CHECK(static_cast<int>(gd.bags[i].size()) == 11);
    }
    CHECK(pos_cnf_winner(f) == oracle::cnf_alice_wins(f.num_vars, f.clauses));
}

TEST_CASE("positive CNF game winners") {
    auto single = make_pos_cnf(2, {{1}});
    CHECK(pos_cnf_winner(single));
    auto both = make_pos_cnf(2, {{1}, {2}});
    CHECK(!pos_cnf_winner(both));
    auto wide = make_pos_cnf(4, {{1, 2}, {3, 4}});
    CHECK(pos_cnf_winner(wide) == oracle::cnf_alice_wins(4, {{1, 2}, {3, 4}}));
}

TEST_CASE("reduction soundness for two variables") {
    solver::Solver s;
    const std::vector<std::vector<int>> clauses{{1}, {2}, {1, 2}};
    int checked = 0;
    for (std::size_t a = 0; a < clauses.size(); ++a) {
        auto f1 = make_pos_cnf(2, {clauses[a]});
        CHECK(reduction_soundness_check(f1, s).holds());
        CHECK(bags_are_twin_classes(reduce(f1)));
        ++checked;
        for (std::size_t b = a; b < clauses.size(); ++b) {
            auto f2 = make_pos_cnf(2, {clauses[a], clauses[b]});
            auto r = reduction_soundness_check(f2, s);
            CHECK(r.holds());
            CHECK(r.alice_wins == oracle::cnf_alice_wins(2, f2.clauses));
            CHECK(bags_are_twin_classes(reduce(f2)));
            ++checked;
        }
    }
    CHECK(checked == 9);
    auto gd = reduce(make_pos_cnf(2, {{1}, {2}}));
    CHECK(gd.graph->size() == 16);
}

TEST_CASE("threshold shift") {
    auto g = build_grid(2, 3);
    auto up = shift_threshold(*g, 3);
    CHECK(up->size() == 9);
    solver::Solver s;
    CHECK(s.left_score(Position(up)) == s.left_score(Position(g)) - 3);
    auto down = shift_threshold(*g, -2);
    CHECK(s.left_score(Position(down)) == s.left_score(Position(g)) + 2);
}
