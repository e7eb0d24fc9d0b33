#include "doctest.h"

#include "influence/cgt.hpp"
#include "influence/error.hpp"
#include "influence/io.hpp"
#include "influence/solver.hpp"
#include "support/oracles.hpp"

#include <random>
#include <set>

using namespace influence;
using cgt::Game;
using cgt::GameStore;

namespace {

const std::string kData = INFLUENCE_TEST_DATA;

void collect_leaves(GameStore& st, const Game& g, std::set<Rational>& out) {
    if (g.is_number()) {
        out.insert(g.shift);
        return;
    }
    for (const auto& l : st.left_options(g)) collect_leaves(st, l, out);
    for (const auto& r : st.right_options(g)) collect_leaves(st, r, out);
}

Game segment_game(GameStore& st, int n) { return st.from_position(Position(build_segment(n))); }

} // namespace

TEST_CASE("numbers") {
    GameStore st;
    auto a = st.number(Rational(3, 2));
    auto b = st.number(-4);
    CHECK(st.sum(a, b) == st.number(Rational(-5, 2)));
    CHECK(st.ls(st.number(-3)) == Rational(-3));
    CHECK(st.rs(st.number(-3)) == Rational(-3));
    CHECK(st.make({}, {}) == st.number(0));
    CHECK(st.simplify(st.number(7)) == st.number(7));
    CHECK_THROWS_AS(st.make({st.number(1)}, {}), UniverseError);
}

TEST_CASE("game tree of the house graph") {
    GameStore st;
    auto g = st.from_position(Position(io::load_graph_file(kData + "/house.json")));
    CHECK(st.ls(g) == Rational(5));
    CHECK(st.rs(g) == Rational(-5));
    std::set<Rational> leaves;
    collect_leaves(st, g, leaves);
    CHECK(leaves == std::set<Rational>{Rational(-5), Rational(-1), Rational(5)});
}

TEST_CASE("S_5 and its simplified form") {
    GameStore st;
    auto s5 = segment_game(st, 5);
    CHECK(st.ls(s5) == Rational(5));
    CHECK(st.rs(s5) == Rational(-1));
    // The two extremity moves lead to the same game and are stored once.
    CHECK(st.left_options(s5).size() == 2);
    auto simple = st.simplify(s5);
    CHECK(st.str(simple) == "<5|<-1|-5>>");
    CHECK(st.str(st.parse("<5|<-1|-5>>")) == st.str(simple));
    CHECK(st.equivalent(simple, s5));
    // Longest line: an extremity move then the reply that clears the rest.
    CHECK(st.length(s5) == 2);
    oracle::RawSolver raw(oracle::path_union({5}));
    CHECK(st.length(s5) == raw.length());
}

TEST_CASE("negation and sums") {
    GameStore st;
    auto s3 = segment_game(st, 3);
    CHECK(st.ls(st.sum(s3, st.negate(s3))) == Rational(0));
    CHECK(st.rs(st.sum(s3, st.negate(s3))) == Rational(0));
    CHECK(st.negate(st.negate(s3)) == s3);
    auto g = st.parse("<2,<3|1/2>|-1>");
    CHECK(st.negate(st.negate(g)) == g);
    CHECK(st.str(st.negate(g)) == "<1|-2,<-1/2|-3>>");
}

TEST_CASE("equivalences on S_5 sums") {
    GameStore st;
    auto s5 = segment_game(st, 5);
    auto s2 = segment_game(st, 2);
    auto two_s5 = st.multiple(s5, 2);
    auto lhs = st.sum(two_s5, s2);
    CHECK(st.ls(lhs) == Rational(2));
    CHECK(st.rs(lhs) == Rational(2));
    CHECK(st.equivalent(two_s5, st.sum(st.number(2), s2)));
    CHECK(st.equivalent(st.multiple(s5, 4), st.number(4)));
    CHECK(st.equivalent(s5, s5));
    CHECK(!st.equivalent(s5, st.number(1)));
}

TEST_CASE("zugzwang detection") {
    GameStore st;
    auto z = st.parse("<-1|1>");
    CHECK(st.zugzwang(z).has_value());
    CHECK(!st.zugzwang(st.parse("<5|<-1|-5>>")).has_value());
    CHECK_THROWS_AS(st.equivalent(z, st.number(0)), UniverseError);
    auto nested = st.parse("<3|<-1|1>>");
    CHECK(st.zugzwang(nested).has_value());
}

TEST_CASE("domination") {
    GameStore st;
    auto s5 = segment_game(st, 5);
    const auto left = st.left_options(s5);
    // The middle move (value 5) dominates both extremity moves.
    for (const auto& l : left) CHECK(st.dominates(st.number(5), l));
    CHECK(!st.dominates(st.parse("<-1|-5>"), st.number(5)));
}

TEST_CASE("simplification preserves the game on random positions") {
    std::mt19937_64 rng(99);
    GameStore st;
    for (int trial = 0; trial < 25; ++trial) {
        auto g = oracle::random_graph(rng, 8, 0.35);
        auto game = st.from_position(Position(g));
        auto simple = st.simplify(game);
        CHECK(st.equivalent(simple, game));
        CHECK(st.ls(simple) == st.ls(game));
        CHECK(st.rs(simple) == st.rs(game));
    }
}

TEST_CASE("game trees reproduce the solver") {
    std::mt19937_64 rng(5);
    GameStore st;
    solver::Solver s;
    for (int trial = 0; trial < 40; ++trial) {
        Position p(oracle::random_graph(rng, 3 + trial % 8, 0.4));
        auto game = st.from_position(p);
        const auto want = s.scores(p);
        CHECK(st.ls(game) == Rational(want.ls));
        CHECK(st.rs(game) == Rational(want.rs));
    }
}

TEST_CASE("notation errors and limits") {
    GameStore st({.max_vertices = 6});
    CHECK_THROWS_AS(st.parse("<1|"), InputError);
    CHECK_THROWS_AS(st.parse("<1|2> x"), InputError);
    CHECK_THROWS_AS(st.parse("<|2>"), InputError);
    CHECK_THROWS_AS(st.parse("1/0"), InputError);
    CHECK_THROWS_AS(st.from_position(Position(build_segment(7))), InputError);
    CHECK(st.parse(" < 1 , 2 | -3 > ") == st.parse("<2,1|-3>"));
}
