#pragma once

#include "influence/cgt.hpp"
#include "influence/rational.hpp"

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace influence::thermo {

/// Continuous piecewise-linear function on [0, inf). Piece k covers
/// [start_k, start_{k+1}) with value a + b*t; the last piece is unbounded.
/// Adjacent pieces with the same line are merged, so equal functions compare equal.
class PLFunction {
  public:
    struct Piece {
        Rational start, a, b;
        friend bool operator==(const Piece&, const Piece&) = default;
    };

    PLFunction() : PLFunction(Rational(0)) {}
    static PLFunction constant(Rational c) { return PLFunction(c); }
    static PLFunction linear(Rational a, Rational b);
    /// Pieces must start at 0, with strictly increasing starts. Throws InputError.
    static PLFunction from_pieces(std::vector<Piece> pieces);

    const std::vector<Piece>& pieces() const { return pieces_; }
    Rational operator()(const Rational& t) const;
    std::vector<Rational> breakpoints() const;

    /// Adds c + d*t.
    PLFunction plus_linear(const Rational& c, const Rational& d) const;
    PLFunction operator-(const PLFunction& o) const;
    /// Pointwise max/min; intersections inside a piece become new breakpoints.
    static PLFunction max(const PLFunction& f, const PLFunction& g);
    static PLFunction min(const PLFunction& f, const PLFunction& g);
    /// f on [0, t0), the constant c from t0 on.
    PLFunction clamped_after(const Rational& t0, const Rational& c) const;
    /// Least t >= 0 with f(t) = 0, if any.
    std::optional<Rational> least_root() const;
    bool nonincreasing() const;
    bool nondecreasing() const;

    friend bool operator==(const PLFunction&, const PLFunction&) = default;

  private:
    explicit PLFunction(Rational c) : pieces_{{Rational(0), c, Rational(0)}} {}
    void canonicalize();
    static PLFunction combine(const PLFunction& f, const PLFunction& g, bool take_max);

    std::vector<Piece> pieces_;
};

std::string to_string(const PLFunction& f);

struct Thermograph {
    PLFunction ls;        // t -> Ls(G_t)
    PLFunction rs;        // t -> Rs(G_t)
    PLFunction ls_tilde;  // t -> Ls of the taxed game before freezing
    PLFunction rs_tilde;
    Rational sigma;       // temperature
    Rational mast;        // frozen value, equal to the mean
};

/// Cools games of one store, memoizing per node. Thread-safe.
class Thermographer {
  public:
    explicit Thermographer(cgt::GameStore& store) : store_(store) {}

    /// Throws UniverseError if g has a zugzwang subgame.
    Thermograph thermograph(const cgt::Game& g);
    Rational temperature(const cgt::Game& g) { return thermograph(g).sigma; }
    Rational mean(const cgt::Game& g) { return thermograph(g).mast; }

    cgt::GameStore& store() { return store_; }

  private:
    const Thermograph& node_graph(std::uint32_t node);

    cgt::GameStore& store_;
    std::recursive_mutex mu_;
    std::map<std::uint32_t, Thermograph> memo_;
};

/// (Ls(nG)/n, Rs(nG)/n).
std::pair<Rational, Rational> mean_by_repetition(cgt::GameStore& store, const cgt::Game& g, int n);

struct CheckLine {
    std::string what;
    bool holds = false;
};

struct CheckReport {
    std::vector<CheckLine> lines;
    bool ok() const;
    void add(std::string what, bool holds) { lines.push_back({std::move(what), holds}); }
};

/// 0 <= Ls(G) - Ls(G_t) <= t and -t <= Rs(G) - Rs(G_t) <= 0.
CheckReport cooled_score_bounds_check(Thermographer& th, const cgt::Game& g, const Rational& t);

/// sigma(g+h) <= max(sigma(g), sigma(h)), equality when the temperatures differ,
/// m(g+h) = m(g) + m(h), and m - sigma <= Rs(g+h) <= m <= Ls(g+h) <= m + sigma
/// with sigma the larger of the two temperatures.
CheckReport sum_temperature_check(Thermographer& th, const cgt::Game& g, const cgt::Game& h);

/// m - sigma <= Rs <= m <= Ls <= m + sigma.
CheckReport mean_sandwich_check(Thermographer& th, const cgt::Game& g);

/// JSON object with sigma, mast and the pieces of the four trajectories (rationals as strings).
std::string thermograph_json(const Thermograph& tg);
/// "t,ls,rs" rows at every breakpoint of either trajectory, plus sigma + 1.
std::string thermograph_csv(const Thermograph& tg);

} // namespace influence::thermo
