#pragma once

#include "influence/graph.hpp"
#include "influence/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace influence::cgt {

/// Handle to a short scoring game: an interned node plus a number added to it.
/// Node 0 has no options, so {0, s} is the number s. Handles are only
/// meaningful inside the GameStore that produced them.
struct Game {
    std::uint32_t node = 0;
    Rational shift;

    bool is_number() const { return node == 0; }
    friend bool operator==(const Game&, const Game&) = default;
    friend std::strong_ordering operator<=>(const Game& a, const Game& b) {
        if (auto c = a.node <=> b.node; c != 0) return c;
        return a.shift <=> b.shift;
    }
};

struct StoreOptions {
    int max_vertices = 16; // from_position refuses larger positions
};

/// Hash-consed game DAG. Structurally identical games share one node and all
/// derived quantities are memoized per node. Every member is thread-safe.
class GameStore {
  public:
    explicit GameStore(StoreOptions opts = {});
    ~GameStore();
    GameStore(const GameStore&) = delete;
    GameStore& operator=(const GameStore&) = delete;

    Game number(Rational s) const { return {0, s}; }
    /// Both lists empty gives the number 0. Exactly one empty list throws
    /// UniverseError, since such a game is not dicotic.
    Game make(std::vector<Game> left, std::vector<Game> right);

    std::vector<Game> left_options(const Game& g);
    std::vector<Game> right_options(const Game& g);

    Rational ls(const Game& g);
    Rational rs(const Game& g);
    Game negate(const Game& g);
    Game sum(const Game& a, const Game& b);
    /// n copies of g (n >= 0).
    Game multiple(const Game& g, int n);
    int length(const Game& g);

    /// First subgame with Ls < Rs, described as text, or nullopt when g is in
    /// Milnor's universe.
    std::optional<std::string> zugzwang(const Game& g);
    /// Ls(g - h) = Rs(g - h) = 0. With `audit`, throws UniverseError when either
    /// input has a zugzwang subgame.
    bool equivalent(const Game& g, const Game& h, bool audit = true);
    /// Rs(g - h) >= 0.
    bool dominates(const Game& g, const Game& h);
    /// Recursively drops dominated Left options and dominating Right options.
    Game simplify(const Game& g);

    /// Game tree of a position; leaves carry the banked score. Throws InputError
    /// when the position has more alive vertices than the configured limit.
    Game from_position(const Position& p);

    /// "<L1,L2|R1>" with numbers written "p" or "p/q".
    std::string str(const Game& g);
    /// Throws InputError on malformed text.
    Game parse(std::string_view text);

    std::size_t node_count() const;
    const StoreOptions& options() const { return opts_; }

  private:
    struct Node {
        std::vector<Game> left, right;
    };
    struct PairHash {
        std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const;
    };

    std::uint32_t intern(std::vector<Game> left, std::vector<Game> right);
    static Game shifted(Game g, const Rational& s) { return {g.node, g.shift + s}; }
    Rational ls_node(std::uint32_t n);
    Rational rs_node(std::uint32_t n);
    std::uint32_t negate_node(std::uint32_t n);
    Game sum_node(std::uint32_t a, std::uint32_t b);
    int length_node(std::uint32_t n);
    std::optional<std::string> zugzwang_node(std::uint32_t n);
    std::uint32_t simplify_node(std::uint32_t n);
    bool dominates_unlocked(const Game& g, const Game& h);
    Game from_position_unlocked(const Position& p);
    std::string str_unlocked(const Game& g);

    StoreOptions opts_;
    mutable std::recursive_mutex mu_;
    std::vector<Node> nodes_;
    std::map<std::pair<std::vector<Game>, std::vector<Game>>, std::uint32_t> index_;
    std::vector<std::optional<Rational>> ls_, rs_;
    std::vector<std::int64_t> neg_, len_, simp_;
    std::vector<std::int8_t> audited_;
    std::unordered_map<std::pair<std::uint32_t, std::uint32_t>, Game, PairHash> sums_;
    std::map<std::pair<std::uint64_t, std::u16string>, Game> positions_;
};

} // namespace influence::cgt
