#pragma once

#include "influence/graph.hpp"
#include "influence/score.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace influence::solver {

struct SolverOptions {
    bool prune_included = true;       // drop moves whose removed set is inside another's
    bool segment_keys = true;         // share memo entries between isomorphic segment unions
    std::uint64_t node_limit = 100'000'000;
    int threads = 1;                  // root moves evaluated in parallel when > 1
};

struct SolverStats {
    std::uint64_t expansions = 0;
    std::uint64_t hits = 0;
    std::uint64_t entries = 0;
};

/// Drops every move whose removed set is a strict subset of another move's,
/// and keeps the first of several moves with equal removed sets.
std::vector<RemovalSet> prune_dominated(const std::vector<RemovalSet>& moves);

/// Exact Left/Right scores by memoized minimax. The transposition table is
/// keyed by canonical_key and stores offset-free values, so one Solver can be
/// reused across positions and ground graphs. Thread-safe.
class Solver {
  public:
    explicit Solver(SolverOptions opts = {});
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    /// Both throw BudgetExhausted when the node limit is hit.
    int left_score(const Position& p);
    int right_score(const Position& p);
    ScorePair scores(const Position& p);

    SolverStats stats() const;
    const SolverOptions& options() const { return opts_; }
    void clear();

  private:
    struct Table;
    int ls_free(const Position& p, bool root);
    int rs_free(const Position& p, bool root);
    int search(const Position& p, Color mover, bool root);
    std::vector<RemovalSet> ordered_moves(const Position& p, Color mover) const;

    SolverOptions opts_;
    std::unique_ptr<Table> table_;
    std::atomic<std::uint64_t> expansions_{0};
    std::atomic<std::uint64_t> hits_{0};
};

/// True iff b is the color-swap of a (some isomorphism mapping alive vertices of a
/// onto alive vertices of b with every color flipped). Segment unions compare
/// exactly; other components are tested exhaustively when they have at most
/// `max_vertices` vertices, and reported as not negative otherwise.
bool is_negative_pair(const Position& a, const Position& b, int max_vertices = 10);

/// Scores of a disjunctive sum: negative pairs among the parts' components are
/// cancelled, offsets added, and the rest solved jointly.
ScorePair score_of_sum(Solver& solver, const std::vector<Position>& parts);

/// Position of the disjoint union of the parts (offsets summed).
Position union_position(const std::vector<Position>& parts);

struct AuditReport {
    std::uint64_t positions_checked = 0;
    std::optional<std::string> violation;
    bool clean() const { return !violation.has_value(); }
};

/// Walks every position reachable in at most `depth` moves and checks that Left
/// can move iff Right can, and that Ls >= Rs.
AuditReport milnor_audit(Solver& solver, const Position& p, int depth);

struct GiftReport {
    struct Line {
        std::string inequality;
        int lhs = 0;
        int rhs = 0;
        bool holds = false;
    };
    std::vector<Line> lines;
    bool ok() const;
};

/// Evaluates the four gift inequalities exactly:
///   Ls(G) <= Ls(G\W0) + |W0|,  Rs(G) >= Rs(G\B0) - |B0|,
///   Ls(G) >= Ls(G\B0) - |B0|,  Rs(G) <= Rs(G\W0) + |W0|.
/// Throws InputError when a gift vertex is dead or has the wrong color.
GiftReport gift_bounds_check(Solver& solver, const Position& p, const VertexSet& black_gift,
                             const VertexSet& white_gift);

} // namespace influence::solver
