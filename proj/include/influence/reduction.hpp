#pragma once

#include "influence/graph.hpp"
#include "influence/solver.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace influence::reduction {

/// Positive CNF formula; variables are 1-based. When the declared count is odd
/// an unused variable is appended so both players choose equally often.
struct PosCnf {
    int num_vars = 0;
    int declared_vars = 0;
    std::vector<std::vector<int>> clauses;

    bool padded() const { return num_vars != declared_vars; }
};

/// Validates, sorts each clause, drops repeated literals, pads to an even count.
/// Throws InputError on empty clauses or out-of-range variables.
PosCnf make_pos_cnf(int num_vars, std::vector<std::vector<int>> clauses);

/// "p pcnf <vars> <clauses>" then clauses of positive integers, each ended by 0.
/// Lines starting with 'c' are comments. Negative literals are rejected.
PosCnf parse_pos_cnf(std::string_view text);
std::string format_pos_cnf(const PosCnf& f);

/// Reduced instance with the vertex ids of every gadget part.
struct Gadget {
    GraphPtr graph;
    int bag_size = 0;                 // m + 2n - 1
    std::vector<int> clause_vertex;   // White c_j
    std::vector<int> var_white;       // White x_i^w
    std::vector<int> var_black;       // Black x_i^b
    std::vector<std::vector<int>> bags; // Black pendants on x_i^w
};

/// Per clause a White c_j; per variable a White x_i^w, a Black x_i^b and
/// m + 2n - 1 Black pendants on x_i^w; x_i^w x_i^b is an edge and x_i^b c_j is
/// an edge whenever X_i occurs in C_j. Throws InputError when the graph would
/// exceed the vertex capacity.
Gadget reduce(const PosCnf& f);

/// Closed forms for the reduced graph.
int expected_vertices(const PosCnf& f);
int expected_edges(const PosCnf& f);

/// Alice (setting variables true) moves first; true when she can make the
/// formula true. Refuses more than 12 variables.
bool pos_cnf_winner(const PosCnf& f);

struct SoundnessReport {
    bool alice_wins = false;
    int left_score = 0;
    int threshold = 0;
    bool holds() const { return alice_wins == (left_score >= threshold); }
};

/// Compares the POS-CNF winner with Ls(reduce(f)) >= m.
SoundnessReport reduction_soundness_check(const PosCnf& f, solver::Solver& s);

/// Every bag lies inside a single twin class of the reduced graph. A class can
/// be larger than its bag, e.g. the pendants of a variable no clause uses.
bool bags_are_twin_classes(const Gadget& gadget);

/// Adds |k| isolated vertices (White for k > 0, Black for k < 0) so that
/// Ls(G) >= k becomes Ls(G') >= 0.
GraphPtr shift_threshold(const GroundGraph& g, int k);

} // namespace influence::reduction
