#pragma once

#include "influence/graph.hpp"
#include "influence/score.hpp"
#include "influence/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace influence::symmetry {

/// image[v] is the vertex v is sent to.
using VertexMapping = std::vector<int>;

struct BwCheck {
    bool bijection = false;
    bool automorphism = false; // edges preserved in both directions
    bool involution = false;
    bool color_swap = false;
    bool distance = false;     // d(v, image[v]) >= 3 for every v
    std::string detail;        // first failure, empty when all hold

    bool ok() const { return bijection && automorphism && involution && color_swap && distance; }
};

BwCheck verify_bw(const GroundGraph& g, const VertexMapping& m);

/// BFS distances between all vertex pairs; -1 for different components.
std::vector<std::vector<int>> all_pairs_distances(const GroundGraph& g);

enum class SearchStatus { Found, ProvenAbsent, BudgetExceeded };
std::string to_string(SearchStatus s);

struct SearchResult {
    SearchStatus status = SearchStatus::ProvenAbsent;
    std::optional<VertexMapping> mapping;
    std::uint64_t nodes = 0;
};

/// Backtracking search for a BW-automorphism. Black vertices are paired with
/// White ones in BFS order; a pair is rejected as soon as it breaks edge
/// preservation against the pairs already fixed, the distance bound, or the
/// (degree, neighbour-degree multiset) invariant. `budget` caps search nodes.
SearchResult find_bw(const GroundGraph& g, std::uint64_t budget = 10'000'000);

struct MirrorResult {
    bool ok = false;
    std::uint64_t lines = 0;  // distinct positions reached by the mirror player
    std::string detail;       // first failure
};

/// Simulates the second player answering every move u with image[u], over all
/// choices of the first player and both choices of who starts. Succeeds when
/// every reply is legal and every finished game scores 0.
MirrorResult mirror_strategy_check(const GroundGraph& g, const VertexMapping& m);

struct DrawOptions {
    std::uint64_t budget = 10'000'000;
    int solve_limit = 26;   // exact solve only up to this many vertices
    int mirror_limit = 20;  // mirror simulation only up to this many vertices
    solver::SolverOptions solver;
};

struct DrawReport {
    SearchResult search;
    std::optional<BwCheck> check;
    std::optional<ScorePair> scores;
    std::optional<MirrorResult> mirror;

    /// A verified mapping whose optional cross-checks all agree with value 0.
    bool certified() const;
};

DrawReport certify_draw(const GroundGraph& g, const DrawOptions& opts = {});

/// Mapping as a JSON array of images.
std::string mapping_json(const VertexMapping& m);
/// Whole report as a JSON object.
std::string report_json(const GroundGraph& g, const DrawReport& r);

/// Known mappings used to build test fixtures.
VertexMapping hypercube_flip3(int n);
/// n x m cylinder or torus, ids i*m+j: rows shift by n/2 and, when `mirror_columns`, j -> m-1-j.
VertexMapping lattice_shift(int n, int m, bool mirror_columns);

} // namespace influence::symmetry
