#pragma once

#include "influence/bits.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace influence {

/// Black belongs to Left, White to Right.
enum class Color : std::uint8_t { Black, White };

inline Color opposite(Color c) { return c == Color::Black ? Color::White : Color::Black; }
inline int sign_of(Color c) { return c == Color::Black ? 1 : -1; }
inline char color_char(Color c) { return c == Color::Black ? 'B' : 'W'; }

/// Immutable bicolored bipartite graph. Every edge joins a Black and a White
/// vertex; no loops, no parallel edges, at most kMaxVertices vertices.
class GroundGraph {
  public:
    /// Throws InputError when the coloring is not proper or the edge list is malformed.
    GroundGraph(std::vector<Color> colors, const std::vector<std::pair<int, int>>& edges, std::string name = {},
                std::vector<std::string> labels = {});

    int size() const { return static_cast<int>(colors_.size()); }
    Color color(int v) const { return colors_[v]; }
    const VertexSet& neighbors(int v) const { return masks_[v]; }
    const std::vector<int>& adjacency(int v) const { return adjacency_[v]; }
    const VertexSet& color_mask(Color c) const { return c == Color::Black ? black_ : white_; }
    VertexSet all() const { return VertexSet::first_n(size()); }
    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
    bool adjacent(int u, int v) const { return masks_[u].test(v); }
    std::size_t edge_count() const { return edge_count_; }
    std::vector<std::pair<int, int>> edges() const;

    const std::string& name() const { return name_; }
    /// Optional per-vertex display label; falls back to the vertex id.
    std::string label(int v) const;
    const std::vector<std::string>& labels() const { return labels_; }

    /// Process-unique identity, used as part of transposition keys.
    std::uint64_t id() const { return id_; }

  private:
    std::vector<Color> colors_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<VertexSet> masks_;
    VertexSet black_, white_;
    std::size_t edge_count_ = 0;
    std::string name_;
    std::vector<std::string> labels_;
    std::uint64_t id_;
};

using GraphPtr = std::shared_ptr<const GroundGraph>;

GraphPtr make_graph(std::vector<Color> colors, const std::vector<std::pair<int, int>>& edges, std::string name = {},
                    std::vector<std::string> labels = {});

// Named families. All throw InputError on bad arguments.

/// Alternating path on |len| vertices, first vertex Black iff len > 0.
GraphPtr build_segment(int len);
/// rows x cols grid, (i,j) Black iff i+j even, vertex id i*cols+j.
GraphPtr build_grid(int rows, int cols);
/// 2^n bit strings, Black iff odd popcount.
GraphPtr build_hypercube(int n);
/// n rows (wrapping, n even >= 4) by m columns; id i*m+j; Black iff i+j even.
GraphPtr build_cylinder(int n, int m);
/// Cylinder whose columns also wrap; n, m even >= 4.
GraphPtr build_torus(int n, int m);
/// Vertices of parts[k] are renumbered consecutively in order.
GraphPtr disjoint_union(const std::vector<GraphPtr>& parts, std::string name = {});
/// Same graph with every color swapped.
GraphPtr negate_graph(const GroundGraph& g);
/// Induced subgraph on `keep`, vertices renumbered in increasing order.
GraphPtr induced_subgraph(const GroundGraph& g, const VertexSet& keep);

/// A move: the vertex played, everything it removes, and the signed score it banks
/// (positive for Left, negative for Right).
struct RemovalSet {
    int played = -1;
    VertexSet removed;
    int gain = 0;

    int size() const { return removed.count(); }
};

/// Alive vertices of a ground graph plus points already banked (Left-positive).
/// Positions built through the public constructors never contain isolated alive
/// vertices: those are stripped into the offset immediately.
class Position {
  public:
    Position() = default;
    /// Whole graph alive, stripped.
    explicit Position(GraphPtr g);
    /// Throws InputError if `alive` has vertices outside the graph. Stripped.
    Position(GraphPtr g, VertexSet alive, int offset = 0);

    /// Unchecked and unstripped; for reference models and tests.
    static Position raw(GraphPtr g, VertexSet alive, int offset);

    const GroundGraph& ground() const { return *ground_; }
    const GraphPtr& ground_ptr() const { return ground_; }
    const VertexSet& alive() const { return alive_; }
    int offset() const { return offset_; }
    bool empty() const { return alive_.empty(); }
    int alive_count() const { return alive_.count(); }

    Position with_offset(int offset) const;
    Position shifted(int delta) const { return with_offset(offset_ + delta); }

  private:
    GraphPtr ground_;
    VertexSet alive_;
    int offset_ = 0;
};

/// Removed set for playing alive vertex v: v, its alive neighbours, and alive
/// vertices of v's color left without alive neighbours. Throws InputError if v is dead.
RemovalSet removal_closure(const Position& p, int v);
/// One move per alive vertex of the mover's color, in vertex order.
std::vector<RemovalSet> legal_moves(const Position& p, Color mover);
/// Position after the move, with newly isolated vertices stripped.
Position apply_move(const Position& p, const RemovalSet& move);
/// Moves every isolated alive vertex into the offset (+1 Black, -1 White).
Position strip_isolated(const Position& p);
/// Connected components with offset 0, sorted by canonical key.
std::vector<Position> components(const Position& p);
/// Same alive set on the color-swapped graph, offset negated.
Position negate(const Position& p);
/// Alive vertices grouped by (color, alive neighbourhood); classes sorted by first vertex.
std::vector<std::vector<int>> twin_classes(const Position& p);

/// Signed lengths of the components when every one of them is a path, else nullopt.
std::optional<std::vector<int>> segment_parts(const Position& p);

/// Transposition identity of a position, offset excluded.
struct PositionKey {
    enum class Kind : std::uint8_t { Segments, Bits };
    Kind kind = Kind::Bits;
    std::u16string segments; // canonical segment multiset when kind == Segments
    std::uint64_t graph = 0; // ground id when kind == Bits
    VertexSet alive;

    friend bool operator==(const PositionKey&, const PositionKey&) = default;
};

struct PositionKeyHash {
    std::size_t operator()(const PositionKey& k) const;
};

/// Segment-union positions map to their canonical segment multiset (so isomorphic
/// unions on different graphs coincide); everything else to (graph id, alive bits).
PositionKey canonical_key(const Position& p);

} // namespace influence
