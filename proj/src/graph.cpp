#include "influence/graph.hpp"

#include "influence/error.hpp"
#include "influence/segments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <set>

namespace influence {

namespace {

std::atomic<std::uint64_t> next_graph_id{1};

} // namespace

GroundGraph::GroundGraph(std::vector<Color> colors, const std::vector<std::pair<int, int>>& edges, std::string name,
                         std::vector<std::string> labels)
    : colors_(std::move(colors)), name_(std::move(name)), labels_(std::move(labels)), id_(next_graph_id++) {
    const int n = size();
    if (n > kMaxVertices)
        throw InputError("graph has " + std::to_string(n) + " vertices; capacity is " + std::to_string(kMaxVertices));
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n) throw InputError("label count differs from vertex count");
    adjacency_.resize(n);
    masks_.resize(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
        if (u == v) throw InputError("self-loop on vertex " + std::to_string(u));
        if (colors_[u] == colors_[v])
            throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") joins two vertices of the same color");
        if (masks_[u].test(v))
            throw InputError("parallel edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        masks_[u].set(v);
        masks_[v].set(u);
        ++edge_count_;
    }
    for (int v = 0; v < n; ++v) {
        masks_[v].for_each([&](int u) { adjacency_[v].push_back(u); });
        (colors_[v] == Color::Black ? black_ : white_).set(v);
    }
}

std::vector<std::pair<int, int>> GroundGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < size(); ++u)
        for (int v : adjacency_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::string GroundGraph::label(int v) const {
    return labels_.empty() ? std::to_string(v) : labels_[v];
}

GraphPtr make_graph(std::vector<Color> colors, const std::vector<std::pair<int, int>>& edges, std::string name,
                    std::vector<std::string> labels) {
    return std::make_shared<const GroundGraph>(std::move(colors), edges, std::move(name), std::move(labels));
}

GraphPtr build_segment(int len) {
    if (len == 0) throw InputError("segment length must be nonzero");
    const int n = std::abs(len);
    if (n > kMaxVertices) throw InputError("segment longer than " + std::to_string(kMaxVertices) + " vertices");
    const Color first = len > 0 ? Color::Black : Color::White;
    std::vector<Color> colors(n);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        colors[i] = i % 2 == 0 ? first : opposite(first);
        if (i > 0) edges.emplace_back(i - 1, i);
    }
    return make_graph(std::move(colors), edges, "S_" + std::to_string(len));
}

namespace {

// Rectangular lattice with optional wrap in each direction.
GraphPtr build_lattice(int rows, int cols, bool wrap_rows, bool wrap_cols, std::string name) {
    if (rows * cols > kMaxVertices)
        throw InputError(name + " has " + std::to_string(rows * cols) + " vertices; capacity is " +
                         std::to_string(kMaxVertices));
    std::vector<Color> colors(rows * cols);
    std::vector<std::string> labels(rows * cols);
    std::vector<std::pair<int, int>> edges;
    auto id = [cols](int i, int j) { return i * cols + j; };
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            colors[id(i, j)] = (i + j) % 2 == 0 ? Color::Black : Color::White;
            labels[id(i, j)] = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (j + 1 < cols) edges.emplace_back(id(i, j), id(i, j + 1));
            else if (wrap_cols) edges.emplace_back(id(i, 0), id(i, j));
            if (i + 1 < rows) edges.emplace_back(id(i, j), id(i + 1, j));
            else if (wrap_rows) edges.emplace_back(id(0, j), id(i, j));
        }
    }
    return make_graph(std::move(colors), edges, std::move(name), std::move(labels));
}

} // namespace

GraphPtr build_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) throw InputError("grid dimensions must be positive");
    return build_lattice(rows, cols, false, false, "G_" + std::to_string(rows) + "," + std::to_string(cols));
}

GraphPtr build_cylinder(int n, int m) {
    if (n % 2 != 0) throw InputError("cylinder row count must be even for a proper coloring");
    if (n < 4) throw InputError("cylinder needs at least 4 rows");
    if (m < 1) throw InputError("cylinder column count must be positive");
    return build_lattice(n, m, true, false, "C_" + std::to_string(n) + "," + std::to_string(m));
}

GraphPtr build_torus(int n, int m) {
    if (n % 2 != 0 || m % 2 != 0) throw InputError("torus dimensions must both be even for a proper coloring");
    if (n < 4 || m < 4) throw InputError("torus dimensions must be at least 4");
    return build_lattice(n, m, true, true, "T_" + std::to_string(n) + "," + std::to_string(m));
}

GraphPtr build_hypercube(int n) {
    if (n < 1) throw InputError("hypercube dimension must be positive");
    if (n > 20) throw InputError("hypercube dimension above 20 rejected");
    if ((1 << n) > kMaxVertices) throw InputError("hypercube H_" + std::to_string(n) + " exceeds vertex capacity");
    const int size = 1 << n;
    std::vector<Color> colors(size);
    std::vector<std::string> labels(size);
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < size; ++v) {
        colors[v] = std::popcount(static_cast<unsigned>(v)) % 2 == 1 ? Color::Black : Color::White;
        std::string bits(n, '0');
        for (int b = 0; b < n; ++b)
            if (v >> b & 1) bits[n - 1 - b] = '1';
        labels[v] = bits;
        for (int b = 0; b < n; ++b)
            if (int u = v ^ (1 << b); u > v) edges.emplace_back(v, u);
    }
    return make_graph(std::move(colors), edges, "H_" + std::to_string(n), std::move(labels));
}

GraphPtr disjoint_union(const std::vector<GraphPtr>& parts, std::string name) {
    std::vector<Color> colors;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> labels;
    for (const auto& g : parts) {
        const int base = static_cast<int>(colors.size());
        for (int v = 0; v < g->size(); ++v) {
            colors.push_back(g->color(v));
            labels.push_back(g->labels().empty() ? std::to_string(base + v) : g->label(v));
        }
        for (auto [u, v] : g->edges()) edges.emplace_back(base + u, base + v);
    }
    if (colors.size() > static_cast<std::size_t>(kMaxVertices))
        throw InputError("disjoint union exceeds vertex capacity");
    return make_graph(std::move(colors), edges, std::move(name), std::move(labels));
}

GraphPtr negate_graph(const GroundGraph& g) {
    std::vector<Color> colors(g.size());
    for (int v = 0; v < g.size(); ++v) colors[v] = opposite(g.color(v));
    return make_graph(std::move(colors), g.edges(), g.name().empty() ? "" : "-(" + g.name() + ")", g.labels());
}

GraphPtr induced_subgraph(const GroundGraph& g, const VertexSet& keep) {
    std::vector<int> index(g.size(), -1);
    std::vector<Color> colors;
    std::vector<std::string> labels;
    keep.for_each([&](int v) {
        index[v] = static_cast<int>(colors.size());
        colors.push_back(g.color(v));
        labels.push_back(g.label(v));
    });
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges())
        if (index[u] >= 0 && index[v] >= 0) edges.emplace_back(index[u], index[v]);
    return make_graph(std::move(colors), edges, g.name(), std::move(labels));
}

// ---------------------------------------------------------------------------

Position::Position(GraphPtr g) : Position(g, g->all(), 0) {}

Position::Position(GraphPtr g, VertexSet alive, int offset) : ground_(std::move(g)), alive_(alive), offset_(offset) {
    if (!alive_.subset_of(ground_->all())) throw InputError("alive set mentions vertices outside the graph");
    *this = strip_isolated(*this);
}

Position Position::raw(GraphPtr g, VertexSet alive, int offset) {
    Position p;
    p.ground_ = std::move(g);
    p.alive_ = alive;
    p.offset_ = offset;
    return p;
}

Position Position::with_offset(int offset) const {
    Position p = *this;
    p.offset_ = offset;
    return p;
}

RemovalSet removal_closure(const Position& p, int v) {
    const GroundGraph& g = p.ground();
    if (v < 0 || v >= g.size() || !p.alive().test(v))
        throw InputError("vertex " + std::to_string(v) + " is not alive");
    const VertexSet& alive = p.alive();
    VertexSet removed = g.neighbors(v) & alive;
    VertexSet around;
    removed.for_each([&](int u) { around |= g.neighbors(u); });
    removed.set(v);
    // Second-ring vertices share v's color; they go with the move once every
    // alive neighbour of theirs is gone.
    VertexSet isolated;
    ((around & alive) - removed).for_each([&](int w) {
        if ((g.neighbors(w) & alive).subset_of(removed)) isolated.set(w);
    });
    removed |= isolated;
    return {v, removed, sign_of(g.color(v)) * removed.count()};
}

std::vector<RemovalSet> legal_moves(const Position& p, Color mover) {
    std::vector<RemovalSet> moves;
    (p.alive() & p.ground().color_mask(mover)).for_each([&](int v) { moves.push_back(removal_closure(p, v)); });
    return moves;
}

Position strip_isolated(const Position& p) {
    const GroundGraph& g = p.ground();
    VertexSet alive = p.alive();
    int offset = p.offset();
    p.alive().for_each([&](int v) {
        if (!g.neighbors(v).intersects(p.alive())) {
            alive.reset(v);
            offset += sign_of(g.color(v));
        }
    });
    return Position::raw(p.ground_ptr(), alive, offset);
}

Position apply_move(const Position& p, const RemovalSet& move) {
    const GroundGraph& g = p.ground();
    VertexSet alive = p.alive() - move.removed;
    int offset = p.offset() + move.gain;
    // Only vertices next to the removed set can have become isolated.
    VertexSet touched;
    move.removed.for_each([&](int u) { touched |= g.neighbors(u); });
    (touched & alive).for_each([&](int x) {
        if (!g.neighbors(x).intersects(alive)) {
            alive.reset(x);
            offset += sign_of(g.color(x));
        }
    });
    return Position::raw(p.ground_ptr(), alive, offset);
}

namespace {

std::vector<VertexSet> component_sets(const GroundGraph& g, VertexSet rest) {
    std::vector<VertexSet> out;
    while (rest.any()) {
        VertexSet comp = VertexSet::single(rest.first());
        VertexSet frontier = comp;
        while (frontier.any()) {
            VertexSet next;
            frontier.for_each([&](int u) { next |= g.neighbors(u); });
            next &= rest;
            next -= comp;
            comp |= next;
            frontier = next;
        }
        rest -= comp;
        out.push_back(comp);
    }
    return out;
}

// Signed length of a component if it induces a path, else 0.
int path_length(const GroundGraph& g, const VertexSet& comp) {
    int n = comp.count();
    int endpoint = -1;
    int degree_sum = 0;
    bool ok = true;
    comp.for_each([&](int v) {
        int d = (g.neighbors(v) & comp).count();
        if (d > 2) ok = false;
        if (d <= 1 && endpoint < 0) endpoint = v;
        degree_sum += d;
    });
    if (!ok || degree_sum != 2 * (n - 1) || endpoint < 0) return 0;
    if (n % 2 == 0) return n;
    return g.color(endpoint) == Color::Black ? n : -n;
}

} // namespace

std::vector<Position> components(const Position& p) {
    std::vector<std::pair<PositionKey, Position>> keyed;
    for (const VertexSet& c : component_sets(p.ground(), p.alive())) {
        Position part = Position::raw(p.ground_ptr(), c, 0);
        keyed.emplace_back(canonical_key(part), part);
    }
    auto key_less = [](const PositionKey& a, const PositionKey& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.kind == PositionKey::Kind::Segments) return a.segments < b.segments;
        if (a.graph != b.graph) return a.graph < b.graph;
        return a.alive < b.alive;
    };
    std::stable_sort(keyed.begin(), keyed.end(),
                     [&](const auto& x, const auto& y) { return key_less(x.first, y.first); });
    std::vector<Position> out;
    for (auto& [k, part] : keyed) out.push_back(part);
    return out;
}

Position negate(const Position& p) {
    return Position::raw(negate_graph(p.ground()), p.alive(), -p.offset());
}

std::vector<std::vector<int>> twin_classes(const Position& p) {
    const GroundGraph& g = p.ground();
    std::vector<std::pair<std::pair<int, VertexSet>, int>> sig;
    p.alive().for_each([&](int v) { sig.push_back({{static_cast<int>(g.color(v)), g.neighbors(v) & p.alive()}, v}); });
    std::vector<std::vector<int>> classes;
    std::vector<bool> used(sig.size(), false);
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (used[i]) continue;
        std::vector<int> cls{sig[i].second};
        for (std::size_t j = i + 1; j < sig.size(); ++j) {
            if (!used[j] && sig[j].first == sig[i].first) {
                used[j] = true;
                cls.push_back(sig[j].second);
            }
        }
        classes.push_back(std::move(cls));
    }
    return classes;
}

std::optional<std::vector<int>> segment_parts(const Position& p) {
    std::vector<int> parts;
    for (const VertexSet& c : component_sets(p.ground(), p.alive())) {
        int len = path_length(p.ground(), c);
        if (len == 0) return std::nullopt;
        parts.push_back(len);
    }
    return parts;
}

PositionKey canonical_key(const Position& p) {
    PositionKey key;
    if (auto parts = segment_parts(p)) {
        auto canon = segments::canonicalize({std::move(*parts), 0});
        key.kind = PositionKey::Kind::Segments;
        key.segments = segments::encode(canon.parts);
        return key;
    }
    key.kind = PositionKey::Kind::Bits;
    key.graph = p.ground().id();
    key.alive = p.alive();
    return key;
}

std::size_t PositionKeyHash::operator()(const PositionKey& k) const {
    if (k.kind == PositionKey::Kind::Segments) return std::hash<std::u16string>{}(k.segments) ^ 0x5bd1e995;
    return mix64(k.graph) ^ VertexSetHash{}(k.alive);
}

} // namespace influence
