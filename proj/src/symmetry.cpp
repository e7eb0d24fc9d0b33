#include "influence/symmetry.hpp"

#include "influence/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace influence::symmetry {

std::vector<std::vector<int>> all_pairs_distances(const GroundGraph& g) {
    const int n = g.size();
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        std::deque<int> queue{s};
        dist[s][s] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int w : g.adjacency(u)) {
                if (dist[s][w] >= 0) continue;
                dist[s][w] = dist[s][u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

BwCheck verify_bw(const GroundGraph& g, const VertexMapping& m) {
    BwCheck c;
    const int n = g.size();
    auto note = [&](const std::string& s) {
        if (c.detail.empty()) c.detail = s;
    };
    if (static_cast<int>(m.size()) != n) {
        note("mapping has " + std::to_string(m.size()) + " entries for " + std::to_string(n) + " vertices");
        return c;
    }
    std::vector<bool> hit(n, false);
    c.bijection = true;
    for (int v = 0; v < n; ++v) {
        if (m[v] < 0 || m[v] >= n || hit[m[v]]) {
            c.bijection = false;
            note("not a bijection at vertex " + std::to_string(v));
            break;
        }
        hit[m[v]] = true;
    }
    if (!c.bijection) return c;

    c.involution = true;
    for (int v = 0; v < n && c.involution; ++v)
        if (m[m[v]] != v) {
            c.involution = false;
            note("not an involution at vertex " + std::to_string(v));
        }
    c.color_swap = true;
    for (int v = 0; v < n && c.color_swap; ++v)
        if (g.color(m[v]) == g.color(v)) {
            c.color_swap = false;
            note("vertex " + std::to_string(v) + " keeps its color");
        }
    c.automorphism = true;
    for (int u = 0; u < n && c.automorphism; ++u)
        for (int v = u + 1; v < n; ++v)
            if (g.adjacent(u, v) != g.adjacent(m[u], m[v])) {
                c.automorphism = false;
                note("pair (" + std::to_string(u) + "," + std::to_string(v) + ") breaks edge preservation");
                break;
            }
    const auto dist = all_pairs_distances(g);
    c.distance = true;
    for (int v = 0; v < n && c.distance; ++v) {
        const int d = dist[v][m[v]];
        if (d >= 0 && d < 3) {
            c.distance = false;
            note("d(" + std::to_string(v) + ", image) = " + std::to_string(d) + " < 3");
        }
    }
    return c;
}

std::string to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::ProvenAbsent: return "proven-absent";
    case SearchStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

namespace {

struct Search {
    const GroundGraph& g;
    std::uint64_t budget;
    std::vector<std::vector<int>> dist;
    std::vector<std::vector<int>> invariant;
    std::vector<int> order; // Black vertices in BFS order
    std::vector<int> image;
    std::vector<bool> used;
    std::uint64_t nodes = 0;
    bool out_of_budget = false;

    bool far_enough(int u, int w) const { return dist[u][w] < 0 || dist[u][w] >= 3; }

    bool consistent(int b, int w, std::size_t depth) const {
        for (std::size_t k = 0; k < depth; ++k) {
            const int b2 = order[k];
            const int w2 = image[b2];
            if (g.adjacent(b, w2) != g.adjacent(w, b2)) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order.size()) return true;
        if (++nodes > budget) {
            out_of_budget = true;
            return false;
        }
        const int b = order[depth];
        for (int w = 0; w < g.size(); ++w) {
            if (used[w] || g.color(w) != Color::White) continue;
            if (invariant[w] != invariant[b] || !far_enough(b, w) || !consistent(b, w, depth)) continue;
            image[b] = w;
            image[w] = b;
            used[w] = true;
            if (extend(depth + 1)) return true;
            used[w] = false;
            image[b] = image[w] = -1;
            if (out_of_budget) return false;
        }
        return false;
    }
};

} // namespace

SearchResult find_bw(const GroundGraph& g, std::uint64_t budget) {
    SearchResult result;
    const int n = g.size();
    if (g.color_mask(Color::Black).count() != g.color_mask(Color::White).count()) return result;

    Search s{g, budget, all_pairs_distances(g), {}, {}, std::vector<int>(n, -1), std::vector<bool>(n, false)};
    s.invariant.resize(n);
    for (int v = 0; v < n; ++v) {
        auto& inv = s.invariant[v];
        for (int u : g.adjacency(v)) inv.push_back(g.degree(u));
        std::sort(inv.begin(), inv.end());
        inv.insert(inv.begin(), g.degree(v));
    }
    // BFS order over Black vertices so each new vertex meets fixed neighbours early.
    std::vector<bool> seen(n, false);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        std::deque<int> queue{root};
        seen[root] = true;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            if (g.color(u) == Color::Black) s.order.push_back(u);
            for (int w : g.adjacency(u))
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
        }
    }
    const bool found = s.extend(0);
    result.nodes = s.nodes;
    if (found) {
        result.status = SearchStatus::Found;
        result.mapping = s.image;
        if (!verify_bw(g, *result.mapping).ok()) throw std::logic_error("search produced an invalid mapping");
    } else {
        result.status = s.out_of_budget ? SearchStatus::BudgetExceeded : SearchStatus::ProvenAbsent;
    }
    return result;
}

MirrorResult mirror_strategy_check(const GroundGraph& g, const VertexMapping& m) {
    MirrorResult r;
    if (!verify_bw(g, m).ok()) {
        r.detail = "mapping is not a BW-automorphism";
        return r;
    }
    GraphPtr gp = make_graph([&] {
        std::vector<Color> cs(g.size());
        for (int v = 0; v < g.size(); ++v) cs[v] = g.color(v);
        return cs;
    }(), g.edges());
    for (Color first : {Color::Black, Color::White}) {
        std::unordered_set<VertexSet, VertexSetHash> seen;
        std::vector<Position> stack{Position(gp)};
        while (!stack.empty()) {
            Position p = stack.back();
            stack.pop_back();
            if (!seen.insert(p.alive()).second) continue;
            ++r.lines;
            const auto moves = legal_moves(p, first);
            if (moves.empty()) {
                if (!p.empty() || p.offset() != 0) {
                    r.detail = "finished with score " + std::to_string(p.offset());
                    return r;
                }
                continue;
            }
            for (const RemovalSet& mv : moves) {
                Position q = apply_move(p, mv);
                const int reply = m[mv.played];
                if (!q.alive().test(reply)) {
                    r.detail = "mirror reply " + std::to_string(reply) + " to " + std::to_string(mv.played) + " is gone";
                    return r;
                }
                Position after = apply_move(q, removal_closure(q, reply));
                if (after.offset() != p.offset()) {
                    r.detail = "round " + std::to_string(mv.played) + "/" + std::to_string(reply) + " is not balanced";
                    return r;
                }
                stack.push_back(after);
            }
        }
    }
    r.ok = true;
    return r;
}

bool DrawReport::certified() const {
    if (search.status != SearchStatus::Found || !check || !check->ok()) return false;
    if (scores && !(scores->ls == 0 && scores->rs == 0)) return false;
    if (mirror && !mirror->ok) return false;
    return true;
}

DrawReport certify_draw(const GroundGraph& g, const DrawOptions& opts) {
    DrawReport r;
    r.search = find_bw(g, opts.budget);
    if (r.search.mapping) r.check = verify_bw(g, *r.search.mapping);
    if (g.size() <= opts.solve_limit) {
        solver::Solver s(opts.solver);
        GraphPtr copy = induced_subgraph(g, g.all());
        r.scores = s.scores(Position(copy));
    }
    if (r.search.mapping && g.size() <= opts.mirror_limit) r.mirror = mirror_strategy_check(g, *r.search.mapping);
    return r;
}

std::string mapping_json(const VertexMapping& m) { return nlohmann::json(m).dump(); }

std::string report_json(const GroundGraph& g, const DrawReport& r) {
    nlohmann::json j;
    j["graph"] = g.name();
    j["vertices"] = g.size();
    j["status"] = to_string(r.search.status);
    j["search_nodes"] = r.search.nodes;
    j["mapping"] = r.search.mapping ? nlohmann::json(*r.search.mapping) : nlohmann::json(nullptr);
    if (r.check) {
        j["checks"] = {{"bijection", r.check->bijection},     {"automorphism", r.check->automorphism},
                       {"involution", r.check->involution},   {"color_swap", r.check->color_swap},
                       {"distance_at_least_3", r.check->distance}};
    }
    if (r.scores) j["scores"] = {{"ls", r.scores->ls}, {"rs", r.scores->rs}};
    if (r.mirror) j["mirror"] = {{"ok", r.mirror->ok}, {"positions", r.mirror->lines}, {"detail", r.mirror->detail}};
    j["certified"] = r.certified();
    return j.dump();
}

VertexMapping hypercube_flip3(int n) {
    if (n < 3) throw InputError("flipping three coordinates needs dimension at least 3");
    VertexMapping m(std::size_t{1} << n);
    for (int v = 0; v < (1 << n); ++v) m[v] = v ^ 0b111;
    return m;
}

VertexMapping lattice_shift(int n, int m, bool mirror_columns) {
    VertexMapping out(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) out[i * m + j] = ((i + n / 2) % n) * m + (mirror_columns ? m - 1 - j : j);
    return out;
}

} // namespace influence::symmetry
