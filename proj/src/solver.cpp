#include "influence/solver.hpp"

#include "influence/error.hpp"
#include <algorithm>
#include <array>
#include <climits>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace influence::solver {

std::vector<RemovalSet> prune_dominated(const std::vector<RemovalSet>& moves) {
    std::vector<RemovalSet> kept;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < moves.size() && !drop; ++j) {
            if (i == j) continue;
            const VertexSet& a = moves[i].removed;
            const VertexSet& b = moves[j].removed;
            if (!a.subset_of(b)) continue;
            // Strictly inside, or equal with an earlier representative.
            drop = a != b || j < i;
        }
        if (!drop) kept.push_back(moves[i]);
    }
    return kept;
}

namespace {

constexpr std::size_t kShards = 64;

struct Shard {
    std::mutex mu;
    std::unordered_map<PositionKey, int, PositionKeyHash> map;
};

} // namespace

struct Solver::Table {
    std::array<Shard, kShards> left, right;

    static Shard& shard(std::array<Shard, kShards>& s, const PositionKey& k) {
        return s[PositionKeyHash{}(k) % kShards];
    }
    std::optional<int> find(Color mover, const PositionKey& k) {
        Shard& s = shard(mover == Color::Black ? left : right, k);
        std::lock_guard lock(s.mu);
        auto it = s.map.find(k);
        if (it == s.map.end()) return std::nullopt;
        return it->second;
    }
    void insert(Color mover, const PositionKey& k, int v) {
        Shard& s = shard(mover == Color::Black ? left : right, k);
        std::lock_guard lock(s.mu);
        s.map.emplace(k, v);
    }
    std::uint64_t size() {
        std::uint64_t n = 0;
        for (auto* side : {&left, &right})
            for (Shard& s : *side) {
                std::lock_guard lock(s.mu);
                n += s.map.size();
            }
        return n;
    }
    void clear() {
        for (auto* side : {&left, &right})
            for (Shard& s : *side) {
                std::lock_guard lock(s.mu);
                s.map.clear();
            }
    }
};

Solver::Solver(SolverOptions opts) : opts_(opts), table_(std::make_unique<Table>()) {}
Solver::~Solver() = default;

int Solver::left_score(const Position& p) { return search(p, Color::Black, true) + p.offset(); }
int Solver::right_score(const Position& p) { return search(p, Color::White, true) + p.offset(); }
ScorePair Solver::scores(const Position& p) { return {left_score(p), right_score(p)}; }

SolverStats Solver::stats() const {
    return {expansions_.load(), hits_.load(), table_->size()};
}

void Solver::clear() {
    table_->clear();
    expansions_ = 0;
    hits_ = 0;
}

std::vector<RemovalSet> Solver::ordered_moves(const Position& p, Color mover) const {
    auto moves = legal_moves(p, mover);
    if (opts_.prune_included) moves = prune_dominated(moves);
    std::stable_sort(moves.begin(), moves.end(),
                     [](const RemovalSet& a, const RemovalSet& b) { return a.size() > b.size(); });
    return moves;
}

// Offset-free value: the score of p minus p.offset() with `mover` to play.
int Solver::search(const Position& p, Color mover, bool root) {
    if (p.empty()) return 0;
    PositionKey key;
    if (opts_.segment_keys) {
        key = canonical_key(p);
    } else {
        key.graph = p.ground().id();
        key.alive = p.alive();
    }
    if (auto hit = table_->find(mover, key)) {
        ++hits_;
        return *hit;
    }
    if (++expansions_ > opts_.node_limit && opts_.node_limit)
        throw BudgetExhausted("solver node limit of " + std::to_string(opts_.node_limit) + " expansions reached");

    const auto moves = ordered_moves(p, mover);
    const Color reply = opposite(mover);
    auto child_value = [&](const RemovalSet& m) {
        Position child = apply_move(p, m);
        return search(child, reply, false) + child.offset() - p.offset();
    };

    const bool maximize = mover == Color::Black;
    int best = maximize ? INT_MIN : INT_MAX;
    auto take = [&](int v) { best = maximize ? std::max(best, v) : std::min(best, v); };

    if (root && opts_.threads > 1 && moves.size() > 1) {
        std::vector<int> values(moves.size());
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mu;
        auto worker = [&] {
            for (std::size_t i; (i = next++) < moves.size();) {
                try {
                    values[i] = child_value(moves[i]);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    next = moves.size();
                }
            }
        };
        std::vector<std::thread> pool;
        const int k = std::min<int>(opts_.threads, static_cast<int>(moves.size()));
        for (int t = 0; t < k; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
        for (int v : values) take(v);
    } else {
        for (const RemovalSet& m : moves) take(child_value(m));
    }
    table_->insert(mover, key, best);
    return best;
}

namespace {

// Color-swapped isomorphism between the alive parts of a and b by backtracking.
bool swapped_isomorphic(const Position& a, const Position& b) {
    const GroundGraph& ga = a.ground();
    const GroundGraph& gb = b.ground();
    std::vector<int> va, vb;
    a.alive().for_each([&](int v) { va.push_back(v); });
    b.alive().for_each([&](int v) { vb.push_back(v); });
    if (va.size() != vb.size()) return false;
    auto deg = [](const GroundGraph& g, const VertexSet& alive, int v) { return (g.neighbors(v) & alive).count(); };
    auto profile = [&](const GroundGraph& g, const VertexSet& alive, const std::vector<int>& vs, bool flip) {
        std::vector<std::pair<int, int>> out;
        for (int v : vs) {
            Color c = g.color(v);
            out.emplace_back(static_cast<int>(flip ? opposite(c) : c), deg(g, alive, v));
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    if (profile(ga, a.alive(), va, true) != profile(gb, b.alive(), vb, false)) return false;

    std::vector<int> image(ga.size(), -1);
    VertexSet used;
    std::function<bool(std::size_t)> extend = [&](std::size_t i) {
        if (i == va.size()) return true;
        const int u = va[i];
        for (int w : vb) {
            if (used.test(w) || gb.color(w) != opposite(ga.color(u))) continue;
            if (deg(ga, a.alive(), u) != deg(gb, b.alive(), w)) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j)
                ok = ga.adjacent(u, va[j]) == gb.adjacent(w, image[va[j]]);
            if (!ok) continue;
            image[u] = w;
            used.set(w);
            if (extend(i + 1)) return true;
            used.reset(w);
            image[u] = -1;
        }
        return false;
    };
    return extend(0);
}

} // namespace

bool is_negative_pair(const Position& a, const Position& b, int max_vertices) {
    if (a.alive_count() != b.alive_count()) return false;
    auto sa = segment_parts(a);
    auto sb = segment_parts(b);
    if (sa && sb) {
        std::vector<int> ra = *sa, rb = *sb;
        // Compare the raw multisets so the answer is about the graphs, not their values.
        for (int& x : ra)
            if (x % 2 == 0) x = std::abs(x);
        for (int& x : rb)
            x = x % 2 == 0 ? std::abs(x) : -x;
        std::sort(ra.begin(), ra.end());
        std::sort(rb.begin(), rb.end());
        return ra == rb;
    }
    if (a.alive_count() > max_vertices) return false;
    return swapped_isomorphic(a, b);
}

Position union_position(const std::vector<Position>& parts) {
    std::vector<GraphPtr> graphs;
    int offset = 0;
    int total = 0;
    for (const Position& p : parts) {
        graphs.push_back(induced_subgraph(p.ground(), p.alive()));
        offset += p.offset();
        total += p.alive_count();
    }
    if (total > kMaxVertices) throw InputError("sum exceeds the vertex capacity");
    GraphPtr g = disjoint_union(graphs, "sum");
    return Position(g, g->all(), offset);
}

ScorePair score_of_sum(Solver& solver, const std::vector<Position>& parts) {
    std::vector<Position> comps;
    int offset = 0;
    for (const Position& p : parts) {
        Position s = strip_isolated(p);
        offset += s.offset();
        for (Position& c : components(s)) comps.push_back(std::move(c));
    }
    std::vector<bool> gone(comps.size(), false);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (gone[i]) continue;
        for (std::size_t j = i + 1; j < comps.size(); ++j) {
            if (!gone[j] && is_negative_pair(comps[i], comps[j])) {
                gone[i] = gone[j] = true;
                break;
            }
        }
    }
    std::vector<Position> rest;
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (!gone[i]) rest.push_back(comps[i]);
    Position joint = union_position(rest).shifted(offset);
    return solver.scores(joint);
}

AuditReport milnor_audit(Solver& solver, const Position& p, int depth) {
    AuditReport report;
    std::unordered_set<VertexSet, VertexSetHash> seen;
    std::vector<std::pair<Position, int>> stack{{p, depth}};
    while (!stack.empty() && !report.violation) {
        auto [q, d] = stack.back();
        stack.pop_back();
        if (!seen.insert(q.alive()).second) continue;
        ++report.positions_checked;
        const VertexSet& alive = q.alive();
        const bool left = alive.intersects(q.ground().color_mask(Color::Black));
        const bool right = alive.intersects(q.ground().color_mask(Color::White));
        if (left != right) {
            report.violation = "not dicotic: only " + std::string(left ? "Left" : "Right") + " can move";
            break;
        }
        ScorePair s = solver.scores(q);
        if (s.ls < s.rs) {
            report.violation = "zugzwang: Ls=" + std::to_string(s.ls) + " < Rs=" + std::to_string(s.rs);
            break;
        }
        if (d == 0) continue;
        for (Color c : {Color::Black, Color::White})
            for (const RemovalSet& m : legal_moves(q, c)) stack.emplace_back(apply_move(q, m), d - 1);
    }
    return report;
}

bool GiftReport::ok() const {
    return std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.holds; });
}

GiftReport gift_bounds_check(Solver& solver, const Position& p, const VertexSet& black_gift,
                             const VertexSet& white_gift) {
    const GroundGraph& g = p.ground();
    if (!black_gift.subset_of(p.alive()) || !white_gift.subset_of(p.alive()))
        throw InputError("gift vertices must be alive");
    if (!black_gift.subset_of(g.color_mask(Color::Black)) || !white_gift.subset_of(g.color_mask(Color::White)))
        throw InputError("gift vertices have the wrong color");
    const Position without_w(p.ground_ptr(), p.alive() - white_gift, p.offset());
    const Position without_b(p.ground_ptr(), p.alive() - black_gift, p.offset());
    const ScorePair whole = solver.scores(p);
    const ScorePair gw = solver.scores(without_w);
    const ScorePair gb = solver.scores(without_b);
    const int nw = white_gift.count();
    const int nb = black_gift.count();
    GiftReport r;
    r.lines.push_back({"Ls(G) <= Ls(G\\W0) + |W0|", whole.ls, gw.ls + nw, whole.ls <= gw.ls + nw});
    r.lines.push_back({"Rs(G) >= Rs(G\\B0) - |B0|", whole.rs, gb.rs - nb, whole.rs >= gb.rs - nb});
    r.lines.push_back({"Ls(G) >= Ls(G\\B0) - |B0|", whole.ls, gb.ls - nb, whole.ls >= gb.ls - nb});
    r.lines.push_back({"Rs(G) <= Rs(G\\W0) + |W0|", whole.rs, gw.rs + nw, whole.rs <= gw.rs + nw});
    return r;
}

} // namespace influence::solver
