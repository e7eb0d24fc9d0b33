#include "influence/cgt.hpp"

#include "influence/error.hpp"
#include "influence/segments.hpp"

#include <algorithm>
#include <cctype>

namespace influence::cgt {

namespace {

void normalize(std::vector<Game>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

std::size_t GameStore::PairHash::operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const {
    return mix64((std::uint64_t{p.first} << 32) | p.second);
}

GameStore::GameStore(StoreOptions opts) : opts_(opts) {
    nodes_.push_back({});
    ls_.push_back(Rational(0));
    rs_.push_back(Rational(0));
    neg_.push_back(0);
    len_.push_back(0);
    simp_.push_back(0);
    audited_.push_back(1);
    index_.emplace(std::pair{std::vector<Game>{}, std::vector<Game>{}}, 0);
}

GameStore::~GameStore() = default;

std::size_t GameStore::node_count() const {
    std::lock_guard lock(mu_);
    return nodes_.size();
}

std::uint32_t GameStore::intern(std::vector<Game> left, std::vector<Game> right) {
    normalize(left);
    normalize(right);
    if (left.empty() != right.empty()) throw UniverseError("a game with options for only one player is not dicotic");
    auto key = std::pair{std::move(left), std::move(right)};
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({key.first, key.second});
    ls_.emplace_back();
    rs_.emplace_back();
    neg_.push_back(-1);
    len_.push_back(-1);
    simp_.push_back(-1);
    audited_.push_back(0);
    index_.emplace(std::move(key), id);
    return id;
}

Game GameStore::make(std::vector<Game> left, std::vector<Game> right) {
    std::lock_guard lock(mu_);
    return {intern(std::move(left), std::move(right)), Rational(0)};
}

std::vector<Game> GameStore::left_options(const Game& g) {
    std::lock_guard lock(mu_);
    std::vector<Game> out;
    for (const Game& o : nodes_[g.node].left) out.push_back(shifted(o, g.shift));
    return out;
}

std::vector<Game> GameStore::right_options(const Game& g) {
    std::lock_guard lock(mu_);
    std::vector<Game> out;
    for (const Game& o : nodes_[g.node].right) out.push_back(shifted(o, g.shift));
    return out;
}

Rational GameStore::ls_node(std::uint32_t n) {
    if (ls_[n]) return *ls_[n];
    std::optional<Rational> best;
    const auto options = nodes_[n].left;
    for (const Game& o : options) {
        Rational v = rs_node(o.node) + o.shift;
        if (!best || *best < v) best = v;
    }
    ls_[n] = *best;
    return *best;
}

Rational GameStore::rs_node(std::uint32_t n) {
    if (rs_[n]) return *rs_[n];
    std::optional<Rational> best;
    const auto options = nodes_[n].right;
    for (const Game& o : options) {
        Rational v = ls_node(o.node) + o.shift;
        if (!best || v < *best) best = v;
    }
    rs_[n] = *best;
    return *best;
}

Rational GameStore::ls(const Game& g) {
    std::lock_guard lock(mu_);
    return ls_node(g.node) + g.shift;
}

Rational GameStore::rs(const Game& g) {
    std::lock_guard lock(mu_);
    return rs_node(g.node) + g.shift;
}

std::uint32_t GameStore::negate_node(std::uint32_t n) {
    if (neg_[n] >= 0) return static_cast<std::uint32_t>(neg_[n]);
    std::vector<Game> left, right;
    const Node node = nodes_[n];
    for (const Game& o : node.right) left.push_back({negate_node(o.node), -o.shift});
    for (const Game& o : node.left) right.push_back({negate_node(o.node), -o.shift});
    const std::uint32_t m = intern(std::move(left), std::move(right));
    neg_[n] = m;
    neg_[m] = n;
    return m;
}

Game GameStore::negate(const Game& g) {
    std::lock_guard lock(mu_);
    return {negate_node(g.node), -g.shift};
}

Game GameStore::sum_node(std::uint32_t a, std::uint32_t b) {
    if (a == 0) return {b, Rational(0)};
    if (b == 0) return {a, Rational(0)};
    if (b < a) std::swap(a, b);
    if (auto it = sums_.find({a, b}); it != sums_.end()) return it->second;
    const Node na = nodes_[a];
    const Node nb = nodes_[b];
    std::vector<Game> left, right;
    for (const Game& o : na.left) left.push_back(shifted(sum_node(o.node, b), o.shift));
    for (const Game& o : nb.left) left.push_back(shifted(sum_node(a, o.node), o.shift));
    for (const Game& o : na.right) right.push_back(shifted(sum_node(o.node, b), o.shift));
    for (const Game& o : nb.right) right.push_back(shifted(sum_node(a, o.node), o.shift));
    Game g{intern(std::move(left), std::move(right)), Rational(0)};
    sums_.emplace(std::pair{a, b}, g);
    return g;
}

Game GameStore::sum(const Game& a, const Game& b) {
    std::lock_guard lock(mu_);
    return shifted(sum_node(a.node, b.node), a.shift + b.shift);
}

Game GameStore::multiple(const Game& g, int n) {
    if (n < 0) throw InputError("multiple needs a nonnegative count");
    Game acc = number(0);
    for (int i = 0; i < n; ++i) acc = sum(acc, g);
    return acc;
}

int GameStore::length_node(std::uint32_t n) {
    if (len_[n] >= 0) return static_cast<int>(len_[n]);
    int best = 0;
    const Node node = nodes_[n];
    for (const auto* side : {&node.left, &node.right})
        for (const Game& o : *side) best = std::max(best, 1 + length_node(o.node));
    len_[n] = best;
    return best;
}

int GameStore::length(const Game& g) {
    std::lock_guard lock(mu_);
    return length_node(g.node);
}

std::optional<std::string> GameStore::zugzwang_node(std::uint32_t n) {
    if (audited_[n] == 1) return std::nullopt;
    const Node node = nodes_[n];
    for (const auto* side : {&node.left, &node.right})
        for (const Game& o : *side)
            if (auto bad = zugzwang_node(o.node)) return bad;
    if (ls_node(n) < rs_node(n)) {
        return "zugzwang at " + str_unlocked({n, Rational(0)}) + ": Ls=" + ls_node(n).str() +
               " < Rs=" + rs_node(n).str();
    }
    audited_[n] = 1;
    return std::nullopt;
}

std::optional<std::string> GameStore::zugzwang(const Game& g) {
    std::lock_guard lock(mu_);
    return zugzwang_node(g.node);
}

bool GameStore::equivalent(const Game& g, const Game& h, bool audit) {
    std::lock_guard lock(mu_);
    if (audit) {
        for (const Game* x : {&g, &h})
            if (auto bad = zugzwang_node(x->node)) throw UniverseError("equivalence outside Milnor's universe: " + *bad);
    }
    const Game d = shifted(sum_node(g.node, negate_node(h.node)), g.shift - h.shift);
    return ls_node(d.node) + d.shift == Rational(0) && rs_node(d.node) + d.shift == Rational(0);
}

bool GameStore::dominates_unlocked(const Game& g, const Game& h) {
    const Game d = shifted(sum_node(g.node, negate_node(h.node)), g.shift - h.shift);
    return rs_node(d.node) + d.shift >= Rational(0);
}

bool GameStore::dominates(const Game& g, const Game& h) {
    std::lock_guard lock(mu_);
    return dominates_unlocked(g, h);
}

std::uint32_t GameStore::simplify_node(std::uint32_t n) {
    if (simp_[n] >= 0) return static_cast<std::uint32_t>(simp_[n]);
    const Node node = nodes_[n];
    auto reduce = [&](const std::vector<Game>& options, bool left_side) {
        std::vector<Game> kept;
        for (const Game& o : options) {
            Game s{simplify_node(o.node), o.shift};
            // better(a, b): a is at least as good as b for the player choosing.
            auto better = [&](const Game& a, const Game& b) {
                return left_side ? dominates_unlocked(a, b) : dominates_unlocked(b, a);
            };
            if (std::any_of(kept.begin(), kept.end(), [&](const Game& k) { return better(k, s); })) continue;
            std::erase_if(kept, [&](const Game& k) { return better(s, k); });
            kept.push_back(s);
        }
        return kept;
    };
    auto left = reduce(node.left, true);
    auto right = reduce(node.right, false);
    const std::uint32_t m = intern(std::move(left), std::move(right));
    simp_[n] = m;
    simp_[m] = m;
    return m;
}

Game GameStore::simplify(const Game& g) {
    std::lock_guard lock(mu_);
    return {simplify_node(g.node), g.shift};
}

Game GameStore::from_position_unlocked(const Position& p) {
    if (p.empty()) return number(p.offset());
    std::pair<std::uint64_t, std::u16string> key;
    if (auto parts = segment_parts(p)) {
        // Isomorphic segment unions share a tree; no cancellation, the tree must stay exact.
        for (int& x : *parts)
            if (x % 2 == 0) x = std::abs(x);
        std::sort(parts->begin(), parts->end());
        key = {0, segments::encode(*parts)};
    } else {
        const VertexSet& a = p.alive();
        key.first = p.ground().id();
        for (std::uint64_t w : {a.lo, a.hi})
            for (int k = 0; k < 4; ++k) key.second.push_back(static_cast<char16_t>((w >> (16 * k)) & 0xffff));
    }
    if (auto it = positions_.find(key); it != positions_.end()) return shifted(it->second, p.offset());
    std::vector<Game> left, right;
    for (Color c : {Color::Black, Color::White}) {
        for (const RemovalSet& m : legal_moves(p, c)) {
            const Game child = from_position_unlocked(apply_move(p, m));
            (c == Color::Black ? left : right).push_back(shifted(child, -p.offset()));
        }
    }
    const Game g{intern(std::move(left), std::move(right)), Rational(0)};
    positions_.emplace(std::move(key), g);
    return shifted(g, p.offset());
}

Game GameStore::from_position(const Position& p) {
    if (p.alive_count() > opts_.max_vertices)
        throw InputError("position has " + std::to_string(p.alive_count()) + " alive vertices; tree expansion limit is " +
                         std::to_string(opts_.max_vertices));
    std::lock_guard lock(mu_);
    return from_position_unlocked(p);
}

std::string GameStore::str_unlocked(const Game& g) {
    if (g.node == 0) return g.shift.str();
    const Node node = nodes_[g.node];
    std::string out = "<";
    for (std::size_t i = 0; i < node.left.size(); ++i) {
        if (i) out += ",";
        out += str_unlocked(shifted(node.left[i], g.shift));
    }
    out += "|";
    for (std::size_t i = 0; i < node.right.size(); ++i) {
        if (i) out += ",";
        out += str_unlocked(shifted(node.right[i], g.shift));
    }
    return out + ">";
}

std::string GameStore::str(const Game& g) {
    std::lock_guard lock(mu_);
    return str_unlocked(g);
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("game notation: " + what + " at offset " + std::to_string(pos));
    }
    void skip() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool peek(char c) {
        skip();
        return pos < text.size() && text[pos] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos;
    }
};

Game parse_game(GameStore& store, Parser& ps) {
    if (ps.peek('<')) {
        ++ps.pos;
        std::vector<Game> sides[2];
        for (int s = 0; s < 2; ++s) {
            if (!ps.peek(s == 0 ? '|' : '>')) {
                sides[s].push_back(parse_game(store, ps));
                while (ps.peek(',')) {
                    ++ps.pos;
                    sides[s].push_back(parse_game(store, ps));
                }
            }
            ps.expect(s == 0 ? '|' : '>');
        }
        if (sides[0].empty() != sides[1].empty()) ps.fail("one-sided option list (not dicotic)");
        return store.make(std::move(sides[0]), std::move(sides[1]));
    }
    ps.skip();
    const std::size_t start = ps.pos;
    if (ps.pos < ps.text.size() && ps.text[ps.pos] == '-') ++ps.pos;
    while (ps.pos < ps.text.size() &&
           (std::isdigit(static_cast<unsigned char>(ps.text[ps.pos])) || ps.text[ps.pos] == '/'))
        ++ps.pos;
    if (ps.pos == start) ps.fail("expected a number or '<'");
    return store.number(Rational::parse(std::string(ps.text.substr(start, ps.pos - start))));
}

} // namespace

Game GameStore::parse(std::string_view text) {
    Parser ps{text};
    Game g = parse_game(*this, ps);
    ps.skip();
    if (ps.pos != text.size()) ps.fail("trailing characters");
    return g;
}

} // namespace influence::cgt
