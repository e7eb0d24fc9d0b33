#include "influence/segments.hpp"

#include "influence/error.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace influence::segments {

SegmentSum canonicalize(SegmentSum s) {
    std::vector<int> odd, even;
    for (int p : s.parts) {
        if (p == 0) continue;
        if (p == 1 || p == -1) {
            s.offset += p;
        } else if (p % 2 == 0) {
            even.push_back(std::abs(p));
        } else {
            odd.push_back(p);
        }
    }
    std::vector<int> out;
    // Equal even parts cancel in pairs: S_2k = S_-2k = -S_2k.
    std::sort(even.begin(), even.end());
    for (std::size_t i = 0; i < even.size();) {
        std::size_t j = i;
        while (j < even.size() && even[j] == even[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(even[i]);
        i = j;
    }
    std::sort(odd.begin(), odd.end());
    std::unordered_map<int, int> count;
    for (int p : odd) ++count[p];
    for (int p : odd) {
        if (p < 0) continue;
        int& pos = count[p];
        int& neg = count[-p];
        int c = std::min(pos, neg);
        pos -= c;
        neg -= c;
    }
    for (auto& [p, c] : count)
        for (int k = 0; k < c; ++k) out.push_back(p);
    std::sort(out.begin(), out.end());
    s.parts = std::move(out);
    return s;
}

SegmentSum rewrite_42(SegmentSum s) {
    std::vector<int> out;
    for (int p : s.parts) {
        int a = std::abs(p);
        if (a % 4 == 2 && a > 2) {
            out.push_back(a - 2);
            out.push_back(2);
        } else {
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    s.parts = std::move(out);
    return s;
}

SegmentSum normal_form(SegmentSum s) { return canonicalize(rewrite_42(canonicalize(std::move(s)))); }

SegmentSum negate(SegmentSum s) {
    for (int& p : s.parts)
        if (p % 2 != 0) p = -p;
    std::sort(s.parts.begin(), s.parts.end());
    s.offset = -s.offset;
    return s;
}

SegmentSum parse_parts(const std::string& text) {
    std::string t = text;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    SegmentSum s;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw InputError("bad segment length '" + tok + "'");
        }
        if (used != tok.size()) throw InputError("bad segment length '" + tok + "'");
        if (v == 0) throw InputError("segment length must be nonzero");
        if (std::abs(v) > 1000) throw InputError("segment length " + tok + " out of range");
        s.parts.push_back(v);
    }
    return s;
}

std::string format_parts(const std::vector<int>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(parts[i]);
    }
    return out;
}

std::u16string encode(const std::vector<int>& sorted_parts) {
    std::u16string key;
    key.reserve(sorted_parts.size());
    for (int p : sorted_parts) key.push_back(static_cast<char16_t>(static_cast<std::uint16_t>(static_cast<std::int16_t>(p))));
    return key;
}

std::vector<int> decode(const std::u16string& key) {
    std::vector<int> parts;
    parts.reserve(key.size());
    for (char16_t c : key) parts.push_back(static_cast<std::int16_t>(static_cast<std::uint16_t>(c)));
    return parts;
}

namespace {

// Playing vertex i of S_part. Removes i and its neighbours; a vertex two steps
// away goes too when it was the segment's end (it is left isolated and shares
// the mover's color).
SegmentMove move_at(int part, int i) {
    const int n = std::abs(part);
    const int first_sign = part > 0 ? 1 : -1;
    const int mover_sign = i % 2 == 0 ? first_sign : -first_sign;
    SegmentMove m;
    m.vertex = i;
    m.removed = 1;
    int k = 0;
    if (i >= 1) ++m.removed;
    if (i >= 2) {
        if (i == 2) ++m.removed;
        else m.pieces[k++] = first_sign * (i - 1);
    }
    if (i <= n - 2) ++m.removed;
    if (i <= n - 3) {
        if (i == n - 3) ++m.removed;
        else m.pieces[k++] = mover_sign * (n - 2 - i);
    }
    return m;
}

bool owns(int part, int i, Color mover) {
    const bool first_black = part > 0;
    const bool black = (i % 2 == 0) == first_black;
    return black == (mover == Color::Black);
}

// Moves worth searching. Odd segments are symmetric under reversal, so one
// move per mirror pair suffices (even ones reverse into S_-n, not themselves).
// An endpoint move is skipped once the segment has 4+ vertices: the move two
// steps in takes a superset of its vertices.
template <class F>
void for_each_search_move(int part, Color mover, bool prune, F&& f) {
    const int n = std::abs(part);
    const int last = n % 2 == 1 ? (n - 1) / 2 : n - 1;
    for (int i = 0; i <= last; ++i) {
        if (!owns(part, i, mover)) continue;
        if (prune && n >= 4 && (i == 0 || i == n - 1)) continue;
        f(move_at(part, i));
    }
}

// Insert into a sorted vector.
void insert_sorted(std::vector<int>& v, int x) { v.insert(std::upper_bound(v.begin(), v.end(), x), x); }

} // namespace

std::vector<SegmentMove> segment_moves(int part, Color mover) {
    if (part == 0) throw InputError("segment length must be nonzero");
    std::vector<SegmentMove> out;
    for (int i = 0; i < std::abs(part); ++i)
        if (owns(part, i, mover)) out.push_back(move_at(part, i));
    return out;
}

// ---------------------------------------------------------------------------

struct SegmentEngine::Memo {
    static constexpr std::size_t kShards = 64;
    struct Shard {
        mutable std::mutex mu;
        std::unordered_map<std::u16string, Bounds> map;
    };
    std::array<Shard, kShards> shards;

    Shard& shard_for(const std::u16string& key) {
        return shards[(std::hash<std::u16string>{}(key) >> 7) % kShards];
    }

    std::optional<Bounds> find(const std::u16string& key) {
        Shard& s = shard_for(key);
        std::lock_guard lock(s.mu);
        auto it = s.map.find(key);
        if (it == s.map.end()) return std::nullopt;
        return it->second;
    }
    // Intersects with what is already known; concurrent writers only ever tighten.
    void tighten(const std::u16string& key, Bounds b) {
        Shard& s = shard_for(key);
        std::lock_guard lock(s.mu);
        auto [it, fresh] = s.map.try_emplace(key, b);
        if (!fresh) {
            it->second.lo = std::max(it->second.lo, b.lo);
            it->second.hi = std::min(it->second.hi, b.hi);
        }
    }
    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& s : shards) {
            std::lock_guard lock(s.mu);
            n += s.map.size();
        }
        return n;
    }
};

SegmentEngine::SegmentEngine(EngineOptions opts) : opts_(opts), memo_(std::make_unique<Memo>()) {}
SegmentEngine::~SegmentEngine() = default;

namespace {

// Normal form of parts (already normal) with index `skip` removed and pieces added.
// Returns the offset produced (always 0 for pieces of length >= 2, kept for clarity).
std::vector<int> child_parts(const std::vector<int>& parts, std::size_t skip, const int pieces[2], bool rewrite) {
    std::vector<int> out;
    out.reserve(parts.size() + 3);
    for (std::size_t j = 0; j < parts.size(); ++j)
        if (j != skip) out.push_back(parts[j]);
    auto add = [&](int p) {
        if (p == 0) return;
        if (p % 2 == 0) {
            p = std::abs(p);
            if (rewrite && p % 4 == 2 && p > 2) {
                // {4k, 2}; each goes through the even-pair cancellation below.
                for (int q : {p - 2, 2}) {
                    auto it = std::lower_bound(out.begin(), out.end(), q);
                    if (it != out.end() && *it == q) out.erase(it);
                    else out.insert(it, q);
                }
                return;
            }
            auto it = std::lower_bound(out.begin(), out.end(), p);
            if (it != out.end() && *it == p) out.erase(it);
            else out.insert(it, p);
            return;
        }
        auto it = std::lower_bound(out.begin(), out.end(), -p);
        if (it != out.end() && *it == -p) {
            out.erase(it);
            return;
        }
        insert_sorted(out, p);
    };
    add(pieces[0]);
    add(pieces[1]);
    return out;
}

std::vector<int> negated_parts(const std::vector<int>& parts) {
    std::vector<int> out(parts);
    for (int& p : out)
        if (p % 2 != 0) p = -p;
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

int SegmentEngine::rs_normal(const std::vector<int>& parts) { return -ls_normal(negated_parts(parts)); }

int SegmentEngine::ls_normal(const std::vector<int>& parts) {
    return ls_window(parts, -kInfinity, kInfinity);
}

// Fail-soft alpha-beta on Ls of a normal form. A result v <= alpha is an upper
// bound, v >= beta a lower bound, anything in between exact. The memo keeps the
// tightest bounds seen for every state, so the root value is exact whatever
// windows the inner nodes were searched with.
int SegmentEngine::ls_window(const std::vector<int>& parts, int alpha, int beta) {
    if (parts.empty()) return 0;
    const std::u16string key = encode(parts);
    int size = 0;
    for (int p : parts) size += std::abs(p);
    Bounds known{static_cast<std::int8_t>(-std::min(size, 127)), static_cast<std::int8_t>(std::min(size, 127))};
    if (auto hit = memo_->find(key)) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        known = *hit;
        if (known.lo == known.hi || known.lo >= beta) return known.lo;
        if (known.hi <= alpha) return known.hi;
    }
    if (!opts_.windowed) {
        alpha = -kInfinity;
        beta = kInfinity;
    }
    const std::uint64_t done = expansions_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (opts_.node_limit != 0 && done > opts_.node_limit)
        throw BudgetExhausted("segment search exceeded " + std::to_string(opts_.node_limit) + " expansions");

    const int a0 = std::max(alpha, static_cast<int>(known.lo));
    const int b0 = std::min(beta, static_cast<int>(known.hi));
    int a = a0;
    int best = -kInfinity;
    std::vector<std::pair<int, std::vector<int>>> children;
    for (std::size_t idx = 0; idx < parts.size(); ++idx) {
        if (idx > 0 && parts[idx] == parts[idx - 1]) continue;
        for_each_search_move(parts[idx], Color::Black, opts_.prune_included, [&](const SegmentMove& m) {
            children.emplace_back(m.removed, child_parts(parts, idx, m.pieces, opts_.rewrite));
        });
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (auto& [gain, child] : children) {
        // gain + Rs(child) = gain - Ls(-child); Rs(child) is wanted inside (a - gain, b0 - gain).
        const int v = gain - ls_window(negated_parts(child), gain - b0, gain - a);
        best = std::max(best, v);
        if (best >= b0) break;
        a = std::max(a, best);
    }
    Bounds found = known;
    if (best <= a0) found.hi = static_cast<std::int8_t>(std::min<int>(found.hi, best));
    else if (best >= b0) found.lo = static_cast<std::int8_t>(std::max<int>(found.lo, best));
    else found.lo = found.hi = static_cast<std::int8_t>(best);
    memo_->tighten(key, found);
    return best;
}

int SegmentEngine::left_score(const SegmentSum& s) {
    SegmentSum n = opts_.rewrite ? normal_form(s) : canonicalize(s);
    return n.offset + ls_normal(n.parts);
}

int SegmentEngine::right_score(const SegmentSum& s) {
    SegmentSum n = opts_.rewrite ? normal_form(s) : canonicalize(s);
    return n.offset + rs_normal(n.parts);
}

ScorePair SegmentEngine::scores(const SegmentSum& s) {
    SegmentSum n = opts_.rewrite ? normal_form(s) : canonicalize(s);
    return {n.offset + ls_normal(n.parts), n.offset + rs_normal(n.parts)};
}

std::vector<TableRow> SegmentEngine::table(int max_n, int threads) {
    if (max_n < 1) throw InputError("table needs max_n >= 1");
    std::vector<TableRow> rows(max_n);
    auto row = [&](int n) {
        ScorePair sc = scores({{n}, 0});
        rows[n - 1] = {n, sc.ls, sc.rs};
    };
    if (threads <= 1) {
        for (int n = 1; n <= max_n; ++n) row(n);
        return rows;
    }
    std::atomic<int> next{1};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (int n = next++; n <= max_n; n = next++) row(n);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

EngineStats SegmentEngine::stats() const {
    return {expansions_.load(), memo_->size(), hits_.load()};
}

namespace {

constexpr char kMagic[8] = {'I', 'N', 'F', 'L', 'S', 'E', 'G', '\n'};
constexpr std::uint32_t kVersion = 2;

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw InputError("segment cache truncated");
    return v;
}

} // namespace

void SegmentEngine::save(const std::filesystem::path& path) const {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write segment cache " + tmp.string());
        out.write(kMagic, sizeof kMagic);
        put<std::uint32_t>(out, kVersion);
        put<std::uint8_t>(out, opts_.rewrite ? 1 : 0);
        put<std::uint64_t>(out, memo_->size());
        for (const auto& shard : memo_->shards) {
            std::lock_guard lock(shard.mu);
            for (const auto& [key, value] : shard.map) {
                put<std::uint16_t>(out, static_cast<std::uint16_t>(key.size()));
                for (char16_t c : key) put<std::uint16_t>(out, static_cast<std::uint16_t>(c));
                put<std::int8_t>(out, value.lo);
                put<std::int8_t>(out, value.hi);
            }
        }
        if (!out) throw InputError("error writing segment cache " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

bool SegmentEngine::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw InputError(path.string() + " is not a segment cache");
    if (get<std::uint32_t>(in) != kVersion) throw InputError(path.string() + ": unsupported segment cache version");
    bool rewrite = get<std::uint8_t>(in) != 0;
    if (rewrite != opts_.rewrite) throw InputError(path.string() + ": cache built with a different normal form");
    auto count = get<std::uint64_t>(in);
    for (std::uint64_t e = 0; e < count; ++e) {
        auto len = get<std::uint16_t>(in);
        std::u16string key(len, u'\0');
        for (auto& c : key) c = static_cast<char16_t>(get<std::uint16_t>(in));
        Bounds b;
        b.lo = get<std::int8_t>(in);
        b.hi = get<std::int8_t>(in);
        if (b.lo > b.hi) throw InputError(path.string() + ": inconsistent bounds in segment cache");
        memo_->tighten(key, b);
    }
    return true;
}

// ---------------------------------------------------------------------------

std::string table_csv(const std::vector<TableRow>& rows) {
    std::string out = "n,ls,rs\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + std::to_string(r.ls) + "," + std::to_string(r.rs) + "\n";
    return out;
}

std::vector<TableRow> parse_table_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<TableRow> rows;
    if (!std::getline(in, line) || line != "n,ls,rs") throw InputError("table CSV must start with 'n,ls,rs'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TableRow r;
        char c1 = 0, c2 = 0;
        std::istringstream ls(line);
        if (!(ls >> r.n >> c1 >> r.ls >> c2 >> r.rs) || c1 != ',' || c2 != ',')
            throw InputError("bad table row '" + line + "'");
        rows.push_back(r);
    }
    return rows;
}

std::vector<int> periodicity_scan(const std::vector<TableRow>& rows, int period, int preperiod) {
    if (period < 1 || preperiod < 0) throw InputError("period must be positive and preperiod non-negative");
    if (static_cast<int>(rows.size()) < preperiod + 2 * period)
        throw InputError("table too short for period " + std::to_string(period) + " and preperiod " +
                         std::to_string(preperiod));
    std::unordered_map<int, const TableRow*> by_n;
    for (const auto& r : rows) by_n[r.n] = &r;
    std::vector<int> bad;
    for (const auto& r : rows) {
        if (r.n <= preperiod) continue;
        auto it = by_n.find(r.n + period);
        if (it == by_n.end()) continue;
        if (it->second->ls != r.ls || it->second->rs != r.rs) bad.push_back(r.n);
    }
    std::sort(bad.begin(), bad.end());
    return bad;
}

BoundReport sum_bound_check(SegmentEngine& engine, const SegmentSum& s) {
    BoundReport rep;
    SegmentSum c = canonicalize(s);
    ScorePair sc = engine.scores(s);
    rep.scores = sc;
    const int ls = sc.ls - c.offset;
    const int rs = sc.rs - c.offset;
    int odd = 0;
    for (int p : s.parts)
        if (std::abs(p) % 2 == 1 && std::abs(p) > 1) ++odd;
    rep.odd_parts = odd;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) rep.violations.push_back(what + " (ls=" + std::to_string(ls) + ", rs=" + std::to_string(rs) + ")");
    };
    expect(-odd - 4 <= rs && rs <= ls && ls <= odd + 4, "-k-4 <= Rs <= Ls <= k+4 with k=" + std::to_string(odd));
    if (odd == 0) expect(-4 <= rs && rs <= 0 && 0 <= ls && ls <= 4, "-4 <= Rs <= 0 <= Ls <= 4 for all-even sums");
    std::vector<int> real;
    for (int p : s.parts)
        if (std::abs(p) > 1) real.push_back(p);
    if (real.size() == 1) expect(-5 <= rs && rs < 0 && 0 < ls && ls <= 5, "-5 <= Rs < 0 < Ls <= 5 for one segment");
    return rep;
}

GraphPtr to_graph(const SegmentSum& s) {
    std::vector<GraphPtr> parts;
    for (int p : s.parts) parts.push_back(build_segment(p));
    return disjoint_union(parts, format_parts(s.parts));
}

} // namespace influence::segments
