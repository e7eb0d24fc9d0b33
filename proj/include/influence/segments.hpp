#pragma once

#include "influence/graph.hpp"
#include "influence/score.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace influence::segments {

/// Disjunctive sum of segments S_n (n > 0 starts Black, n < 0 starts White)
/// plus banked points.
struct SegmentSum {
    std::vector<int> parts;
    int offset = 0;

    friend bool operator==(const SegmentSum&, const SegmentSum&) = default;
};

/// S_{±1} into the offset, even parts made positive, {n, -n} pairs and equal
/// even pairs cancelled, parts sorted ascending.
SegmentSum canonicalize(SegmentSum s);
/// Every part 4k+2 with k >= 1 replaced by {4k, 2}. No cancellation.
SegmentSum rewrite_42(SegmentSum s);
/// canonicalize(rewrite_42(canonicalize(s))): the memo normal form.
SegmentSum normal_form(SegmentSum s);
/// Negative of the sum: odd parts and offset flip sign.
SegmentSum negate(SegmentSum s);

/// "5,5,-3" or "5 5 -3"; an empty string is the empty sum. Throws InputError.
SegmentSum parse_parts(const std::string& text);
std::string format_parts(const std::vector<int>& parts);

/// Compact memo key of sorted parts (each part stored as a 16-bit value).
std::u16string encode(const std::vector<int>& sorted_parts);
std::vector<int> decode(const std::u16string& key);

/// A move inside one segment, derived arithmetically.
struct SegmentMove {
    int vertex = 0;   // 0-based index along the segment
    int removed = 0;  // vertices taken (2..5 once |n| >= 2)
    int pieces[2] = {0, 0}; // signed lengths of what remains (0 = nothing)
};

/// Every move of `mover` in S_part (one per vertex of that color).
std::vector<SegmentMove> segment_moves(int part, Color mover);

struct EngineOptions {
    bool rewrite = true;          // apply the 4k+2 normal form before memo lookups
    bool prune_included = true;   // skip endpoint moves included in the 4-move next to them
    bool windowed = true;         // alpha-beta windows below the root; root values stay exact
    std::uint64_t node_limit = 0; // 0 = unlimited
};

struct TableRow {
    int n = 0;
    int ls = 0;
    int rs = 0;
    friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct EngineStats {
    std::uint64_t expansions = 0;
    std::uint64_t entries = 0;
    std::uint64_t hits = 0;
};

/// Memoized minimax over segment sums. The memo stores bounds on Ls of normal
/// forms only; Rs(s) is read as -Ls(-s). Safe to share between threads.
class SegmentEngine {
  public:
    explicit SegmentEngine(EngineOptions opts = {});
    ~SegmentEngine();
    SegmentEngine(const SegmentEngine&) = delete;
    SegmentEngine& operator=(const SegmentEngine&) = delete;

    ScorePair scores(const SegmentSum& s);
    int left_score(const SegmentSum& s);
    int right_score(const SegmentSum& s);

    /// Rows n = 1..max_n. Rows are sharded across `threads` workers.
    std::vector<TableRow> table(int max_n, int threads = 1);

    /// Versioned binary memo file. load() returns false when the file is absent;
    /// throws InputError for a corrupt file or one built with other options.
    void save(const std::filesystem::path& path) const;
    bool load(const std::filesystem::path& path);

    EngineStats stats() const;
    const EngineOptions& options() const { return opts_; }

  private:
    struct Memo;
    struct Bounds {
        std::int8_t lo = 0, hi = 0;
    };
    static constexpr int kInfinity = 1000;
    int ls_normal(const std::vector<int>& parts);
    int ls_window(const std::vector<int>& parts, int alpha, int beta);
    int rs_normal(const std::vector<int>& parts);

    EngineOptions opts_;
    std::unique_ptr<Memo> memo_;
    std::atomic<std::uint64_t> expansions_{0};
    std::atomic<std::uint64_t> hits_{0};
};

/// Paper-style CSV: "n,ls,rs" header then one line per row.
std::string table_csv(const std::vector<TableRow>& rows);
/// Reads the CSV written by table_csv. Throws InputError.
std::vector<TableRow> parse_table_csv(const std::string& text);

/// Every n > preperiod with n + period in the table and row(n) != row(n + period).
/// Throws InputError when the table is shorter than preperiod + 2 * period.
std::vector<int> periodicity_scan(const std::vector<TableRow>& rows, int period, int preperiod);

struct BoundReport {
    ScorePair scores;
    int odd_parts = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks -k-4 <= Rs <= Ls <= k+4 (k = number of odd parts, offset removed),
/// the [-4, 4] all-even bounds, and -5 <= Rs < 0 < Ls <= 5 for a single segment.
BoundReport sum_bound_check(SegmentEngine& engine, const SegmentSum& s);

/// Build the graph of a segment sum (offset ignored); for cross-checking against the graph solver.
GraphPtr to_graph(const SegmentSum& s);

} // namespace influence::segments
