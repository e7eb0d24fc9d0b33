#include "influence/reduction.hpp"

#include "influence/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace influence::reduction {

PosCnf make_pos_cnf(int num_vars, std::vector<std::vector<int>> clauses) {
    if (num_vars < 1) throw InputError("formula needs at least one variable");
    if (clauses.empty()) throw InputError("formula needs at least one clause");
    PosCnf f;
    f.declared_vars = num_vars;
    f.num_vars = num_vars + num_vars % 2;
    for (auto& c : clauses) {
        if (c.empty()) throw InputError("empty clause");
        for (int x : c) {
            if (x < 0) throw InputError("negative literal " + std::to_string(x) + " in a positive formula");
            if (x == 0 || x > num_vars) throw InputError("variable " + std::to_string(x) + " out of range");
        }
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        f.clauses.push_back(std::move(c));
    }
    return f;
}

PosCnf parse_pos_cnf(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int vars = -1, count = -1;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == 'c') continue;
        if (tok == "p") {
            std::string kind;
            if (vars >= 0) throw InputError("duplicate header");
            if (!(ls >> kind >> vars >> count) || kind != "pcnf" || vars < 1 || count < 1)
                throw InputError("header must read 'p pcnf <vars> <clauses>'");
            continue;
        }
        if (vars < 0) throw InputError("clause before the 'p pcnf' header");
        do {
            long long x = 0;
            try {
                std::size_t used = 0;
                x = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw InputError("not an integer: '" + tok + "'");
            }
            if (x < 0) throw InputError("negative literal " + tok + " in a positive formula");
            if (x == 0) {
                if (current.empty()) throw InputError("empty clause");
                clauses.push_back(std::move(current));
                current.clear();
            } else {
                if (x > vars) throw InputError("variable " + tok + " out of range");
                current.push_back(static_cast<int>(x));
            }
        } while (ls >> tok);
    }
    if (vars < 0) throw InputError("missing 'p pcnf' header");
    if (!current.empty()) throw InputError("last clause is not terminated by 0");
    if (static_cast<int>(clauses.size()) != count)
        throw InputError("header announces " + std::to_string(count) + " clauses, found " + std::to_string(clauses.size()));
    return make_pos_cnf(vars, std::move(clauses));
}

std::string format_pos_cnf(const PosCnf& f) {
    std::string out = "p pcnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const auto& c : f.clauses) {
        for (int x : c) out += std::to_string(x) + " ";
        out += "0\n";
    }
    return out;
}

int expected_vertices(const PosCnf& f) {
    const int n = f.num_vars, m = static_cast<int>(f.clauses.size());
    return m + n * (m + 2 * n + 1);
}

int expected_edges(const PosCnf& f) {
    const int n = f.num_vars, m = static_cast<int>(f.clauses.size());
    int occurrences = 0;
    for (const auto& c : f.clauses) occurrences += static_cast<int>(c.size());
    return n * (m + 2 * n) + occurrences;
}

Gadget reduce(const PosCnf& f) {
    const int n = f.num_vars, m = static_cast<int>(f.clauses.size());
    if (n % 2 != 0) throw InputError("reduction needs an even variable count");
    if (expected_vertices(f) > kMaxVertices)
        throw InputError("reduced graph would have " + std::to_string(expected_vertices(f)) + " vertices; capacity is " +
                         std::to_string(kMaxVertices));
    Gadget gd;
    gd.bag_size = m + 2 * n - 1;
    std::vector<Color> colors;
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> edges;
    auto add = [&](Color c, std::string label) {
        colors.push_back(c);
        labels.push_back(std::move(label));
        return static_cast<int>(colors.size()) - 1;
    };
    for (int j = 1; j <= m; ++j) gd.clause_vertex.push_back(add(Color::White, "c" + std::to_string(j)));
    for (int i = 1; i <= n; ++i) {
        const std::string s = std::to_string(i);
        const int w = add(Color::White, "x" + s + "w");
        const int b = add(Color::Black, "x" + s + "b");
        gd.var_white.push_back(w);
        gd.var_black.push_back(b);
        edges.emplace_back(w, b);
        std::vector<int> bag;
        for (int k = 1; k <= gd.bag_size; ++k) {
            const int v = add(Color::Black, "v" + s + "_" + std::to_string(k));
            edges.emplace_back(w, v);
            bag.push_back(v);
        }
        gd.bags.push_back(std::move(bag));
    }
    for (int j = 0; j < m; ++j)
        for (int x : f.clauses[j]) edges.emplace_back(gd.var_black[x - 1], gd.clause_vertex[j]);
    gd.graph = make_graph(std::move(colors), edges, "reduction", std::move(labels));
    return gd;
}

namespace {

// state: bit i of `chosen` set once X_{i+1} is fixed, `truth` holds the values.
bool alice_wins(const PosCnf& f, unsigned chosen, unsigned truth, bool alice_to_move,
                std::map<std::pair<unsigned, unsigned>, bool>& memo) {
    const unsigned all = (1u << f.num_vars) - 1;
    if (chosen == all) {
        for (const auto& c : f.clauses)
            if (std::none_of(c.begin(), c.end(), [&](int x) { return truth >> (x - 1) & 1; })) return false;
        return true;
    }
    if (auto it = memo.find({chosen, truth}); it != memo.end()) return it->second;
    bool result = !alice_to_move;
    for (int i = 0; i < f.num_vars; ++i) {
        if (chosen >> i & 1) continue;
        const bool w = alice_wins(f, chosen | 1u << i, alice_to_move ? truth | 1u << i : truth, !alice_to_move, memo);
        if (alice_to_move && w) {
            result = true;
            break;
        }
        if (!alice_to_move && !w) {
            result = false;
            break;
        }
    }
    memo[{chosen, truth}] = result;
    return result;
}

} // namespace

bool pos_cnf_winner(const PosCnf& f) {
    if (f.num_vars > 12) throw InputError("brute-force POS-CNF oracle is limited to 12 variables");
    std::map<std::pair<unsigned, unsigned>, bool> memo;
    return alice_wins(f, 0, 0, true, memo);
}

SoundnessReport reduction_soundness_check(const PosCnf& f, solver::Solver& s) {
    SoundnessReport r;
    r.alice_wins = pos_cnf_winner(f);
    r.left_score = s.left_score(Position(reduce(f).graph));
    r.threshold = static_cast<int>(f.clauses.size());
    return r;
}

bool bags_are_twin_classes(const Gadget& gadget) {
    const Position p = Position::raw(gadget.graph, gadget.graph->all(), 0);
    auto classes = twin_classes(p);
    for (const auto& bag : gadget.bags) {
        if (bag.empty()) continue;
        auto it = std::find_if(classes.begin(), classes.end(), [&](const std::vector<int>& c) {
            return std::find(c.begin(), c.end(), bag.front()) != c.end();
        });
        if (it == classes.end()) return false;
        for (int v : bag)
            if (std::find(it->begin(), it->end(), v) == it->end()) return false;
    }
    return true;
}

GraphPtr shift_threshold(const GroundGraph& g, int k) {
    std::vector<Color> colors;
    std::vector<std::string> labels;
    for (int v = 0; v < g.size(); ++v) {
        colors.push_back(g.color(v));
        labels.push_back(g.label(v));
    }
    const Color extra = k > 0 ? Color::White : Color::Black;
    for (int i = 0; i < std::abs(k); ++i) {
        colors.push_back(extra);
        labels.push_back("pad" + std::to_string(i));
    }
    return make_graph(std::move(colors), g.edges(), g.name(), std::move(labels));
}

} // namespace influence::reduction
