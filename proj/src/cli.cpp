#include "influence/cli.hpp"

#include "influence/cgt.hpp"
#include "influence/error.hpp"
#include "influence/io.hpp"
#include "influence/reduction.hpp"
#include "influence/segments.hpp"
#include "influence/solver.hpp"
#include "influence/symmetry.hpp"
#include "influence/thermo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace influence::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Settings {
    std::uint64_t node_limit = 100'000'000;
    int threads = 1;
    std::string cache_dir;
    int tree_limit = 16;
    std::uint64_t bw_budget = 10'000'000;
};

std::map<std::string, std::string> read_config(const fs::path& path) {
    std::map<std::string, std::string> kv;
    std::istringstream in(io::read_text_file(path));
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        kv[trim(line.substr(0, eq))] = value;
    }
    return kv;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InputError("setting " + key + " expects a nonnegative integer, got '" + v + "'");
    }
}

void apply_setting(Settings& s, const std::string& key, const std::string& value) {
    if (key == "node_limit") s.node_limit = to_u64(key, value);
    else if (key == "threads") s.threads = static_cast<int>(std::max<std::uint64_t>(1, to_u64(key, value)));
    else if (key == "cache_dir") s.cache_dir = value;
    else if (key == "tree_limit") s.tree_limit = static_cast<int>(to_u64(key, value));
    else if (key == "bw_budget") s.bw_budget = to_u64(key, value);
    else throw InputError("unknown setting '" + key + "'");
}

std::string default_cache_dir() {
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return (fs::path(x) / "influence").string();
    if (const char* h = std::getenv("HOME"); h && *h) return (fs::path(h) / ".cache" / "influence").string();
    return (fs::temp_directory_path() / "influence-cache").string();
}

// Defaults, then the config file, then INFLUENCE_* variables. Flags are applied by the caller.
Settings load_settings(const std::string& config_flag) {
    Settings s;
    s.cache_dir = default_cache_dir();
    std::string config = config_flag;
    if (config.empty())
        if (const char* c = std::getenv("INFLUENCE_CONFIG")) config = c;
    if (!config.empty())
        for (const auto& [k, v] : read_config(config)) apply_setting(s, k, v);
    for (const char* key : {"node_limit", "threads", "cache_dir", "tree_limit", "bw_budget"}) {
        std::string env = "INFLUENCE_";
        for (const char* c = key; *c; ++c) env += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
        if (const char* v = std::getenv(env.c_str())) apply_setting(s, key, v);
    }
    return s;
}

std::pair<int, int> parse_dims(const std::string& text, const char* what) {
    const auto x = text.find_first_of("xX");
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        std::size_t u1 = 0, u2 = 0;
        const std::string a = text.substr(0, x), b = text.substr(x + 1);
        const int r = std::stoi(a, &u1), c = std::stoi(b, &u2);
        if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(text);
        return {r, c};
    } catch (const std::exception&) {
        throw InputError(std::string(what) + " expects RxC, got '" + text + "'");
    }
}

VertexSet parse_vertex_list(const std::string& text, const GroundGraph& g) {
    VertexSet s;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        int v = -1;
        try {
            std::size_t used = 0;
            v = std::stoi(tok, &used);
            if (used != tok.size()) v = -1;
        } catch (const std::exception&) {
        }
        if (v < 0 || v >= g.size()) {
            const auto& labels = g.labels();
            auto it = std::find(labels.begin(), labels.end(), tok);
            if (it == labels.end()) throw InputError("bad vertex id '" + tok + "'");
            v = static_cast<int>(it - labels.begin());
        }
        s.set(v);
    }
    return s;
}

struct GraphSource {
    int segment = 0;
    std::string segments;
    std::string grid, cylinder, torus, file;
    int hypercube = 0;

    void attach(CLI::App* app) {
        app->add_option("--segment", segment, "Segment S_N (negative N starts White)");
        app->add_option("--segments", segments, "Disjoint union of segments, e.g. 9,2");
        app->add_option("--grid", grid, "Grid RxC");
        app->add_option("--hypercube", hypercube, "Hypercube H_N");
        app->add_option("--cylinder", cylinder, "Cylinder NxM (N rows wrap)");
        app->add_option("--torus", torus, "Torus NxM");
        app->add_option("--file", file, "Graph JSON file");
    }

    bool given() const {
        return segment != 0 || !segments.empty() || !grid.empty() || !cylinder.empty() || !torus.empty() ||
               !file.empty() || hypercube != 0;
    }

    GraphPtr build() const {
        const int count = (segment != 0) + !segments.empty() + !grid.empty() + !cylinder.empty() + !torus.empty() +
                          !file.empty() + (hypercube != 0);
        if (count != 1)
            throw InputError("give exactly one graph source: --segment, --segments, --grid, --hypercube, "
                             "--cylinder, --torus or --file");
        if (segment != 0) return build_segment(segment);
        if (!segments.empty()) {
            auto s = segments::parse_parts(segments);
            if (s.parts.empty()) throw InputError("--segments needs at least one part");
            return segments::to_graph(s);
        }
        if (!grid.empty()) {
            auto [r, c] = parse_dims(grid, "--grid");
            return build_grid(r, c);
        }
        if (!cylinder.empty()) {
            auto [n, m] = parse_dims(cylinder, "--cylinder");
            return build_cylinder(n, m);
        }
        if (!torus.empty()) {
            auto [n, m] = parse_dims(torus, "--torus");
            return build_torus(n, m);
        }
        if (hypercube != 0) return build_hypercube(hypercube);
        return io::load_graph_file(file);
    }
};

std::string graph_title(const GroundGraph& g) {
    return (g.name().empty() ? std::string("graph") : g.name()) + " (" + std::to_string(g.size()) + " vertices, " +
           std::to_string(g.edge_count()) + " edges)";
}

json stats_json(const solver::SolverStats& s) {
    return {{"expansions", s.expansions}, {"memo_hits", s.hits}, {"memo_entries", s.entries}};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact solver workbench for BIPARTITE INFLUENCE", "influence"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config;
    bool as_json = false;
    int threads_flag = 0;
    std::uint64_t node_limit_flag = 0;
    app.add_option("--config", config, "key = value settings file");
    app.add_flag("--json", as_json, "Machine-readable output");
    app.add_option("--threads", threads_flag, "Worker threads");
    auto* node_limit_opt = app.add_option("--node-limit", node_limit_flag, "Solver expansion budget");

    // solve
    auto* solve = app.add_subcommand("solve", "Exact Left and Right scores of a graph");
    GraphSource solve_src;
    solve_src.attach(solve);
    bool no_prune = false;
    solve->add_flag("--no-prune", no_prune, "Keep moves whose removed set is inside another's");

    // table
    auto* table = app.add_subcommand("table", "Segment score table n,ls,rs");
    int table_max = 38;
    std::string table_out, cache_flag;
    bool no_cache = false, no_rewrite = false, full_window = false;
    int period = 0, preperiod = 0;
    table->add_option("--max", table_max, "Largest segment length")->check(CLI::Range(1, 200));
    table->add_option("--out", table_out, "Write the CSV here instead of stdout");
    table->add_option("--cache-dir", cache_flag, "Directory of the persistent memo");
    table->add_flag("--no-cache", no_cache, "Do not read or write the memo file");
    table->add_flag("--no-rewrite", no_rewrite, "Memoize without the 4k+2 normal form");
    table->add_flag("--full-window", full_window, "Search every position with a full window (exact values everywhere, slower)");
    table->add_option("--period", period, "Scan the table for this period");
    table->add_option("--preperiod", preperiod, "Rows up to this n are excluded from the scan");

    // thermo
    auto* thermo_cmd = app.add_subcommand("thermo", "Temperature, mean and cooled score trajectories");
    GraphSource thermo_src;
    thermo_src.attach(thermo_cmd);
    std::string thermo_game;
    bool thermo_csv = false, thermo_raw = false;
    int tree_flag = 0;
    thermo_cmd->add_option("--game", thermo_game, "Game in <L|R> notation");
    thermo_cmd->add_flag("--csv", thermo_csv, "Emit t,ls,rs rows at the breakpoints");
    thermo_cmd->add_flag("--no-simplify", thermo_raw, "Cool the full game tree");
    thermo_cmd->add_option("--max-vertices", tree_flag, "Tree expansion limit");

    // equiv
    auto* equiv = app.add_subcommand("equiv", "Equivalence of two games");
    std::vector<std::string> sums;
    std::string game_a, game_b;
    int offset_a = 0, offset_b = 0;
    bool no_audit = false;
    equiv->add_option("--sum", sums, "Segment sum such as 5,5 (give twice)");
    equiv->add_option("--game-a", game_a, "First game in <L|R> notation");
    equiv->add_option("--game-b", game_b, "Second game in <L|R> notation");
    equiv->add_option("--offset-a", offset_a, "Number added to the first game");
    equiv->add_option("--offset-b", offset_b, "Number added to the second game");
    equiv->add_flag("--no-audit", no_audit, "Skip the Milnor-universe audit of the inputs");
    equiv->add_option("--max-vertices", tree_flag, "Tree expansion limit");

    // symmetry
    auto* sym = app.add_subcommand("symmetry", "Search and certify a BW-automorphism");
    GraphSource sym_src;
    sym_src.attach(sym);
    std::uint64_t budget_flag = 0;
    bool no_solve = false;
    sym->add_option("--budget", budget_flag, "Search node budget");
    sym->add_flag("--no-solve", no_solve, "Skip the exact solve and the mirror simulation");

    // reduce
    auto* red = app.add_subcommand("reduce", "POS-CNF to BIPARTITE INFLUENCE");
    std::string cnf_file, red_out;
    bool red_check = false, red_shift = false;
    red->add_option("--cnf", cnf_file, "Formula file (p pcnf header)")->required();
    red->add_option("--out", red_out, "Write the graph JSON here");
    red->add_flag("--check", red_check, "Compare the POS-CNF winner with Ls >= m and audit the bags");
    red->add_flag("--shift", red_shift, "Add m isolated White vertices so the threshold becomes 0");

    // audit
    auto* audit = app.add_subcommand("audit", "Milnor-universe audit and gift inequalities");
    GraphSource audit_src;
    audit_src.attach(audit);
    int depth = 2;
    std::string black_gift, white_gift;
    audit->add_option("--depth", depth, "Moves explored from the start position");
    audit->add_option("--black-gift", black_gift, "Black vertex ids or labels, comma separated");
    audit->add_option("--white-gift", white_gift, "White vertex ids or labels, comma separated");

    std::vector<std::string> argv_store{"influence"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        Settings st = load_settings(config);
        if (threads_flag > 0) st.threads = threads_flag;
        if (node_limit_opt->count() > 0) st.node_limit = node_limit_flag;
        if (tree_flag > 0) st.tree_limit = tree_flag;
        if (budget_flag > 0) st.bw_budget = budget_flag;
        if (!cache_flag.empty()) st.cache_dir = cache_flag;

        solver::SolverOptions sopts;
        sopts.node_limit = st.node_limit;
        sopts.threads = st.threads;

        if (*solve) {
            GraphPtr g = solve_src.build();
            sopts.prune_included = !no_prune;
            solver::Solver s(sopts);
            const ScorePair sc = s.scores(Position(g));
            const auto stats = s.stats();
            if (as_json) {
                out << json{{"graph", g->name()}, {"vertices", g->size()}, {"edges", g->edge_count()},
                            {"ls", sc.ls},        {"rs", sc.rs},          {"stats", stats_json(stats)}}
                           .dump()
                    << "\n";
            } else {
                out << "graph: " << graph_title(*g) << "\n"
                    << "ls=" << sc.ls << " rs=" << sc.rs << "\n"
                    << "expansions=" << stats.expansions << " memo_hits=" << stats.hits
                    << " memo_entries=" << stats.entries << "\n";
            }
            return kOk;
        }

        if (*table) {
            segments::EngineOptions eo;
            eo.rewrite = !no_rewrite;
            eo.windowed = !full_window;
            segments::SegmentEngine engine(eo);
            fs::path cache;
            if (!no_cache) {
                cache = fs::path(st.cache_dir) / (no_rewrite ? "segments-plain.bin" : "segments-normal.bin");
                engine.load(cache);
            }
            const auto rows = engine.table(table_max, st.threads);
            if (!no_cache) {
                fs::create_directories(cache.parent_path());
                engine.save(cache);
            }
            std::vector<int> violations;
            const bool scan = period > 0;
            if (scan) violations = segments::periodicity_scan(rows, period, preperiod);
            if (as_json) {
                json j;
                j["rows"] = json::array();
                for (const auto& r : rows) j["rows"].push_back({{"n", r.n}, {"ls", r.ls}, {"rs", r.rs}});
                if (scan) j["periodicity"] = {{"period", period}, {"preperiod", preperiod}, {"violations", violations}};
                if (!table_out.empty()) {
                    std::ofstream(table_out) << segments::table_csv(rows);
                }
                out << j.dump() << "\n";
            } else if (!table_out.empty()) {
                std::ofstream f(table_out, std::ios::binary);
                if (!f) throw InputError("cannot write " + table_out);
                f << segments::table_csv(rows);
            } else {
                out << segments::table_csv(rows);
            }
            if (scan && !as_json) {
                err << "periodicity: period " << period << ", preperiod " << preperiod << ": ";
                if (violations.empty()) err << "no violation\n";
                else {
                    err << violations.size() << " violation(s) at n =";
                    for (int n : violations) err << " " << n;
                    err << "\n";
                }
            }
            return violations.empty() ? kOk : kViolation;
        }

        if (*thermo_cmd) {
            cgt::GameStore store({st.tree_limit});
            cgt::Game g;
            if (!thermo_game.empty()) {
                if (thermo_src.given()) throw InputError("give either --game or a graph source");
                g = store.parse(thermo_game);
            } else {
                g = store.from_position(Position(thermo_src.build()));
            }
            if (!thermo_raw) g = store.simplify(g);
            thermo::Thermographer th(store);
            const auto tg = th.thermograph(g);
            if (thermo_csv) {
                out << thermo::thermograph_csv(tg);
            } else if (as_json) {
                json j = json::parse(thermo::thermograph_json(tg));
                j["ls0"] = store.ls(g).str();
                j["rs0"] = store.rs(g).str();
                out << j.dump() << "\n";
            } else {
                const std::string text = store.str(g);
                if (text.size() <= 200) out << "game: " << text << "\n";
                out << "ls=" << store.ls(g) << " rs=" << store.rs(g) << "\n"
                    << "sigma=" << tg.sigma << " mast=" << tg.mast << "\n"
                    << "ls(t): " << thermo::to_string(tg.ls) << "\n"
                    << "rs(t): " << thermo::to_string(tg.rs) << "\n";
            }
            return kOk;
        }

        if (*equiv) {
            cgt::GameStore store({st.tree_limit});
            cgt::Game a, b;
            if (sums.size() == 2 && game_a.empty() && game_b.empty()) {
                auto from_sum = [&](const std::string& text) {
                    auto s = segments::parse_parts(text);
                    if (s.parts.empty()) return store.number(s.offset);
                    return store.from_position(Position(segments::to_graph(s), segments::to_graph(s)->all(), 0));
                };
                a = from_sum(sums[0]);
                b = from_sum(sums[1]);
            } else if (sums.empty() && !game_a.empty() && !game_b.empty()) {
                a = store.parse(game_a);
                b = store.parse(game_b);
            } else {
                throw InputError("give two --sum values or both --game-a and --game-b");
            }
            a = store.sum(a, store.number(offset_a));
            b = store.sum(b, store.number(offset_b));
            const bool eq = store.equivalent(a, b, !no_audit);
            const cgt::Game d = store.sum(a, store.negate(b));
            if (as_json) {
                out << json{{"equivalent", eq}, {"ls_difference", store.ls(d).str()},
                            {"rs_difference", store.rs(d).str()}}
                           .dump()
                    << "\n";
            } else {
                out << "equivalent=" << (eq ? "true" : "false") << "\n"
                    << "ls(A-B)=" << store.ls(d) << " rs(A-B)=" << store.rs(d) << "\n";
            }
            return kOk;
        }

        if (*sym) {
            GraphPtr g = sym_src.build();
            symmetry::DrawOptions d;
            d.budget = st.bw_budget;
            d.solver = sopts;
            if (no_solve) d.solve_limit = d.mirror_limit = -1;
            const auto r = symmetry::certify_draw(*g, d);
            if (as_json) {
                out << symmetry::report_json(*g, r) << "\n";
            } else {
                auto yn = [](bool b) { return b ? "yes" : "no"; };
                out << "graph: " << graph_title(*g) << "\n"
                    << "status=" << symmetry::to_string(r.search.status) << " search_nodes=" << r.search.nodes << "\n";
                if (r.search.mapping) out << "mapping=" << symmetry::mapping_json(*r.search.mapping) << "\n";
                if (r.check)
                    out << "bijection=" << yn(r.check->bijection) << " automorphism=" << yn(r.check->automorphism)
                        << " involution=" << yn(r.check->involution) << " color_swap=" << yn(r.check->color_swap)
                        << " distance_at_least_3=" << yn(r.check->distance) << "\n";
                if (r.scores) out << "ls=" << r.scores->ls << " rs=" << r.scores->rs << "\n";
                if (r.mirror)
                    out << "mirror=" << (r.mirror->ok ? "ok" : "failed: " + r.mirror->detail)
                        << " positions=" << r.mirror->lines << "\n";
                out << "certified=" << (r.certified() ? "true" : "false") << "\n";
            }
            if (r.search.status == symmetry::SearchStatus::BudgetExceeded) return kBudgetExhausted;
            if (r.search.status == symmetry::SearchStatus::Found && !r.certified()) return kViolation;
            return kOk;
        }

        if (*red) {
            const auto f = reduction::parse_pos_cnf(io::read_text_file(cnf_file));
            const auto gadget = reduction::reduce(f);
            GraphPtr g = red_shift ? reduction::shift_threshold(*gadget.graph, static_cast<int>(f.clauses.size()))
                                   : gadget.graph;
            if (!red_out.empty()) {
                std::ofstream o(red_out, std::ios::binary);
                if (!o) throw InputError("cannot write " + red_out);
                o << io::graph_json(*g) << "\n";
            }
            json j{{"variables", f.num_vars},         {"declared_variables", f.declared_vars},
                   {"clauses", f.clauses.size()},     {"bag_size", gadget.bag_size},
                   {"vertices", g->size()},           {"edges", g->edge_count()}};
            bool ok = true;
            if (red_check) {
                solver::Solver s(sopts);
                const auto rep = reduction::reduction_soundness_check(f, s);
                const bool twins = reduction::bags_are_twin_classes(gadget);
                j["alice_wins"] = rep.alice_wins;
                j["ls"] = rep.left_score;
                j["threshold"] = rep.threshold;
                j["sound"] = rep.holds();
                j["bags_are_twin_classes"] = twins;
                ok = rep.holds() && twins;
            }
            if (as_json) {
                out << j.dump() << "\n";
            } else if (red_out.empty() && !red_check) {
                out << io::graph_json(*g) << "\n";
            } else {
                out << "variables=" << f.num_vars << " clauses=" << f.clauses.size() << " bag_size=" << gadget.bag_size
                    << " vertices=" << g->size() << " edges=" << g->edge_count() << "\n";
                if (red_check)
                    out << "alice_wins=" << (j["alice_wins"].get<bool>() ? "true" : "false") << " ls=" << j["ls"]
                        << " threshold=" << j["threshold"] << " sound=" << (j["sound"].get<bool>() ? "yes" : "no")
                        << " bags_are_twin_classes=" << (j["bags_are_twin_classes"].get<bool>() ? "yes" : "no")
                        << "\n";
            }
            return ok ? kOk : kViolation;
        }

        if (*audit) {
            GraphPtr g = audit_src.build();
            solver::Solver s(sopts);
            const Position p(g);
            const auto rep = solver::milnor_audit(s, p, depth);
            json j{{"positions_checked", rep.positions_checked}, {"milnor_clean", rep.clean()}};
            if (rep.violation) j["violation"] = *rep.violation;
            bool ok = rep.clean();
            std::optional<solver::GiftReport> gifts;
            if (!black_gift.empty() || !white_gift.empty()) {
                gifts = solver::gift_bounds_check(s, p, parse_vertex_list(black_gift, *g),
                                                  parse_vertex_list(white_gift, *g));
                j["gifts"] = json::array();
                for (const auto& l : gifts->lines)
                    j["gifts"].push_back({{"inequality", l.inequality}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"holds", l.holds}});
                ok = ok && gifts->ok();
            }
            if (as_json) {
                out << j.dump() << "\n";
            } else {
                out << "graph: " << graph_title(*g) << "\n"
                    << "milnor audit: " << (rep.clean() ? "clean" : "violation: " + *rep.violation) << " ("
                    << rep.positions_checked << " positions, depth " << depth << ")\n";
                if (gifts)
                    for (const auto& l : gifts->lines)
                        out << l.inequality << ": " << l.lhs << " vs " << l.rhs << (l.holds ? " holds" : " FAILS")
                            << "\n";
            }
            return ok ? kOk : kViolation;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const BudgetExhausted& e) {
        err << "budget exhausted: " << e.what() << "\n";
        return kBudgetExhausted;
    } catch (const UniverseError& e) {
        err << "outside Milnor's universe: " << e.what() << "\n";
        return kViolation;
    }
    return kInputError;
}

} // namespace influence::cli
