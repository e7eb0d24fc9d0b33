#include "influence/thermo.hpp"

#include "influence/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace influence::thermo {

PLFunction PLFunction::linear(Rational a, Rational b) {
    PLFunction f;
    f.pieces_ = {{Rational(0), a, b}};
    return f;
}

PLFunction PLFunction::from_pieces(std::vector<Piece> pieces) {
    if (pieces.empty() || pieces.front().start != Rational(0)) throw InputError("piecewise function must start at 0");
    for (std::size_t i = 1; i < pieces.size(); ++i)
        if (!(pieces[i - 1].start < pieces[i].start)) throw InputError("piece starts must increase");
    PLFunction f;
    f.pieces_ = std::move(pieces);
    f.canonicalize();
    return f;
}

void PLFunction::canonicalize() {
    std::vector<Piece> out;
    for (const Piece& p : pieces_) {
        if (!out.empty() && out.back().a == p.a && out.back().b == p.b) continue;
        out.push_back(p);
    }
    pieces_ = std::move(out);
}

Rational PLFunction::operator()(const Rational& t) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](const Rational& x, const Piece& p) { return x < p.start; });
    const Piece& p = *std::prev(it);
    return p.a + p.b * t;
}

std::vector<Rational> PLFunction::breakpoints() const {
    std::vector<Rational> out;
    for (const Piece& p : pieces_) out.push_back(p.start);
    return out;
}

PLFunction PLFunction::plus_linear(const Rational& c, const Rational& d) const {
    PLFunction f = *this;
    for (Piece& p : f.pieces_) {
        p.a += c;
        p.b += d;
    }
    f.canonicalize();
    return f;
}

PLFunction PLFunction::operator-(const PLFunction& o) const {
    std::set<Rational> starts;
    for (const Piece& p : pieces_) starts.insert(p.start);
    for (const Piece& p : o.pieces_) starts.insert(p.start);
    PLFunction f;
    f.pieces_.clear();
    for (const Rational& s : starts) {
        auto line = [&](const PLFunction& g) {
            auto it = std::upper_bound(g.pieces_.begin(), g.pieces_.end(), s,
                                       [](const Rational& x, const Piece& p) { return x < p.start; });
            return *std::prev(it);
        };
        const Piece a = line(*this), b = line(o);
        f.pieces_.push_back({s, a.a - b.a, a.b - b.b});
    }
    f.canonicalize();
    return f;
}

PLFunction PLFunction::combine(const PLFunction& f, const PLFunction& g, bool take_max) {
    std::set<Rational> starts;
    for (const Piece& p : f.pieces_) starts.insert(p.start);
    for (const Piece& p : g.pieces_) starts.insert(p.start);
    const std::vector<Rational> cuts(starts.begin(), starts.end());
    auto line_at = [](const PLFunction& h, const Rational& s) {
        auto it = std::upper_bound(h.pieces_.begin(), h.pieces_.end(), s,
                                   [](const Rational& x, const Piece& p) { return x < p.start; });
        return *std::prev(it);
    };
    PLFunction out;
    out.pieces_.clear();
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const Rational s = cuts[i];
        const bool bounded = i + 1 < cuts.size();
        const Piece pf = line_at(f, s), pg = line_at(g, s);
        std::vector<Rational> sub{s};
        const Rational da = pf.a - pg.a, db = pf.b - pg.b;
        if (db != Rational(0)) {
            const Rational r = -da / db;
            if (s < r && (!bounded || r < cuts[i + 1])) sub.push_back(r);
        }
        for (std::size_t k = 0; k < sub.size(); ++k) {
            const Rational lo = sub[k];
            const Rational probe = k + 1 < sub.size() ? (lo + sub[k + 1]) / Rational(2)
                                   : bounded          ? (lo + cuts[i + 1]) / Rational(2)
                                                      : lo + Rational(1);
            const Rational vf = pf.a + pf.b * probe, vg = pg.a + pg.b * probe;
            const bool pick_f = take_max ? !(vf < vg) : !(vg < vf);
            const Piece& src = pick_f ? pf : pg;
            out.pieces_.push_back({lo, src.a, src.b});
        }
    }
    out.canonicalize();
    return out;
}

PLFunction PLFunction::max(const PLFunction& f, const PLFunction& g) { return combine(f, g, true); }
PLFunction PLFunction::min(const PLFunction& f, const PLFunction& g) { return combine(f, g, false); }

PLFunction PLFunction::clamped_after(const Rational& t0, const Rational& c) const {
    PLFunction f;
    f.pieces_.clear();
    for (const Piece& p : pieces_)
        if (p.start < t0) f.pieces_.push_back(p);
    f.pieces_.push_back({t0, c, Rational(0)});
    f.canonicalize();
    return f;
}

std::optional<Rational> PLFunction::least_root() const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Piece& p = pieces_[i];
        if (p.a + p.b * p.start == Rational(0)) return p.start;
        if (p.b == Rational(0)) continue;
        const Rational r = -p.a / p.b;
        if (p.start < r && (i + 1 == pieces_.size() || r < pieces_[i + 1].start)) return r;
    }
    return std::nullopt;
}

bool PLFunction::nonincreasing() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.b <= Rational(0); });
}

bool PLFunction::nondecreasing() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.b >= Rational(0); });
}

std::string to_string(const PLFunction& f) {
    std::ostringstream os;
    const auto& ps = f.pieces();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) os << "; ";
        os << "[" << ps[i].start << ", " << (i + 1 < ps.size() ? ps[i + 1].start.str() : std::string("inf")) << "): "
           << ps[i].a;
        if (ps[i].b != Rational(0)) os << (ps[i].b < Rational(0) ? " - " : " + ") << (ps[i].b < Rational(0) ? -ps[i].b : ps[i].b) << "t";
    }
    return os.str();
}

const Thermograph& Thermographer::node_graph(std::uint32_t node) {
    if (auto it = memo_.find(node); it != memo_.end()) return it->second;
    Thermograph tg;
    if (node == 0) {
        tg.ls = tg.rs = tg.ls_tilde = tg.rs_tilde = PLFunction::constant(Rational(0));
        return memo_.emplace(node, tg).first->second;
    }
    const cgt::Game self{node, Rational(0)};
    std::optional<PLFunction> lt, rt;
    for (const cgt::Game& o : store_.left_options(self)) {
        PLFunction f = node_graph(o.node).rs.plus_linear(o.shift, Rational(0));
        lt = lt ? PLFunction::max(*lt, f) : f;
    }
    for (const cgt::Game& o : store_.right_options(self)) {
        PLFunction f = node_graph(o.node).ls.plus_linear(o.shift, Rational(0));
        rt = rt ? PLFunction::min(*rt, f) : f;
    }
    tg.ls_tilde = lt->plus_linear(Rational(0), Rational(-1));
    tg.rs_tilde = rt->plus_linear(Rational(0), Rational(1));
    const PLFunction gap = tg.ls_tilde - tg.rs_tilde;
    if (gap(Rational(0)) < Rational(0))
        throw UniverseError("cannot cool a zugzwang game: " + store_.str(self));
    const auto root = gap.least_root();
    if (!root) throw UniverseError("taxed scores never meet for " + store_.str(self));
    tg.sigma = *root;
    tg.mast = tg.ls_tilde(tg.sigma);
    tg.ls = tg.ls_tilde.clamped_after(tg.sigma, tg.mast);
    tg.rs = tg.rs_tilde.clamped_after(tg.sigma, tg.mast);
    return memo_.emplace(node, std::move(tg)).first->second;
}

Thermograph Thermographer::thermograph(const cgt::Game& g) {
    std::lock_guard lock(mu_);
    Thermograph tg = node_graph(g.node);
    const Rational& s = g.shift;
    tg.ls = tg.ls.plus_linear(s, Rational(0));
    tg.rs = tg.rs.plus_linear(s, Rational(0));
    tg.ls_tilde = tg.ls_tilde.plus_linear(s, Rational(0));
    tg.rs_tilde = tg.rs_tilde.plus_linear(s, Rational(0));
    tg.mast += s;
    return tg;
}

std::pair<Rational, Rational> mean_by_repetition(cgt::GameStore& store, const cgt::Game& g, int n) {
    if (n < 1) throw InputError("repetition count must be positive");
    const cgt::Game ng = store.multiple(g, n);
    return {store.ls(ng) / Rational(n), store.rs(ng) / Rational(n)};
}

bool CheckReport::ok() const {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.holds; });
}

CheckReport cooled_score_bounds_check(Thermographer& th, const cgt::Game& g, const Rational& t) {
    if (t < Rational(0)) throw InputError("cooling parameter must be nonnegative");
    const Thermograph tg = th.thermograph(g);
    const Rational dl = tg.ls(Rational(0)) - tg.ls(t);
    const Rational dr = tg.rs(Rational(0)) - tg.rs(t);
    CheckReport r;
    r.add("0 <= Ls(G)-Ls(G_t) = " + dl.str(), Rational(0) <= dl);
    r.add("Ls(G)-Ls(G_t) = " + dl.str() + " <= t = " + t.str(), dl <= t);
    r.add("Rs(G)-Rs(G_t) = " + dr.str() + " <= 0", dr <= Rational(0));
    r.add("-t <= Rs(G)-Rs(G_t) = " + dr.str(), -t <= dr);
    return r;
}

namespace {

void sandwich(CheckReport& r, const Rational& m, const Rational& sigma, const Rational& ls, const Rational& rs,
              const std::string& name) {
    r.add("m-sigma <= Rs(" + name + ")", m - sigma <= rs);
    r.add("Rs(" + name + ") <= m", rs <= m);
    r.add("m <= Ls(" + name + ")", m <= ls);
    r.add("Ls(" + name + ") <= m+sigma", ls <= m + sigma);
}

} // namespace

CheckReport mean_sandwich_check(Thermographer& th, const cgt::Game& g) {
    const Thermograph tg = th.thermograph(g);
    CheckReport r;
    sandwich(r, tg.mast, tg.sigma, th.store().ls(g), th.store().rs(g), "G");
    return r;
}

CheckReport sum_temperature_check(Thermographer& th, const cgt::Game& g, const cgt::Game& h) {
    cgt::GameStore& store = th.store();
    const Thermograph tg = th.thermograph(g);
    const Thermograph thh = th.thermograph(h);
    const cgt::Game gh = store.sum(g, h);
    const Thermograph tgh = th.thermograph(gh);
    const Rational top = max(tg.sigma, thh.sigma);
    CheckReport r;
    r.add("sigma(G+H) = " + tgh.sigma.str() + " <= max(sigma(G), sigma(H)) = " + top.str(), tgh.sigma <= top);
    if (tg.sigma != thh.sigma) r.add("sigma(G+H) = max(sigma(G), sigma(H)) when they differ", tgh.sigma == top);
    const Rational m = tg.mast + thh.mast;
    r.add("m(G+H) = " + tgh.mast.str() + " equals m(G)+m(H) = " + m.str(), tgh.mast == m);
    sandwich(r, m, top, store.ls(gh), store.rs(gh), "G+H");
    return r;
}

namespace {

nlohmann::json pieces_json(const PLFunction& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : f.pieces()) arr.push_back({{"from", p.start.str()}, {"a", p.a.str()}, {"b", p.b.str()}});
    return arr;
}

} // namespace

std::string thermograph_json(const Thermograph& tg) {
    nlohmann::json j;
    j["sigma"] = tg.sigma.str();
    j["mast"] = tg.mast.str();
    j["ls"] = pieces_json(tg.ls);
    j["rs"] = pieces_json(tg.rs);
    j["ls_taxed"] = pieces_json(tg.ls_tilde);
    j["rs_taxed"] = pieces_json(tg.rs_tilde);
    return j.dump();
}

std::string thermograph_csv(const Thermograph& tg) {
    std::set<Rational> ts;
    for (const Rational& t : tg.ls.breakpoints()) ts.insert(t);
    for (const Rational& t : tg.rs.breakpoints()) ts.insert(t);
    ts.insert(tg.sigma);
    ts.insert(tg.sigma + Rational(1));
    std::string out = "t,ls,rs\n";
    for (const Rational& t : ts) out += t.str() + "," + tg.ls(t).str() + "," + tg.rs(t).str() + "\n";
    return out;
}

} // namespace influence::thermo
