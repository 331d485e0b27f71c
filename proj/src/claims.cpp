#include "nlk/claims.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "nlk/conslaw.hpp"
#include "nlk/linalg.hpp"
#include "nlk/potential.hpp"
#include "nlk/reduction.hpp"

namespace nlk {

const char* toolkit_version() { return "0.1.0"; }

std::string expr_hash(const Expr& e) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : render(e)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------- binder

Binder::Binder(const std::map<std::string, std::string>& params, const ParseContext& ctx) {
    for (auto& [k, v] : params) {
        Expr key = parse(k, ctx), val = parse(v, ctx);
        if (key.kind() == Kind::Sym) {
            syms_.emplace(key, val);
        } else if (key.kind() == Kind::Func) {
            for (auto& a : key.args())
                if (a.kind() != Kind::Sym) throw std::invalid_argument("bound function needs symbol arguments: " + k);
            for (int o : key.orders())
                if (o != 0) throw std::invalid_argument("bind the function, not a derivative: " + k);
            funcs_.emplace_back(key, val);
        } else {
            throw std::invalid_argument("parameter name must be a symbol or a function of symbols: " + k);
        }
    }
}

Expr Binder::operator()(const Expr& e) const {
    if (empty()) return e;
    Expr r = e;
    if (!funcs_.empty()) {
        ExprMap fb;
        for (const Expr& a : atoms(r)) {
            if (a.kind() != Kind::Func) continue;
            for (auto& [f, body] : funcs_) {
                if (a.name() != f.name() || a.args() != f.args()) continue;
                Expr d = body;
                for (std::size_t k = 0; k < a.orders().size(); ++k)
                    for (int m = 0; m < a.orders()[k]; ++m) d = partial(d, f.args()[k]);
                fb.emplace(a, d);
            }
        }
        if (!fb.empty()) r = substitute(r, fb);
    }
    if (!syms_.empty()) r = substitute(r, syms_);
    return r;
}

// ---------------------------------------------------------------- documents

namespace doc {

namespace {
std::vector<std::string> strings(const json& j, const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    for (auto& s : j.at(key)) out.push_back(s.get<std::string>());
    return out;
}
Expr px(const json& j, const Binder& b, const ParseContext& ctx) { return b(parse(j.get<std::string>(), ctx)); }
}  // namespace

JetSpace space(const json& j) {
    JetSpace js;
    if (j.contains("indep")) js.indep = strings(j, "indep");
    if (j.contains("deps")) js.deps = strings(j, "deps");
    return js;
}

PdeSystem system(const json& j, const Binder& b, const ParseContext& ctx) {
    PdeSystem s{space(j), {}};
    if (!j.contains("equations")) return s;
    for (auto& q : j.at("equations")) {
        Expr lhs = px(q.at("lhs"), b, ctx);
        Expr rhs = q.contains("rhs") ? px(q.at("rhs"), b, ctx) : Expr(0);
        if (q.contains("rhs_derivative"))
            for (auto& v : q.at("rhs_derivative")) rhs = total_derivative(rhs, v.get<std::string>(), s.js);
        Expr lead = parse(q.at("lead").get<std::string>(), ctx);
        s.eqs.push_back(make_equation(lhs, rhs, lead));
    }
    return s;
}

VectorField field(const json& j, const Binder& b, const ParseContext& ctx) {
    VectorField v;
    for (auto& [z, c] : j.items()) v.set(z, px(c, b, ctx));
    return v;
}

FluxVector flux(const json& j, const Binder& b, const ParseContext& ctx) {
    FluxVector C;
    C.order = strings(j, "order");
    for (auto& c : j.at("comps")) C.comps.push_back(px(c, b, ctx));
    if (C.comps.size() != C.order.size()) throw std::invalid_argument("flux needs one component per variable");
    if (j.contains("multiplier")) C.multiplier = px(j.at("multiplier"), b, ctx);
    return C;
}

PointTransform transform(const json& j, const Binder& b, const ParseContext& ctx) {
    PointTransform T;
    T.old_js = space(j.at("old"));
    T.new_js = space(j.at("new"));
    std::string cls = j.value("class", "pure-independent");
    T.cls = cls == "hodograph" ? TransformClass::Hodograph
            : cls == "similarity" ? TransformClass::Similarity
                                  : TransformClass::PureIndependent;
    for (auto& [k, v] : j.at("forward").items()) T.forward.emplace(sym(k), px(v, b, ctx));
    for (auto& [k, v] : j.at("inverse").items()) T.inverse.emplace(sym(k), px(v, b, ctx));
    for (auto& [n, f] : T.forward)
        if (!exact_zero(substitute(f, T.inverse) - n))
            throw std::invalid_argument("forward and inverse maps disagree on " + n.name());
    return T;
}

json to_json(const VectorField& v) {
    json j = json::object();
    for (auto& [z, c] : v.coeffs()) j[z] = render(c);
    return j;
}

json to_json(const PdeSystem& s) {
    json j;
    j["indep"] = s.js.indep;
    j["deps"] = s.js.deps;
    j["equations"] = json::array();
    for (auto& q : s.eqs)
        j["equations"].push_back({{"lhs", render(q.lead)}, {"rhs", render(q.solved)}, {"lead", render(q.lead)}});
    return j;
}

json to_json(const FluxVector& c) {
    json j;
    j["order"] = c.order;
    j["comps"] = json::array();
    for (auto& e : c.comps) j["comps"].push_back(render(e));
    if (c.multiplier) j["multiplier"] = render(*c.multiplier);
    return j;
}

}  // namespace doc

// ---------------------------------------------------------------- loading

const std::vector<std::string>& claim_kinds() {
    static const std::vector<std::string> k = {
        "multiplier", "flux-identity", "rps-compatibility", "nonlocal-cl", "symmetry",
        "commutator", "chain", "canonical", "ips-hodograph", "association",
        "double-reduction", "solution", "cole-hopf", "heat-residual", "hidden-reduction"};
    return k;
}

const std::vector<std::string>& expected_verdicts() {
    static const std::vector<std::string> v = {"SymbolicZero", "NumericZero", "NonZero", "PaperMismatch"};
    return v;
}

namespace {

std::map<std::string, std::string> string_map(const json& j, const std::string& id, const char* field) {
    std::map<std::string, std::string> m;
    if (!j.contains(field)) return m;
    if (!j.at(field).is_object()) throw ClaimError(id, field, "must be an object of strings");
    for (auto& [k, v] : j.at(field).items()) {
        if (!v.is_string()) throw ClaimError(id, std::string(field) + "." + k, "must be a string");
        m.emplace(k, v.get<std::string>());
    }
    return m;
}

}  // namespace

ClaimSet parse_claims(const json& j) {
    ClaimSet set;
    if (!j.is_object()) throw ClaimError("", "(root)", "must be an object");
    if (!j.contains("version")) throw ClaimError("", "version", "missing");
    set.version = j.at("version").get<int>();
    if (set.version != 1) throw ClaimError("", "version", "unsupported version " + std::to_string(set.version));
    if (j.contains("definitions")) set.definitions = j.at("definitions");
    if (j.contains("census")) {
        for (auto& r : j.at("census")) {
            CensusRow row;
            if (!r.contains("bullet") || !r.at("bullet").is_string())
                throw ClaimError("", "census.bullet", "missing or not a string");
            row.bullet = r.at("bullet").get<std::string>();
            if (!r.contains("require") || !r.at("require").is_array() || r.at("require").empty())
                throw ClaimError("", "census.require", "row '" + row.bullet + "' needs a non-empty pattern list");
            for (auto& p : r.at("require")) row.require.push_back(p.get<std::string>());
            set.census.push_back(std::move(row));
        }
    }
    if (!j.contains("claims") || j.at("claims").empty()) {
        set.warnings.push_back("corpus contains no claims");
        return set;
    }
    std::set<std::string> ids;
    const auto& kinds = claim_kinds();
    const auto& verdicts = expected_verdicts();
    for (auto& cj : j.at("claims")) {
        Claim c;
        if (!cj.contains("id") || !cj.at("id").is_string()) throw ClaimError("", "id", "missing or not a string");
        c.id = cj.at("id").get<std::string>();
        if (!ids.insert(c.id).second) throw ClaimError(c.id, "id", "duplicate id");
        for (const char* f : {"kind", "anchor", "expect"})
            if (!cj.contains(f) || !cj.at(f).is_string()) throw ClaimError(c.id, f, "missing or not a string");
        c.kind = cj.at("kind").get<std::string>();
        c.anchor = cj.at("anchor").get<std::string>();
        c.expect = cj.at("expect").get<std::string>();
        if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
            throw ClaimError(c.id, "kind", "unknown kind '" + c.kind + "'");
        if (std::find(verdicts.begin(), verdicts.end(), c.expect) == verdicts.end())
            throw ClaimError(c.id, "expect", "unknown verdict '" + c.expect + "'");
        c.params = string_map(cj, c.id, "params");
        c.exprs = string_map(cj, c.id, "exprs");
        c.refs = string_map(cj, c.id, "refs");
        if (cj.contains("options")) c.options = cj.at("options");
        c.note = cj.value("note", "");
        for (auto& [role, text] : c.exprs) {
            try {
                parse(text);
            } catch (const ParseError& e) {
                throw ClaimError(c.id, "exprs." + role, e.what());
            }
        }
        for (auto& [name, text] : c.params) {
            try {
                parse(name);
                parse(text);
            } catch (const ParseError& e) {
                throw ClaimError(c.id, "params." + name, e.what());
            }
        }
        set.claims.push_back(std::move(c));
    }
    return set;
}

ClaimSet load_claims(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ClaimError("", "(file)", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str().find_first_not_of(" \t\r\n") == std::string::npos) {
        ClaimSet set;
        set.warnings.push_back("empty claims file " + path);
        return set;
    }
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ClaimError("", "(file)", e.what());
    }
    return parse_claims(j);
}

// ---------------------------------------------------------------- evaluation

namespace {

struct Outcome {
    ZeroStatus status = ZeroStatus::Unknown;
    std::optional<ZeroStatus> oracle;
    std::string detail;
    Expr residual;
    double max_numeric = 0.0;
};

// Collects named sub-checks into one verdict.
struct Checks {
    std::vector<ZeroVerdict> vs;
    std::vector<std::string> notes;
    Expr residual;

    void add(const std::string& name, const ZeroVerdict& v, const Expr& r = Expr(0)) {
        vs.push_back(v);
        notes.push_back(name + ": " + to_string(v.status));
        if (!v.ok() && residual.is_zero()) residual = r;
    }
    void add(const std::string& name, ZeroStatus s, const Expr& r = Expr(0)) {
        ZeroVerdict v;
        v.status = s;
        add(name, v, r);
    }
    void note(const std::string& s) { notes.push_back(s); }
    Outcome done() const {
        ZeroVerdict c = combine(vs);
        Outcome o;
        o.status = c.status;
        o.max_numeric = c.max_abs;
        o.residual = residual;
        for (std::size_t i = 0; i < notes.size(); ++i) o.detail += (i ? "; " : "") + notes[i];
        return o;
    }
};

std::string short_render(const Expr& e, std::size_t limit = 240) {
    std::string s = render(e, RenderStyle::Compact);
    if (s.size() > limit) s = s.substr(0, limit) + "...";
    return s;
}

struct Ctx {
    const ClaimSet& set;
    const Claim& c;
    const RunOptions& ro;
    ZeroOptions zo;
    ParseContext pc;
    Binder B;

    Ctx(const ClaimSet& s, const Claim& cl, const RunOptions& r) : set(s), c(cl), ro(r) {
        zo.mode = r.mode;
        zo.seed = r.seed;
        zo.samples = r.samples;
        zo.tol = r.tol;
        if (c.options.contains("opaque"))
            for (auto& n : c.options.at("opaque")) pc.opaque.insert(n.get<std::string>());
        if (c.options.contains("mode")) zo.mode = parse_mode(c.options.at("mode").get<std::string>());
        if (c.options.contains("box"))
            for (auto& [k, v] : c.options.at("box").items()) zo.box[k] = {v.at(0).get<double>(), v.at(1).get<double>()};
        B = Binder(c.params, pc);
    }

    const json& opt(const std::string& k) const {
        if (!c.options.contains(k)) throw ClaimError(c.id, "options." + k, "missing");
        return c.options.at(k);
    }
    bool has_opt(const std::string& k) const { return c.options.contains(k); }
    std::string sopt(const std::string& k, const std::string& def) const {
        return c.options.contains(k) ? c.options.at(k).get<std::string>() : def;
    }
    bool has(const std::string& role) const { return c.exprs.count(role) > 0; }
    Expr ex(const std::string& role) const {
        auto it = c.exprs.find(role);
        if (it == c.exprs.end()) throw ClaimError(c.id, "exprs." + role, "missing");
        return B(parse(it->second, pc));
    }
    Expr in_context(const std::string& text) const { return B(parse(text, pc)); }
    // Entries "prefix.<key>" in key order.
    std::vector<std::pair<std::string, Expr>> prefixed(const std::string& prefix) const {
        std::vector<std::pair<std::string, Expr>> out;
        for (auto& [role, text] : c.exprs)
            if (role.rfind(prefix + ".", 0) == 0) out.emplace_back(role.substr(prefix.size() + 1), B(parse(text, pc)));
        std::stable_sort(out.begin(), out.end(), [](auto& a, auto& b) {
            bool na = !a.first.empty() && std::all_of(a.first.begin(), a.first.end(), ::isdigit);
            bool nb = !b.first.empty() && std::all_of(b.first.begin(), b.first.end(), ::isdigit);
            if (na && nb) return std::stoi(a.first) < std::stoi(b.first);
            return a.first < b.first;
        });
        return out;
    }
    bool has_ref(const std::string& role) const { return c.refs.count(role) > 0; }
    std::string ref(const std::string& role) const {
        auto it = c.refs.find(role);
        if (it == c.refs.end()) throw ClaimError(c.id, "refs." + role, "missing");
        return it->second;
    }
    const json& def(const std::string& group, const std::string& name) const {
        if (!set.definitions.contains(group) || !set.definitions.at(group).contains(name))
            throw ClaimError(c.id, "refs", "no " + group + " definition named '" + name + "'");
        return set.definitions.at(group).at(name);
    }
    PdeSystem system_named(const std::string& name) const { return doc::system(def("systems", name), B, pc); }
    PdeSystem system(const std::string& role = "system") const { return system_named(ref(role)); }
    VectorField field(const std::string& name) const {
        const json& j = def("fields", name);
        if (j.contains("combo")) {
            VectorField v;
            for (auto& [k, w] : j.at("combo").items()) v = v + field(k).scaled(in_context(w.get<std::string>()));
            return v;
        }
        return doc::field(j, B, pc);
    }
    VectorField field_doc(const json& j) const { return doc::field(j, B, pc); }
    FluxVector flux(const std::string& role = "flux") const { return doc::flux(def("fluxes", ref(role)), B, pc); }
    PointTransform transform(const std::string& role = "transform") const {
        return doc::transform(def("transforms", ref(role)), B, pc);
    }
    JetSpace space() const {
        if (has_ref("system")) return system().js;
        if (has_opt("space")) return doc::space(opt("space"));
        return JetSpace{};
    }
    Expr P() const {
        if (has("P")) return ex("P");
        return system().eqs.at(0).residual();
    }
    std::vector<std::string> strings(const std::string& k) const {
        std::vector<std::string> out;
        for (auto& s : opt(k)) out.push_back(s.get<std::string>());
        return out;
    }
    std::array<std::string, 3> roles() const {
        auto r = strings("roles");
        if (r.size() != 3) throw ClaimError(c.id, "options.roles", "three coordinate roles required");
        return {r[0], r[1], r[2]};
    }
    ZeroVerdict zero(const Expr& e) const { return is_zero(e, zo); }
};

ZeroVerdict field_zero(const VectorField& v, const ZeroOptions& zo) {
    std::vector<ZeroVerdict> vs;
    for (auto& [z, c] : v.coeffs()) vs.push_back(is_zero(c, zo));
    return combine(vs);
}

ZeroVerdict status_verdict(ZeroStatus s) {
    ZeroVerdict v;
    v.status = s;
    return v;
}

// Same span over constants (parameters allowed) for two lists of expressions.
bool same_span(const std::vector<Expr>& a, const std::vector<Expr>& b, const std::set<std::string>& space) {
    auto wrap = [](const Expr& e) { return VectorField({{"m", e}}); };
    auto in_span = [&](const std::vector<Expr>& xs, const std::vector<Expr>& basis) {
        std::vector<VectorField> bv;
        for (auto& e : basis) bv.push_back(wrap(e));
        for (auto& e : xs)
            if (!span_coefficients(wrap(e), bv, space)) return false;
        return true;
    };
    auto rank = [&](const std::vector<Expr>& xs) {
        Matrix m;
        std::vector<VectorField> bv;
        auto isv = depends_on_any(space);
        std::map<Expr, std::size_t, ExprLess> rows;
        for (std::size_t k = 0; k < xs.size(); ++k)
            for (auto& [mono, c] : split_coefficients(xs[k], isv)) {
                auto it = rows.find(mono);
                if (it == rows.end()) {
                    it = rows.emplace(mono, m.size()).first;
                    m.emplace_back(xs.size(), Expr(0));
                }
                m[it->second][k] = m[it->second][k] + c;
            }
        return rref(m, xs.size()).size();
    };
    return rank(a) == rank(b) && in_span(a, b) && in_span(b, a);
}

// --- kinds

Outcome eval_multiplier(const Ctx& x) {
    Checks ck;
    JetSpace js = x.space();
    Expr P = x.P();
    if (x.has("multiplier")) {
        Expr m = x.ex("multiplier");
        auto rs = multiplier_residuals(P, m, js);
        Expr r = rs.empty() ? Expr(0) : rs[0];
        ck.add("E_u(multiplier*P)", verify_multiplier(P, m, js, x.zo), r);
        if (x.has_opt("homotopy") && x.opt("homotopy").get<bool>()) {
            HomotopyResult h = homotopy_flux(m * P, js);
            std::string comps;
            for (std::size_t k = 0; k < h.flux.order.size(); ++k)
                comps += (k ? "; C^" : "C^") + h.flux.order[k] + " = " + short_render(h.flux.comps[k], 160);
            ck.note(comps);
            ck.add("Div(homotopy flux) - multiplier*P", x.zero(h.residual), h.residual);
        }
    }
    auto cands = x.prefixed("candidate");
    if (!cands.empty()) {
        MultiplierAnsatz a;
        for (auto& [k, e] : cands) a.basis.push_back(e);
        std::vector<Expr> found = multiplier_search(P, a, js);
        std::vector<Expr> want;
        for (auto& [k, e] : x.prefixed("span")) want.push_back(e);
        std::set<std::string> space(js.indep.begin(), js.indep.end());
        for (auto& d : js.deps) space.insert(d);
        std::string list;
        for (auto& f : found) list += (list.empty() ? "" : ", ") + short_render(f, 80);
        ck.note("found span {" + list + "}");
        ck.add("span", same_span(found, want, space) ? ZeroStatus::SymbolicZero : ZeroStatus::NonZero);
    }
    return ck.done();
}

Outcome eval_flux(const Ctx& x) {
    Checks ck;
    JetSpace js = x.space();
    FluxVector C = x.flux();
    if (x.has("multiplier")) C.multiplier = x.ex("multiplier");
    Expr r = flux_residual(x.P(), C, js);
    if (x.has_ref("modulo")) r = reduce_on_solutions(r, x.system("modulo"));
    ck.add("Div C - multiplier*P", x.zero(r), r);
    return ck.done();
}

// a - b, allowing a difference that vanishes under D_var when formal integrals are involved.
ZeroVerdict compare_rhs(const Expr& a, const Expr& b, const std::string& var, const JetSpace& js,
                        const ZeroOptions& zo, std::string& how) {
    Expr d = a - b;
    ZeroVerdict v = is_zero(d, zo);
    how = "exact";
    if (v.ok()) return v;
    bool ints = false;
    for (const Expr& at : atoms(d))
        if (at.kind() == Kind::Int) ints = true;
    if (!ints) return v;
    how = "up to a " + var + "-free term";
    return is_zero(total_derivative(d, var, js), zo);
}

Outcome eval_rps(const Ctx& x) {
    Checks ck;
    JetSpace js = x.space();
    FluxVector C = x.flux();
    Expr P = x.P();
    Expr mult = x.has("multiplier") ? x.ex("multiplier") : C.multiplier ? *C.multiplier : Expr(1);
    auto roles = x.roles();
    std::string mode = x.sopt("construction", "rps");
    std::vector<Equation> eqs;
    JetSpace pjs;
    Expr compat;
    if (mode == "gauge") {
        GaugeSystem g = gauge_system(C, roles, x.opt("w1").get<std::string>(), x.opt("w2").get<std::string>(), js);
        eqs = g.eqs;
        pjs = g.js;
        compat = g.compat_residual - mult * P;
    } else {
        int orient = x.has_opt("orientation") ? x.opt("orientation").get<int>() : -1;
        PotentialSystem ps;
        try {
            ps = build_rps(P, C, mult, roles, x.opt("potential").get<std::string>(), js, orient, x.zo);
        } catch (const std::invalid_argument& e) {
            ck.add(std::string("refused: ") + e.what(), ZeroStatus::NonZero);
            return ck.done();
        }
        for (auto& [k, e] : x.prefixed("perturb")) {
            auto& q = ps.eqs.at(static_cast<std::size_t>(std::stoi(k)));
            q.solved = q.solved + e;
            q.rhs = q.rhs + e;
            ck.note("perturbed equation " + k);
        }
        eqs = ps.eqs;
        pjs = ps.js;
        compat = compatibility_residual(ps);
    }
    if (x.has_ref("modulo")) compat = reduce_on_solutions(compat, x.system("modulo"));
    ck.add("compatibility", x.zero(compat), compat);
    std::string lines;
    for (auto& q : eqs) lines += (lines.empty() ? "" : " ; ") + short_render(q.lead) + " = " + short_render(q.solved, 160);
    ck.note("system " + lines);
    for (auto& [k, e] : x.prefixed("printed")) {
        auto& q = eqs.at(static_cast<std::size_t>(std::stoi(k)));
        std::string how;
        ZeroVerdict v = compare_rhs(q.solved, e, roles[1], pjs, x.zo, how);
        ck.add("equation " + k + " vs printed (" + how + ")", v, q.solved - e);
    }
    return ck.done();
}

Outcome eval_nonlocal(const Ctx& x) {
    Checks ck;
    PdeSystem base = x.system();
    FluxVector C = x.flux();
    std::vector<Expr> mults;
    for (auto& [k, e] : x.prefixed("multiplier")) mults.push_back(e);
    NonlocalExtension ext;
    try {
        ext = extend_nonlocal(base, x.strings("potentials"), C, mults, x.roles(), x.opt("w1").get<std::string>(),
                              x.opt("w2").get<std::string>());
    } catch (const std::invalid_argument& e) {
        ck.add(std::string("refused: ") + e.what(), ZeroStatus::NonZero);
        return ck.done();
    }
    std::string check = x.sopt("check", "onshell");
    if (check == "onshell") {
        ck.add("on-shell Div", x.zero(ext.onshell_residual), ext.onshell_residual);
        ck.note("residual " + short_render(ext.onshell_residual));
    } else if (check == "compat") {
        Expr r = ext.ext.compat_residual - divergence(C, ext.ext.js);
        ck.add("extension compatibility - Div", x.zero(r), r);
        std::string lines;
        for (auto& q : ext.ext.eqs)
            lines += (lines.empty() ? "" : " ; ") + short_render(q.lead) + " = " + short_render(q.solved, 160);
        ck.note("system " + lines);
    } else if (check == "multiple-of") {
        Expr f = x.ex("factor");
        std::set<std::string> vars(ext.ext.js.indep.begin(), ext.ext.js.indep.end());
        for (auto& d : ext.ext.js.deps) vars.insert(d);
        Expr r = ext.onshell_residual;
        ck.note("residual " + short_render(r));
        bool ok;
        if (f.kind() == Kind::Sym) {
            // a parameter factor: the residual vanishes with it and not otherwise
            ok = !exact_zero(r) && exact_zero(substitute(r, {{f, Expr(0)}}));
        } else {
            auto k = proportional(r, f, depends_on_any(vars));
            ok = k && !exact_zero(*k);
        }
        ck.add("nonzero constant multiple of " + render(f), ok ? ZeroStatus::SymbolicZero : ZeroStatus::NonZero, r);
    } else if (check == "multiplier") {
        ck.add("Div - sum multiplier*equation", x.zero(ext.multiplier_residual), ext.multiplier_residual);
    } else {
        throw ClaimError(x.c.id, "options.check", "unknown check " + check);
    }
    return ck.done();
}

Outcome eval_symmetry(const Ctx& x) {
    Checks ck;
    PdeSystem sys = x.system();
    VectorField v = x.field(x.ref("field"));
    auto rs = symmetry_residuals(v, sys);
    for (std::size_t k = 0; k < rs.size(); ++k) ck.add("equation " + std::to_string(k), x.zero(rs[k]), rs[k]);
    return ck.done();
}

VectorField prefixed_field(const Ctx& x, const std::string& prefix) {
    VectorField v;
    for (auto& [z, e] : x.prefixed(prefix)) v.set(z, e);
    return v;
}

Outcome eval_commutator(const Ctx& x) {
    Checks ck;
    auto names = x.strings("fields");
    if (names.size() != 2) throw ClaimError(x.c.id, "options.fields", "two fields required");
    VectorField br = commutator(x.field(names[0]), x.field(names[1]));
    ck.note("[" + names[0] + "," + names[1] + "] = " + render(br, RenderStyle::Compact));
    VectorField d = br - prefixed_field(x, "printed");
    ck.add("vs printed", field_zero(d, x.zo));
    Outcome o = ck.done();
    if (x.prefixed("oracle").size() > 0 || x.has_opt("oracle_zero")) {
        VectorField od = br - prefixed_field(x, "oracle");
        o.oracle = field_zero(od, x.zo).status;
    }
    return o;
}

Outcome eval_chain(const Ctx& x) {
    Checks ck;
    std::vector<VectorField> fs;
    auto names = x.strings("fields");
    for (auto& n : names) fs.push_back(x.field(n));
    ChainResult r = validate_chain(fs);
    if (r.valid) {
        ck.add("chain valid", ZeroStatus::SymbolicZero);
        return ck.done();
    }
    auto [i, j] = *r.witness;
    ck.note("witness [" + names[i - 1] + "," + names[j - 1] + "] not in the span of its prefix");
    ck.add("chain", ZeroStatus::NonZero);
    Outcome o = ck.done();
    if (x.has_opt("witness")) {
        auto w = x.opt("witness");
        bool match = w.at(0).get<std::size_t>() == i && w.at(1).get<std::size_t>() == j;
        o.oracle = match ? ZeroStatus::SymbolicZero : ZeroStatus::NonZero;
    }
    return o;
}

Outcome eval_canonical(const Ctx& x) {
    Checks ck;
    CanonicalCoords cc;
    for (auto& [k, e] : x.prefixed("chi")) cc.chi.push_back(e);
    for (auto& [k, e] : x.prefixed("mu")) cc.mu.push_back(e);
    cc.M = x.ex("M");
    ck.add("canonical coordinates", canonical_check(x.field(x.ref("field")), cc, x.zo));
    return ck.done();
}

Outcome eval_ips(const Ctx& x) {
    Checks ck;
    PdeSystem base = x.system();
    const json& cj = x.opt("chart");
    HodographChart ch;
    for (auto& s : cj.at("chi")) ch.chi.push_back(s.get<std::string>());
    ch.w = cj.at("w").get<std::string>();
    ch.M = cj.at("M").get<std::string>();
    for (auto& [k, v] : cj.at("coords").items()) ch.coords.emplace(sym(k), x.in_context(v.get<std::string>()));
    if (cj.contains("theta"))
        for (std::size_t i = 0; i < 3; ++i) ch.theta[i] = cj.at("theta").at(i).get<std::string>();
    std::optional<Expr> lead;
    if (x.has_opt("lead")) lead = parse(x.opt("lead").get<std::string>());
    IpsResult res;
    try {
        res = build_ips_hodograph(base.eqs.at(0).residual(), base.js, x.field(x.ref("field")), ch, lead, x.zo);
    } catch (const Unsupported& e) {
        ck.add(std::string("unsupported: ") + e.what(), ZeroStatus::NonZero);
        return ck.done();
    }
    ck.note("cleared M_w power " + std::to_string(res.cleared_power));
    ck.note("main " + short_render(res.main, 400));
    ck.add("built", ZeroStatus::SymbolicZero);
    if (x.has("transformed")) {
        Expr d = res.transformed - x.ex("transformed");
        ck.add("transformed vs printed", x.zero(d), d);
    }
    if (x.has("main")) {
        Expr d = res.main - x.ex("main");
        ck.add("main vs printed", x.zero(d), d);
    }
    if (x.c.options.value("curl_gradient", false)) {
        const std::array<std::string, 3> vars{ch.chi[0], ch.chi[1], ch.w};
        std::vector<Expr> rs;
        for (std::size_t k = 0; k < 3; ++k) {
            Expr r = res.ips.eqs[k].residual();
            ExprMap bind;
            for (std::size_t i = 0; i < 3; ++i)
                for (const Expr& a : jet_atoms(r, ch.theta[i])) {
                    MultiIndex idx = jet_index(a);
                    idx.emplace_back(vars[i], 1);
                    bind.emplace(a, jet(ch.M, canonical_index(idx)));
                }
            rs.push_back(substitute(r, bind));
        }
        std::vector<ZeroVerdict> vs;
        for (auto& r : rs) vs.push_back(x.zero(r));
        ck.add("curl of gradient", combine(vs));
    }
    return ck.done();
}

Outcome eval_association(const Ctx& x) {
    Checks ck;
    JetSpace js = x.space();
    PdeSystem sys{js, {}};
    if (x.c.options.value("onshell", false)) sys = x.system();
    AssociationResult a = association_check(x.field(x.ref("field")), x.flux(), sys, x.zo);
    for (std::size_t k = 0; k < a.residuals.size(); ++k)
        ck.add("component " + std::to_string(k), x.zero(a.residuals[k]), a.residuals[k]);
    return ck.done();
}

Outcome eval_double(const Ctx& x) {
    Checks ck;
    PointTransform T = x.transform();
    std::string tr = x.sopt("translation", "Q");
    std::vector<std::string> checks;
    for (auto& s : x.opt("checks")) checks.push_back(s.get<std::string>());
    auto want = [&](const std::string& s) { return std::find(checks.begin(), checks.end(), s) != checks.end(); };
    if (want("jacobian")) {
        JacobianData J = jacobian(T);
        Expr dy = J.Y - substitute(x.ex("Y"), T.inverse);
        ck.add("Y", x.zero(dy), dy);
        for (std::size_t j = 0; j < T.new_js.indep.size(); ++j)
            for (std::size_t i = 0; i < T.old_js.indep.size(); ++i) {
                std::string role = "KinvT." + T.new_js.indep[j] + "." + T.old_js.indep[i];
                if (!x.has(role)) continue;
                Expr d = J.Kinv[i][j] - substitute(x.ex(role), T.inverse);
                ck.add(role, x.zero(d), d);
            }
    }
    FluxVector C = x.flux();
    DoubleReduction d;
    try {
        d = double_reduce(C, T, tr);
    } catch (const NonInvariant& e) {
        ck.add(std::string("non-invariant: ") + e.what(), ZeroStatus::NonZero);
        return ck.done();
    }
    if (want("identity")) ck.add("Y*Div C - Div' C~", x.zero(d.full.identity_residual), d.full.identity_residual);
    for (std::size_t k = 0; k < d.full.flux.order.size(); ++k)
        if (d.full.flux.order[k] != tr)
            ck.note("C^" + d.full.flux.order[k] + " = " + short_render(d.reduced[k], 300));
    if (want("printed")) {
        for (std::size_t k = 0; k < d.full.flux.order.size(); ++k) {
            const std::string& v = d.full.flux.order[k];
            if (!x.has("printed." + v)) continue;
            Expr diff = d.reduced[k] - x.ex("printed." + v);
            ZeroVerdict zv = x.zero(diff);
            std::size_t bad = zv.ok() ? 0 : terms_of(clear_denominators(diff)).size();
            ck.add("C^" + v + " vs printed (" + std::to_string(bad) + " mismatched terms)", zv, diff);
        }
    }
    Expr div = reduced_divergence(d);
    if (want("offshell")) ck.add("reduced divergence off-shell", x.zero(div), div);
    if (want("onshell")) {
        PdeSystem pot = x.system("reduced");
        if (pot.eqs.size() != 2) throw ClaimError(x.c.id, "refs.reduced", "two potential equations required");
        auto var = [](const Equation& q) { return q.lead.index().at(0).first; };
        Expr integ = total_derivative(pot.eqs[0].solved, var(pot.eqs[1]), pot.js) -
                     total_derivative(pot.eqs[1].solved, var(pot.eqs[0]), pot.js);
        PdeSystem red{d.reduced_js, {make_equation(integ, Expr(0), parse(x.opt("integrability_lead").get<std::string>()))}};
        Expr r = reduce_on_solutions(div, red);
        ck.add("reduced divergence on-shell", x.zero(r), r);
    }
    return ck.done();
}

Solution solution_of(const Ctx& x) {
    Solution sol;
    for (auto& [dep, e] : x.prefixed("sol")) sol.emplace(dep, e);
    return sol;
}

GridSpec grid_spec(const Ctx& x) {
    GridSpec g;
    g.points = x.ro.grid_points;
    g.seed = x.ro.seed;
    g.tol = x.ro.tol;
    g.box = {{"t", {1.0, 2.0}}};
    const json& o = x.opt("grid");
    if (o.is_object()) {
        if (o.contains("box"))
            for (auto& [k, v] : o.at("box").items()) g.box[k] = {v.at(0).get<double>(), v.at(1).get<double>()};
        if (o.contains("guard")) g.guard = o.at("guard").get<double>();
    }
    return g;
}

Outcome eval_solution(const Ctx& x) {
    Checks ck;
    PdeSystem sys = x.system();
    Solution sol = solution_of(x);
    if (x.has_opt("grid")) {
        GridResult g = grid_residual(sys, sol, grid_spec(x));
        ZeroVerdict v = status_verdict(g.status);
        v.max_abs = g.max_abs;
        ck.add("grid max " + std::to_string(g.max_abs) + " over " + std::to_string(g.accepted) + " points", v);
        return ck.done();
    }
    SolutionCheck s = verify_solution(sys, sol, x.zo);
    for (std::size_t k = 0; k < s.residuals.size(); ++k)
        ck.add("equation " + std::to_string(k), x.zero(s.residuals[k]), s.residuals[k]);
    return ck.done();
}

ColeHopfPair pair_of(const Ctx& x) {
    ColeHopfPair p;
    p.nu = x.ex("nu");
    if (x.has_opt("space")) {
        auto s = x.strings("space");
        p.space = {s.at(0), s.at(1)};
    }
    return p;
}

Outcome eval_cole_hopf(const Ctx& x) {
    Checks ck;
    ColeHopfPair p = pair_of(x);
    std::string dir = x.sopt("direction", "forward");
    if (dir == "forward") {
        auto mu = cole_hopf_forward(x.ex("f"), p);
        for (int k = 0; k < 2; ++k) {
            ck.note("mu" + std::to_string(k + 1) + " = " + short_render(mu[k]));
            std::string role = "mu." + std::to_string(k + 1);
            if (x.has(role)) {
                Expr d = mu[k] - x.ex(role);
                ck.add(role, x.zero(d), d);
            }
        }
        if (x.has_ref("system")) {
            PdeSystem sys = x.system();
            Solution sol{{sys.js.deps.at(0), mu[0]}, {sys.js.deps.at(1), mu[1]}};
            if (x.has_opt("grid")) {
                GridResult g = grid_residual(sys, sol, grid_spec(x));
                ZeroVerdict v = status_verdict(g.status);
                v.max_abs = g.max_abs;
                ck.add("image on the system, grid max " + std::to_string(g.max_abs), v);
            } else {
                ck.add("image on the system", verify_solution(sys, sol, x.zo).verdict);
            }
        }
    } else if (dir == "inverse") {
        int comp = x.c.options.value("component", 0);
        ColeHopfInverse inv = cole_hopf_inverse(x.ex("mu"), x.ex("A"), p, comp, x.zo);
        ck.note("f = " + short_render(inv.f));
        ck.add("D A - mu", inv.antiderivative);
        if (inv.antiderivative.ok()) ck.add("forward(f) - mu", inv.round_trip);
    } else {
        throw ClaimError(x.c.id, "options.direction", "forward or inverse");
    }
    return ck.done();
}

Outcome eval_heat(const Ctx& x) {
    Checks ck;
    ColeHopfPair p = pair_of(x);
    Expr r = heat_residual(x.ex("f"), p);
    if (x.has_opt("grid")) {
        GridResult g = grid_residual(std::vector<Expr>{r}, grid_spec(x));
        ZeroVerdict v = status_verdict(g.status);
        v.max_abs = g.max_abs;
        ck.add("grid max " + std::to_string(g.max_abs), v, r);
    } else {
        ck.add("f_t - nu*(f_xx + f_yy)", x.zero(r), r);
    }
    return ck.done();
}

std::vector<std::pair<std::string, Expr>> ordered_pairs(const Ctx& x, const json& j) {
    std::vector<std::pair<std::string, Expr>> out;
    for (auto& e : j) out.emplace_back(e.at(0).get<std::string>(), x.in_context(e.at(1).get<std::string>()));
    return out;
}

ExprMap expr_map(const Ctx& x, const json& j) {
    ExprMap m;
    for (auto& [k, v] : j.items()) m.emplace(sym(k), x.in_context(v.get<std::string>()));
    return m;
}

Outcome eval_hidden(const Ctx& x) {
    std::string part = x.opt("part").get<std::string>();
    if (part == "symmetry") return eval_symmetry(x);
    if (part == "solution") return eval_solution(x);
    Checks ck;
    if (part == "reduce") {
        PdeSystem orig = x.system();
        const json& a = x.opt("ansatz");
        InvariantAnsatz an;
        an.old_js = orig.js;
        an.new_js = doc::space(a.at("new"));
        for (auto& [k, v] : a.at("indep").items()) an.indep.emplace(k, x.in_context(v.get<std::string>()));
        for (auto& [k, v] : a.at("dep").items()) an.dep.emplace(k, v.get<std::string>());
        an.inverse = expr_map(x, a.at("inverse"));
        std::set<std::string> vars(an.new_js.indep.begin(), an.new_js.indep.end());
        for (auto& d : an.new_js.deps) vars.insert(d);
        auto isv = depends_on_any(vars);
        auto printed = x.prefixed("printed");
        for (std::size_t k = 0; k < orig.eqs.size(); ++k) {
            Expr r;
            try {
                r = reduce_by_invariants(orig.eqs[k].residual(), an);
            } catch (const NonInvariant& e) {
                ck.add(std::string("non-invariant: ") + e.what(), ZeroStatus::NonZero);
                continue;
            }
            ck.note("reduced " + std::to_string(k) + ": " + short_render(r));
            if (k < printed.size()) {
                auto f = proportional(r, printed[k].second, isv);
                bool ok = f && !exact_zero(*f);
                ck.add("equation " + std::to_string(k) + " proportional to printed",
                       ok ? ZeroStatus::SymbolicZero : ZeroStatus::NonZero, r);
            }
        }
        return ck.done();
    }
    const json& pj = x.opt("projection");
    auto invariants = ordered_pairs(x, pj.at("invariants"));
    ExprMap inverse = expr_map(x, pj.at("inverse"));
    std::set<std::string> original;
    for (auto& s : pj.at("original")) original.insert(s.get<std::string>());
    if (part == "project") {
        Projection p = project_field(x.field(x.ref("field")), invariants, inverse, original);
        ck.note("projected " + render(p.field, RenderStyle::Compact));
        if (!p.expressible) {
            std::string left;
            for (auto& l : p.left) left += (left.empty() ? "" : ",") + l;
            ck.add("not expressible in the invariants (left: " + left + ")", ZeroStatus::NonZero);
            return ck.done();
        }
        ck.add("expressible", ZeroStatus::SymbolicZero);
        auto printed = x.prefixed("printed");
        if (!printed.empty()) {
            VectorField want;
            for (auto& [z, e] : printed) want.set(z, e);
            ck.add("vs printed", field_zero(p.field - want, x.zo));
        }
        return ck.done();
    }
    if (part == "inherit") {
        std::vector<VectorField> proj;
        std::vector<std::string> used;
        for (auto& n : x.strings("fields")) {
            Projection p = project_field(x.field(n), invariants, inverse, original);
            if (p.expressible) {
                proj.push_back(p.field);
                used.push_back(n);
            }
        }
        const json& fj = x.opt("family");
        FunctionFamily fam;
        fam.component = fj.at("component").get<std::string>();
        for (auto& a : fj.at("annihilators")) fam.annihilators.push_back(x.field_doc(a));
        std::set<std::string> space;
        for (auto& [n, e] : invariants) space.insert(n);
        Inheritance in = inheritance(x.field(x.ref("field")), proj, fam, space);
        if (!in.inherited) {
            ck.add("not in the projected span", ZeroStatus::NonZero);
            return ck.done();
        }
        std::string combo;
        for (std::size_t k = 0; k < used.size(); ++k)
            if (!exact_zero(in.coeffs[k])) combo += (combo.empty() ? "" : " + ") + short_render(in.coeffs[k]) + "*" + used[k];
        ck.note("inherited as " + (combo.empty() ? std::string("0") : combo) + " + family term " +
                short_render(in.remainder));
        ck.add("inherited", ZeroStatus::SymbolicZero);
        return ck.done();
    }
    throw ClaimError(x.c.id, "options.part", "unknown part " + part);
}

Outcome evaluate(const Ctx& x) {
    const std::string& k = x.c.kind;
    if (k == "multiplier") return eval_multiplier(x);
    if (k == "flux-identity") return eval_flux(x);
    if (k == "rps-compatibility") return eval_rps(x);
    if (k == "nonlocal-cl") return eval_nonlocal(x);
    if (k == "symmetry") return eval_symmetry(x);
    if (k == "commutator") return eval_commutator(x);
    if (k == "chain") return eval_chain(x);
    if (k == "canonical") return eval_canonical(x);
    if (k == "ips-hodograph") return eval_ips(x);
    if (k == "association") return eval_association(x);
    if (k == "double-reduction") return eval_double(x);
    if (k == "solution") return eval_solution(x);
    if (k == "cole-hopf") return eval_cole_hopf(x);
    if (k == "heat-residual") return eval_heat(x);
    if (k == "hidden-reduction") return eval_hidden(x);
    throw ClaimError(x.c.id, "kind", "unknown kind");
}

std::string outcome_of(const std::string& expect, const std::string& verdict, const std::string& oracle) {
    if (verdict == "Error") return "unexpected";
    if (verdict == "Unknown") return "unknown";
    bool zero = verdict == "SymbolicZero" || verdict == "NumericZero";
    bool oracle_ok = oracle.empty() || oracle == "SymbolicZero" || oracle == "NumericZero";
    if (!oracle_ok) return "unexpected";
    if (expect == "SymbolicZero") return verdict == "SymbolicZero" ? "met" : "unexpected";
    if (expect == "NumericZero") return zero ? "met" : "unexpected";
    if (expect == "NonZero" || expect == "PaperMismatch") return verdict == "NonZero" ? "met" : "unexpected";
    return "unexpected";
}

}  // namespace

ClaimResult run_claim(const ClaimSet& set, const Claim& c, const RunOptions& opt) {
    ClaimResult r;
    r.id = c.id;
    r.kind = c.kind;
    r.anchor = c.anchor;
    r.expect = c.expect;
    auto t0 = std::chrono::steady_clock::now();
    try {
        Ctx x(set, c, opt);
        Outcome o = evaluate(x);
        r.verdict = to_string(o.status);
        if (o.oracle) r.oracle = to_string(*o.oracle);
        r.detail = o.detail;
        r.residual_hash = expr_hash(o.residual);
        r.max_numeric = o.max_numeric;
    } catch (const std::exception& e) {
        r.verdict = "Error";
        r.detail = e.what();
        r.residual_hash = expr_hash(Expr(0));
    }
    r.outcome = outcome_of(r.expect, r.verdict, r.oracle);
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CensusResult> census(const ClaimSet& set) {
    std::vector<CensusResult> out;
    for (auto& row : set.census) {
        CensusResult r;
        r.bullet = row.bullet;
        std::set<std::string> hit;
        for (auto& c : set.claims) {
            bool any = false;
            for (auto& p : row.require)
                if (c.anchor.find(p) != std::string::npos) {
                    hit.insert(p);
                    any = true;
                }
            if (any) ++r.claims;
        }
        for (auto& p : row.require)
            if (!hit.count(p)) r.missing.push_back(p);
        out.push_back(std::move(r));
    }
    return out;
}

bool Report::census_complete() const {
    return std::all_of(census.begin(), census.end(), [](const CensusResult& r) { return r.covered(); });
}

Report run_claims(const ClaimSet& set, const RunOptions& opt) {
    std::vector<const Claim*> todo;
    for (auto& c : set.claims)
        if (opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), c.id) != opt.only.end())
            todo.push_back(&c);
    Report rep;
    rep.toolkit_version = toolkit_version();
    rep.seed = opt.seed;
    rep.mode = to_string(opt.mode);
    rep.tol = opt.tol;
    rep.results.resize(todo.size());
    if (opt.only.empty()) rep.census = census(set);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < todo.size(); i = next++) rep.results[i] = run_claim(set, *todo[i], opt);
    };
    int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(todo.size())));
    std::vector<std::thread> pool;
    for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(rep.results.begin(), rep.results.end(), [](auto& a, auto& b) { return a.id < b.id; });
    for (auto& r : rep.results) {
        if (r.outcome == "met") ++rep.met;
        else if (r.outcome == "unknown") ++rep.unknown;
        else ++rep.unexpected;
    }
    return rep;
}

json to_json(const Report& r, bool with_times) {
    json j;
    j["toolkit_version"] = r.toolkit_version;
    j["seed"] = r.seed;
    j["mode"] = r.mode;
    j["tolerance"] = r.tol;
    j["association_reading"] = "prV(C^i) + C^i D_k xi^k - C^k D_k xi^i = 0";
    j["summary"] = {{"total", r.results.size()}, {"met", r.met}, {"unexpected", r.unexpected}, {"unknown", r.unknown}};
    if (!r.census.empty()) {
        j["census"] = json::array();
        for (auto& c : r.census)
            j["census"].push_back({{"bullet", c.bullet}, {"claims", c.claims}, {"missing", c.missing}});
    }
    j["claims"] = json::array();
    for (auto& c : r.results) {
        json e = {{"id", c.id},
                  {"kind", c.kind},
                  {"anchor", c.anchor},
                  {"expect", c.expect},
                  {"verdict", c.verdict},
                  {"outcome", c.outcome},
                  {"detail", c.detail},
                  {"residual_hash", c.residual_hash},
                  {"max_numeric", c.max_numeric}};
        if (!c.oracle.empty()) e["oracle"] = c.oracle;
        if (with_times) e["wall_ms"] = c.wall_ms;
        j["claims"].push_back(std::move(e));
    }
    return j;
}

}  // namespace nlk
