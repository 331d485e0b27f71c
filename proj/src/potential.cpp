#include "nlk/potential.hpp"

#include <stdexcept>

#include "nlk/chvar.hpp"
#include "nlk/linalg.hpp"

namespace nlk {

namespace {

std::vector<std::pair<Expr, Expr>> factors_of(const Expr& mono) {
    std::vector<std::pair<Expr, Expr>> fs;
    if (mono.kind() == Kind::Mul) {
        for (std::size_t i = 0; i < mono.nfactors(); ++i) fs.emplace_back(mono.factor_base(i), mono.factor_exp(i));
    } else if (mono.kind() == Kind::Pow) {
        fs.emplace_back(mono.base(), mono.exponent());
    } else if (!mono.is_one()) {
        fs.emplace_back(mono, Expr(1));
    }
    return fs;
}

bool has_jets(const Expr& e, const JetSpace& js) {
    for (auto& d : js.deps)
        if (!jet_atoms(e, d).empty()) return true;
    return false;
}

// Exponent k when e is var^k with integer k >= 0 (1 counts as k = 0).
std::optional<long> monomial_power(const std::vector<std::pair<Expr, Expr>>& xs, const std::string& var) {
    if (xs.empty()) return 0;
    if (xs.size() != 1) return std::nullopt;
    auto& [b, k] = xs[0];
    if (b.kind() != Kind::Sym || b.name() != var || !k.is_integer() || k.num() < 0) return std::nullopt;
    return k.num().get_num().get_si();
}

Expr integrate_term(const Expr& coef, const Expr& mono, const std::string& var, const JetSpace& js, int depth) {
    std::vector<std::pair<Expr, Expr>> jetty, xdep;
    std::vector<Expr> konst{coef};
    for (auto& [b, k] : factors_of(mono)) {
        if (has_jets(b, js) || b.kind() == Kind::Int) jetty.emplace_back(b, k);
        else if (depends_on_symbol(b, var)) xdep.emplace_back(b, k);
        else konst.push_back(pow(b, k));
    }
    Expr K = mul(konst);
    Expr x = sym(var);
    auto kx = monomial_power(xdep, var);
    if (jetty.empty() && kx) return K * pow(x, Expr(*kx + 1)) / Expr(*kx + 1);
    if (jetty.size() == 1 && jetty[0].second.is_one() && jetty[0].first.kind() == Kind::Jet && kx && depth < 16) {
        const Expr& J = jetty[0].first;
        MultiIndex lower = J.index();
        bool found = false;
        for (auto& [v, n] : lower)
            if (v == var && n > 0) {
                --n;
                found = true;
            }
        if (found) {
            Expr Jm = jet(J.name(), canonical_index(lower));
            Expr r = K * pow(x, Expr(*kx)) * Jm;
            if (*kx > 0) r = r - integrate_term(K * Expr(*kx), pow(x, Expr(*kx - 1)) * Jm, var, js, depth + 1);
            return r;
        }
    }
    std::vector<Expr> body;
    for (auto& [b, k] : jetty) body.push_back(pow(b, k));
    for (auto& [b, k] : xdep) body.push_back(pow(b, k));
    return K * integral(mul(body), var);
}

Expr first_jet(const std::string& dep, const std::string& v) { return jet(dep, {{v, 1}}); }

std::string lead_var(const Equation& q) {
    const MultiIndex& idx = q.lead.index();
    if (idx.size() != 1 || idx[0].second != 1) throw std::invalid_argument("potential equation lead must be first order");
    return idx[0].first;
}

}  // namespace

Expr antiderivative(const Expr& e, const std::string& var, const JetSpace& js) {
    std::vector<Expr> ts;
    for (auto& [mono, c] : terms_of(e)) ts.push_back(integrate_term(num(c), mono, var, js, 0));
    return add(std::move(ts));
}

PotentialSystem build_rps(const Expr& P, const FluxVector& C, const Expr& multiplier,
                          const std::array<std::string, 3>& roles, const std::string& potential,
                          const JetSpace& base, int orientation, const ZeroOptions& opt) {
    ZeroVerdict v = is_zero(divergence(C, base) - multiplier * P, opt);
    if (!v.ok())
        throw std::invalid_argument(std::string("flux is not a verified conservation law (") + to_string(v.status) + ")");
    const auto& [x1, x2, x3] = roles;
    Expr I = antiderivative(total_derivative(C[x1], x1, base), x2, base);
    PotentialSystem ps;
    ps.js = base;
    if (!ps.js.is_dep(potential)) ps.js.deps.push_back(potential);
    ps.P = P;
    ps.multiplier = multiplier;
    ps.potentials = {potential};
    Expr w2 = first_jet(potential, x2), w3 = first_jet(potential, x3);
    if (orientation > 0) {
        ps.eqs.push_back(make_equation(w2, C[x3], w2));
        ps.eqs.push_back(make_equation(w3, -C[x2] - I, w3));
    } else {
        ps.eqs.push_back(make_equation(w3, C[x2] + I, w3));
        ps.eqs.push_back(make_equation(w2, -C[x3], w2));
    }
    ps.source = "rps(" + x1 + "," + x2 + "," + x3 + ")";
    ps.compat_residual = compatibility_residual(ps);
    return ps;
}

Expr compatibility_residual(const PotentialSystem& ps) {
    if (ps.eqs.size() != 2) throw std::invalid_argument("compatibility_residual expects two potential equations");
    const std::string a = lead_var(ps.eqs[0]), b = lead_var(ps.eqs[1]);
    return total_derivative(ps.eqs[0].solved, b, ps.js) - total_derivative(ps.eqs[1].solved, a, ps.js) -
           ps.multiplier * ps.P;
}

ZeroVerdict compatibility_check(const PotentialSystem& ps, const ZeroOptions& opt) {
    return is_zero(compatibility_residual(ps), opt);
}

PdeSystem combined_system(const PdeSystem& base, const std::vector<const PotentialSystem*>& parts) {
    PdeSystem s = base;
    for (auto* p : parts) {
        for (auto& d : p->potentials)
            if (!s.js.is_dep(d)) s.js.deps.push_back(d);
        for (auto& q : p->eqs) s.eqs.push_back(q);
    }
    return s;
}

GaugeSystem gauge_system(const FluxVector& C, const std::array<std::string, 3>& roles, const std::string& w1,
                         const std::string& w2, const JetSpace& js) {
    const auto& [x1, x2, x3] = roles;
    GaugeSystem g;
    g.js = js;
    for (auto& d : {w1, w2})
        if (!g.js.is_dep(d)) g.js.deps.push_back(d);
    Expr a = first_jet(w2, x2), b = first_jet(w1, x2), c = first_jet(w1, x3);
    g.eqs.push_back(make_equation(a, -C[x1], a));
    g.eqs.push_back(make_equation(b, C[x3], b));
    g.eqs.push_back(make_equation(c, first_jet(w2, x1) - C[x2], c));
    PdeSystem first{g.js, {g.eqs[0]}};
    g.compat_residual = reduce_on_solutions(
        total_derivative(g.eqs[1].solved, x3, g.js) - total_derivative(g.eqs[2].solved, x2, g.js), first);
    return g;
}

NonlocalExtension extend_nonlocal(const PdeSystem& base, const std::vector<std::string>& potentials,
                                  const FluxVector& nlC, const std::vector<Expr>& multipliers,
                                  const std::array<std::string, 3>& roles, const std::string& w1,
                                  const std::string& w2) {
    bool nonlocal = false;
    for (auto& m : multipliers)
        for (auto& p : potentials)
            if (!jet_atoms(m, p).empty()) nonlocal = true;
    if (!nonlocal) throw std::invalid_argument("no multiplier involves a potential variable");
    if (multipliers.size() != base.eqs.size())
        throw std::invalid_argument("one multiplier per equation of the potential system is required");
    NonlocalExtension out;
    out.ext = gauge_system(nlC, roles, w1, w2, base.js);
    Expr div = divergence(nlC, base.js);
    out.onshell_residual = reduce_on_solutions(div, base);
    std::vector<Expr> ts{div};
    for (std::size_t k = 0; k < multipliers.size(); ++k) ts.push_back(-multipliers[k] * base.eqs[k].residual());
    out.multiplier_residual = add(std::move(ts));
    return out;
}

IpsResult build_ips_hodograph(const Expr& P, const JetSpace& base, const VectorField& V, const HodographChart& chart,
                              std::optional<Expr> main_lead, const ZeroOptions& opt) {
    if (chart.chi.size() != 2 || base.indep.size() != 3 || base.deps.size() != 1)
        throw Unsupported("hodograph systems are built for one dependent and three independents");
    auto coord = [&](const std::string& n) -> const Expr& {
        auto it = chart.coords.find(sym(n));
        if (it == chart.coords.end()) throw std::invalid_argument("chart misses coordinate " + n);
        return it->second;
    };
    const Expr& uw = coord(chart.w);
    const Expr& xm = coord(chart.M);
    if (uw.kind() != Kind::Sym || uw.name() != base.deps[0] || xm.kind() != Kind::Sym || !base.is_indep(xm.name()))
        throw Unsupported("chart is not a hodograph chart");
    for (auto& c : chart.chi)
        if (coord(c).kind() != Kind::Sym || !base.is_indep(coord(c).name()))
            throw Unsupported("chart is not a hodograph chart");
    CanonicalCoords cc{{coord(chart.chi[0]), coord(chart.chi[1]), uw}, {}, xm};
    ZeroVerdict cv = canonical_check(V, cc, opt);
    if (!cv.ok()) throw std::invalid_argument("coordinates are not canonical for the field");

    PointTransform T;
    T.old_js = base;
    T.new_js = JetSpace{{chart.chi[0], chart.chi[1], chart.w}, {chart.M}};
    T.cls = TransformClass::Hodograph;
    for (auto& n : {chart.chi[0], chart.chi[1], chart.w, chart.M}) {
        T.forward.emplace(sym(n), coord(n));
        T.inverse.emplace(coord(n), sym(n));
    }
    IpsResult res;
    Expr E = transform_expr(P, T);
    Expr Mw = jet(chart.M, {{chart.w, 1}});
    long k = 0;
    for (auto& [mono, c] : terms_of(E))
        for (auto& [b, e] : factors_of(mono))
            if (b == Mw && e.is_integer() && e.num() < 0) k = std::max(k, -e.num().get_num().get_si());
    res.cleared_power = static_cast<int>(k);
    res.transformed = E * pow(Mw, Expr(k));

    const auto& th = chart.theta;
    const std::string& s = chart.chi[0];
    const std::string& r = chart.chi[1];
    const std::string& w = chart.w;
    ExprMap bind;
    for (const Expr& a : jet_atoms(res.transformed, chart.M)) {
        if (a.kind() != Kind::Jet) throw Unsupported("main equation depends on the undifferentiated " + chart.M);
        MultiIndex idx = a.index();
        std::string pick;
        for (auto& v : {w, s, r})
            for (auto& [iv, n] : idx)
                if (pick.empty() && iv == v) pick = v;
        for (auto& [iv, n] : idx)
            if (iv == pick) {
                --n;
                break;
            }
        const std::string& name = pick == s ? th[0] : pick == r ? th[1] : th[2];
        bind.emplace(a, jet(name, canonical_index(idx)));
    }
    res.main = substitute(res.transformed, bind);

    res.ips.js = JetSpace{{s, r, w}, {th[0], th[1], th[2]}};
    auto J = [](const std::string& d, const std::string& v) { return jet(d, {{v, 1}}); };
    res.ips.eqs.push_back(make_equation(J(th[0], r), J(th[1], s), J(th[0], r)));
    res.ips.eqs.push_back(make_equation(J(th[0], w), J(th[2], s), J(th[0], w)));
    res.ips.eqs.push_back(make_equation(J(th[1], w), J(th[2], r), J(th[1], w)));
    std::vector<Expr> cands;
    if (main_lead) {
        cands.push_back(*main_lead);
    } else {
        cands.push_back(J(th[2], r));
        for (auto& d : {th[2], th[1], th[0]})
            for (const Expr& a : jet_atoms(res.main, d)) cands.push_back(a);
    }
    for (auto& L : cands) {
        if (!contains(res.main, L)) continue;
        try {
            res.ips.eqs.push_back(make_equation(res.main, Expr(0), L));
            return res;
        } catch (const std::exception&) {
        }
    }
    throw Unsupported("no linear leading derivative in the main equation");
}

std::array<Expr, 2> cole_hopf_forward(const Expr& f, const ColeHopfPair& pair) {
    std::array<Expr, 2> mu;
    for (int k = 0; k < 2; ++k) mu[k] = Expr(-2) * pair.nu * partial(f, sym(pair.space[k])) / f;
    return mu;
}

ColeHopfInverse cole_hopf_inverse(const Expr& mu, const Expr& A, const ColeHopfPair& pair, int component,
                                  const ZeroOptions& opt) {
    ColeHopfInverse out;
    out.antiderivative = is_zero(partial(A, sym(pair.space[component])) - mu, opt);
    out.f = elem("exp", -A / (Expr(2) * pair.nu));
    out.round_trip = is_zero(cole_hopf_forward(out.f, pair)[component] - mu, opt);
    return out;
}

Expr heat_residual(const Expr& f, const ColeHopfPair& pair) {
    Expr lap = partial(partial(f, sym(pair.space[0])), sym(pair.space[0])) +
               partial(partial(f, sym(pair.space[1])), sym(pair.space[1]));
    return partial(f, sym(pair.time)) - pair.nu * lap;
}

}  // namespace nlk
