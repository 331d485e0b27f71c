#include "nlk/reduction.hpp"

#include <cmath>
#include <random>

#include "nlk/linalg.hpp"

namespace nlk {

AssociationResult association_check(const VectorField& V, const FluxVector& C, const PdeSystem& sys,
                                    const ZeroOptions& opt) {
    const JetSpace& js = sys.js;
    AssociationResult out;
    std::map<std::string, std::map<std::string, Expr>> dxi;  // dxi[k][i] = D_k xi^i
    Expr divxi;
    for (auto& k : C.order)
        for (auto& i : C.order) {
            Expr d = total_derivative(V[i], k, js);
            dxi[k][i] = d;
            if (k == i) divxi += d;
        }
    std::vector<ZeroVerdict> vs;
    for (std::size_t a = 0; a < C.order.size(); ++a) {
        const std::string& i = C.order[a];
        std::vector<Expr> ts{apply_prolonged(V, C.comps[a], js), C.comps[a] * divxi};
        for (std::size_t b = 0; b < C.order.size(); ++b) ts.push_back(-C.comps[b] * dxi[C.order[b]][i]);
        Expr r = add(std::move(ts));
        if (!sys.eqs.empty()) r = reduce_on_solutions(r, sys);
        vs.push_back(is_zero(r, opt));
        out.residuals.push_back(r);
    }
    out.verdict = combine(vs);
    return out;
}

DoubleReduction double_reduce(const FluxVector& C, const PointTransform& T, const std::string& translation) {
    DoubleReduction d;
    d.translation = translation;
    d.full = transform_fluxes(C, T);
    d.reduced_js = T.new_js;
    d.reduced_js.indep.clear();
    for (auto& v : T.new_js.indep)
        if (v != translation) d.reduced_js.indep.push_back(v);
    for (std::size_t k = 0; k < d.full.flux.comps.size(); ++k) {
        const Expr& c = d.full.flux.comps[k];
        ExprMap drop;
        for (auto& dep : T.new_js.deps)
            for (const Expr& a : jet_atoms(c, dep))
                if (a.kind() == Kind::Jet)
                    for (auto& [v, n] : a.index())
                        if (v == translation) drop.emplace(a, Expr(0));
        Expr r = substitute(c, drop);
        if (depends_on_symbol(r, translation))
            throw NonInvariant("component " + T.new_js.indep[k] + " still depends on " + translation + ": " +
                               render(r));
        d.reduced.push_back(r);
    }
    return d;
}

Expr reduced_divergence(const DoubleReduction& d) {
    std::vector<Expr> ts;
    for (std::size_t k = 0; k < d.full.flux.order.size(); ++k) {
        const std::string& v = d.full.flux.order[k];
        if (v == d.translation) continue;
        ts.push_back(total_derivative(d.reduced[k], v, d.reduced_js));
    }
    return add(std::move(ts));
}

Expr apply_solution(const Expr& e, const Solution& sol, const JetSpace& js) {
    ExprMap bind;
    for (auto& [dep, f] : sol)
        for (const Expr& a : jet_atoms(e, dep)) {
            Expr r = f;
            for (auto& [v, n] : jet_index(a))
                for (int k = 0; k < n; ++k) r = partial(r, sym(v));
            bind.emplace(a, r);
        }
    (void)js;
    return substitute(e, bind);
}

SolutionCheck verify_solution(const PdeSystem& sys, const Solution& sol, const ZeroOptions& opt) {
    SolutionCheck out;
    std::vector<ZeroVerdict> vs;
    for (auto& q : sys.eqs) {
        Expr r = apply_solution(q.residual(), sol, sys.js);
        vs.push_back(is_zero(r, opt));
        out.residuals.push_back(r);
    }
    out.verdict = combine(vs);
    return out;
}

namespace {

void collect_denominators(const Expr& e, ExprSet& out) {
    if (e.kind() == Kind::Pow && e.exponent().is_num() && e.exponent().num() < 0) out.insert(e.base());
    if (e.kind() == Kind::Mul)
        for (std::size_t i = 0; i < e.nfactors(); ++i)
            if (e.factor_exp(i).is_num() && e.factor_exp(i).num() < 0) out.insert(e.factor_base(i));
    for (auto& x : e.node().ops) collect_denominators(x, out);
}

}  // namespace

GridResult grid_residual(const std::vector<Expr>& residuals, const GridSpec& spec) {
    GridResult res;
    ExprSet dens;
    for (auto& r : residuals) collect_denominators(r, dens);
    std::vector<Evaluator> evs;
    for (auto& r : residuals) evs.emplace_back(r);
    std::vector<Evaluator> dev;
    for (auto& d : dens) dev.emplace_back(d);
    std::set<std::string> names;
    for (auto& e : evs)
        for (auto& k : e.keys()) names.insert(k);
    for (auto& e : dev)
        for (auto& k : e.keys()) names.insert(k);
    std::mt19937_64 rng(spec.seed);
    auto gather = [](const Evaluator& e, const Point& p) {
        std::vector<double> v;
        for (auto& k : e.keys()) v.push_back(p.at(k));
        return v;
    };
    for (int i = 0; i < spec.points; ++i) {
        Point p;
        for (auto& n : names) {
            auto it = spec.box.find(n);
            auto [lo, hi] = it == spec.box.end() ? spec.default_box : it->second;
            p[n] = draw(rng, lo, hi);
        }
        bool ok = true;
        for (auto& d : dev) {
            double v = d(gather(d, p));
            if (!std::isfinite(v) || std::fabs(v) < spec.guard) ok = false;
        }
        std::vector<double> vals;
        for (auto& e : evs) {
            if (!ok) break;
            double v = e(gather(e, p));
            if (!std::isfinite(v)) ok = false;
            vals.push_back(v);
        }
        if (!ok) {
            ++res.rejected;
            continue;
        }
        ++res.accepted;
        for (double v : vals)
            if (std::fabs(v) >= res.max_abs) {
                res.max_abs = std::fabs(v);
                res.worst = p;
            }
    }
    if (res.accepted == 0) res.status = ZeroStatus::Unknown;
    else res.status = res.max_abs < spec.tol ? ZeroStatus::NumericZero : ZeroStatus::NonZero;
    return res;
}

GridResult grid_residual(const PdeSystem& sys, const Solution& sol, const GridSpec& spec) {
    std::vector<Expr> rs;
    for (auto& q : sys.eqs) rs.push_back(apply_solution(q.residual(), sol, sys.js));
    return grid_residual(rs, spec);
}

Inheritance inheritance(const VectorField& target, const std::vector<VectorField>& projected,
                        const FunctionFamily& family, const std::set<std::string>& space) {
    auto embed = [&](const VectorField& f) {
        VectorField g;
        for (auto& [z, c] : f.coeffs())
            if (z != family.component) g.set(z, c);
        for (std::size_t k = 0; k < family.annihilators.size(); ++k)
            g.set("#" + std::to_string(k), family.annihilators[k].apply(f[family.component]));
        return g;
    };
    std::vector<VectorField> basis;
    for (auto& p : projected) basis.push_back(embed(p));
    Inheritance out;
    auto c = span_coefficients(embed(target), basis, space);
    if (!c) return out;
    out.inherited = true;
    out.coeffs = *c;
    std::vector<Expr> ts{target[family.component]};
    for (std::size_t k = 0; k < projected.size(); ++k) ts.push_back(-(*c)[k] * projected[k][family.component]);
    out.remainder = add(std::move(ts));
    return out;
}

}  // namespace nlk
