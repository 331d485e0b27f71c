#include "nlk/jet.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace nlk {

bool JetSpace::is_dep(const std::string& n) const { return std::find(deps.begin(), deps.end(), n) != deps.end(); }
bool JetSpace::is_indep(const std::string& n) const {
    return std::find(indep.begin(), indep.end(), n) != indep.end();
}

namespace {

using Memo = std::unordered_map<const Node*, std::pair<Expr, Expr>>;

Expr td(const Expr& e, const std::string& v, const JetSpace& js, Memo& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second.second;
    Expr r;
    switch (e.kind()) {
    case Kind::Num: break;
    case Kind::Sym:
        if (e.name() == v) r = Expr(1);
        else if (js.is_dep(e.name())) r = jet(e.name(), {{v, 1}});
        break;
    case Kind::Jet: {
        MultiIndex idx = e.index();
        idx.emplace_back(v, 1);
        r = jet(e.name(), idx);
        break;
    }
    case Kind::Func: {
        std::vector<Expr> ts;
        for (std::size_t k = 0; k < e.args().size(); ++k) {
            Expr da = td(e.args()[k], v, js, memo);
            if (da.is_zero()) continue;
            auto ord = e.orders();
            ord[k] += 1;
            ts.push_back(func(e.name(), e.args(), ord) * da);
        }
        r = add(std::move(ts));
        break;
    }
    case Kind::Elem: {
        Expr da = td(e.args()[0], v, js, memo);
        if (!da.is_zero()) r = derivative_of_elementary(e.name(), e.args()[0]) * da;
        break;
    }
    case Kind::Int:
        if (e.args()[1].name() == v) r = e.args()[0];
        else r = integral(td(e.args()[0], v, js, memo), e.args()[1].name());
        break;
    case Kind::Pow: {
        const Expr& B = e.base();
        const Expr& E = e.exponent();
        Expr dB = td(B, v, js, memo);
        Expr dE = td(E, v, js, memo);
        if (dE.is_zero()) {
            if (!dB.is_zero()) r = E * pow(B, E - Expr(1)) * dB;
        } else {
            r = e * (dE * elem("ln", B) + E * dB / B);
        }
        break;
    }
    case Kind::Mul: {
        std::vector<Expr> ts;
        std::size_t n = e.nfactors();
        for (std::size_t i = 0; i < n; ++i) {
            Expr fi = pow(e.factor_base(i), e.factor_exp(i));
            Expr d = td(fi, v, js, memo);
            if (d.is_zero()) continue;
            std::vector<Expr> fs;
            fs.reserve(n + 1);
            fs.push_back(num(e.num()));
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) fs.push_back(pow(e.factor_base(j), e.factor_exp(j)));
            fs.push_back(d);
            ts.push_back(mul(std::move(fs)));
        }
        r = add(std::move(ts));
        break;
    }
    case Kind::Add: {
        std::vector<Expr> ts;
        for (std::size_t i = 0; i < e.nterms(); ++i) {
            Expr d = td(e.term(i), v, js, memo);
            if (!d.is_zero()) ts.push_back(d * num(e.term_coef(i)));
        }
        r = add(std::move(ts));
        break;
    }
    }
    memo.emplace(e.get(), std::make_pair(e, r));
    return r;
}

void collect_jets(const Expr& e, const std::string& dep, ExprSet& out) {
    if ((e.kind() == Kind::Sym || e.kind() == Kind::Jet) && e.name() == dep) {
        out.insert(e);
        return;
    }
    for (auto& x : e.node().ops) collect_jets(x, dep, out);
}

bool int_body_has_dep(const Expr& e, const JetSpace& js) {
    if (e.kind() == Kind::Int) {
        for (auto& d : js.deps)
            if (!jet_atoms(e.args()[0], d).empty()) return true;
    }
    for (auto& x : e.node().ops)
        if (int_body_has_dep(x, js)) return true;
    return false;
}

bool dominates(const MultiIndex& a, const MultiIndex& lead, MultiIndex& diff) {
    std::map<std::string, int> m;
    for (auto& [v, k] : a) m[v] += k;
    for (auto& [v, k] : lead) {
        m[v] -= k;
        if (m[v] < 0) return false;
    }
    diff.clear();
    for (auto& [v, k] : m)
        if (k > 0) diff.emplace_back(v, k);
    return true;
}

}  // namespace

Expr total_derivative(const Expr& e, const std::string& v, const JetSpace& js) {
    Memo memo;
    return td(e, v, js, memo);
}

Expr total_derivative(const Expr& e, const MultiIndex& alpha, const JetSpace& js) {
    Expr r = e;
    for (auto& [v, k] : alpha)
        for (int i = 0; i < k; ++i) r = total_derivative(r, v, js);
    return r;
}

ExprSet jet_atoms(const Expr& e, const std::string& dep) {
    ExprSet s;
    collect_jets(e, dep, s);
    return s;
}

MultiIndex jet_index(const Expr& atom) {
    if (atom.kind() == Kind::Jet) return atom.index();
    return {};
}

int jet_order(const Expr& atom) {
    int n = 0;
    for (auto& [v, k] : jet_index(atom)) n += k;
    return n;
}

bool is_jet_of(const Expr& atom, const std::string& dep) {
    return (atom.kind() == Kind::Sym || atom.kind() == Kind::Jet) && atom.name() == dep;
}

Expr euler_operator(const Expr& e, const std::string& dep, const JetSpace& js) {
    if (int_body_has_dep(e, js))
        throw Unsupported("Euler operator over a formal integral of a dependent variable");
    std::vector<Expr> ts;
    for (const Expr& a : jet_atoms(e, dep)) {
        Expr p = partial(e, a);
        if (p.is_zero()) continue;
        Expr d = total_derivative(p, jet_index(a), js);
        ts.push_back(jet_order(a) % 2 ? -d : d);
    }
    return add(std::move(ts));
}

const Expr& FluxVector::operator[](const std::string& v) const {
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] == v) return comps[i];
    throw std::out_of_range("flux has no component " + v);
}

Expr divergence(const FluxVector& C, const JetSpace& js) {
    if (C.comps.size() != C.order.size() || C.comps.size() != js.indep.size())
        throw std::invalid_argument("flux component count does not match the jet space");
    std::vector<Expr> ts;
    for (std::size_t i = 0; i < C.comps.size(); ++i) {
        if (!js.is_indep(C.order[i])) throw std::invalid_argument("flux component for unknown variable " + C.order[i]);
        ts.push_back(total_derivative(C.comps[i], C.order[i], js));
    }
    return add(std::move(ts));
}

Equation make_equation(const Expr& lhs, const Expr& rhs, const Expr& lead) {
    if (lead.kind() != Kind::Sym && lead.kind() != Kind::Jet)
        throw std::invalid_argument("leading term must be a jet atom: " + render(lead));
    Expr E = lhs - rhs;
    Expr A = partial(E, lead);
    if (A.is_zero()) throw std::invalid_argument("equation does not contain " + render(lead));
    if (contains(A, lead)) throw std::invalid_argument("equation is not linear in " + render(lead));
    Expr B = substitute(E, {{lead, Expr(0)}});
    if (!(E - (A * lead + B)).is_zero()) throw std::invalid_argument("equation is not linear in " + render(lead));
    Expr R = -(B / A);
    MultiIndex diff;
    for (const Expr& a : jet_atoms(R, lead.name()))
        if (dominates(jet_index(a), jet_index(lead), diff))
            throw std::invalid_argument("solved form for " + render(lead) + " contains its own prolongation " + render(a));
    return Equation{lhs, rhs, lead, R};
}

Expr reduce_on_solutions(const Expr& e, const PdeSystem& sys, int order_bound) {
    std::vector<const Equation*> eqs;
    for (auto& q : sys.eqs) eqs.push_back(&q);
    std::stable_sort(eqs.begin(), eqs.end(),
                     [](const Equation* a, const Equation* b) { return jet_order(a->lead) > jet_order(b->lead); });
    std::map<std::pair<std::size_t, MultiIndex>, Expr> cache;
    Expr cur = e;
    for (int round = 0; round < 4 * order_bound + 8; ++round) {
        ExprMap bind;
        for (auto& d : sys.js.deps) {
            for (const Expr& a : jet_atoms(cur, d)) {
                if (jet_order(a) > order_bound) throw Unsupported("on-shell reduction exceeded the order bound");
                MultiIndex diff;
                for (std::size_t k = 0; k < eqs.size(); ++k) {
                    const Equation& q = *eqs[k];
                    if (q.lead.name() != d || !dominates(jet_index(a), jet_index(q.lead), diff)) continue;
                    auto key = std::make_pair(k, diff);
                    auto it = cache.find(key);
                    if (it == cache.end()) it = cache.emplace(key, total_derivative(q.solved, diff, sys.js)).first;
                    bind.emplace(a, it->second);
                    break;
                }
            }
        }
        if (bind.empty()) return cur;
        cur = substitute(cur, bind);
    }
    throw Unsupported("on-shell reduction did not terminate");
}

}  // namespace nlk
