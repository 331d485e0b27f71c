#include "nlk/chvar.hpp"

#include <functional>
#include <set>

namespace nlk {

const char* to_string(TransformClass c) {
    switch (c) {
    case TransformClass::PureIndependent: return "pure-independent";
    case TransformClass::Hodograph: return "hodograph";
    case TransformClass::Similarity: return "similarity";
    }
    return "?";
}

PointTransform make_transform(const JetSpace& old_js, const JetSpace& new_js,
                              const std::map<std::string, std::string>& forward,
                              const std::map<std::string, std::string>& inverse, TransformClass cls,
                              const ParseContext& ctx) {
    if (old_js.deps.size() != 1 || new_js.deps.size() != 1)
        throw std::invalid_argument("point transforms act on one dependent variable");
    PointTransform T{old_js, new_js, {}, {}, cls};
    std::vector<std::string> olds = old_js.indep, news = new_js.indep;
    olds.push_back(old_js.deps[0]);
    news.push_back(new_js.deps[0]);
    for (auto& n : news) {
        auto it = forward.find(n);
        if (it == forward.end()) throw std::invalid_argument("forward map misses " + n);
        T.forward.emplace(sym(n), parse(it->second, ctx));
    }
    for (auto& o : olds) {
        auto it = inverse.find(o);
        if (it == inverse.end()) throw std::invalid_argument("inverse map misses " + o);
        T.inverse.emplace(sym(o), parse(it->second, ctx));
    }
    for (auto& [n, f] : T.forward)
        if (!exact_zero(substitute(f, T.inverse) - n))
            throw std::invalid_argument("forward and inverse maps disagree on " + n.name());
    return T;
}

Expr determinant(const Matrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return Expr(1);
    if (n == 1) return m[0][0];
    std::vector<Expr> ts;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        Matrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Expr> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(std::move(row));
        }
        Expr t = m[0][c] * determinant(minor);
        ts.push_back(c % 2 ? -t : t);
    }
    return add(std::move(ts));
}

Matrix inverse(const Matrix& m, const Expr& det) {
    const std::size_t n = m.size();
    Matrix inv(n, std::vector<Expr>(n));
    Expr rdet = pow(det, Expr(-1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Matrix minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<Expr> row;
                for (std::size_t k = 0; k < n; ++k)
                    if (k != i) row.push_back(m[r][k]);
                minor.push_back(std::move(row));
            }
            Expr c = determinant(minor);
            inv[i][j] = ((i + j) % 2 ? -c : c) * rdet;
        }
    return inv;
}

JacobianData jacobian(const PointTransform& T) {
    JacobianData J;
    for (auto& nj : T.new_js.indep) {
        std::vector<Expr> row;
        for (auto& oi : T.old_js.indep) row.push_back(total_derivative(T.inverse.at(sym(oi)), nj, T.new_js));
        J.K.push_back(std::move(row));
    }
    J.Y = determinant(J.K);
    if (exact_zero(J.Y)) throw std::invalid_argument("singular Jacobian: the chart is not invertible");
    J.Kinv = inverse(J.K, J.Y);
    return J;
}

namespace {

struct ChainRule {
    const PointTransform& T;
    const JacobianData& J;
    std::map<MultiIndex, Expr> memo;

    Expr old_jet(const MultiIndex& alpha) {
        auto it = memo.find(alpha);
        if (it != memo.end()) return it->second;
        Expr r;
        if (alpha.empty()) {
            r = T.inverse.at(sym(T.old_js.deps[0]));
        } else {
            MultiIndex prev = alpha;
            std::string last = prev.back().first;
            if (--prev.back().second == 0) prev.pop_back();
            Expr lower = old_jet(prev);
            std::size_t i = 0;
            while (T.old_js.indep[i] != last) ++i;
            std::vector<Expr> ts;
            for (std::size_t j = 0; j < T.new_js.indep.size(); ++j) {
                if (J.Kinv[i][j].is_zero()) continue;
                ts.push_back(J.Kinv[i][j] * total_derivative(lower, T.new_js.indep[j], T.new_js));
            }
            r = add(std::move(ts));
        }
        memo.emplace(alpha, r);
        return r;
    }
};

}  // namespace

Expr transform_expr(const Expr& e, const PointTransform& T, const JacobianData& J) {
    ChainRule cr{T, J, {}};
    ExprMap bind = T.inverse;
    for (const Expr& a : jet_atoms(e, T.old_js.deps[0]))
        if (a.kind() == Kind::Jet) {
            for (auto& [v, k] : a.index())
                if (!T.old_js.is_indep(v)) throw std::invalid_argument("jet atom over unknown variable: " + render(a));
            bind.emplace(a, cr.old_jet(a.index()));
        }
    return substitute(e, bind);
}

Expr transform_expr(const Expr& e, const PointTransform& T) { return transform_expr(e, T, jacobian(T)); }

FluxTransform transform_fluxes(const FluxVector& C, const PointTransform& T) {
    JacobianData J = jacobian(T);
    FluxTransform out;
    out.flux.order = T.new_js.indep;
    std::vector<Expr> Cn;
    for (auto& oi : T.old_js.indep) Cn.push_back(transform_expr(C[oi], T, J));
    for (std::size_t j = 0; j < T.new_js.indep.size(); ++j) {
        std::vector<Expr> ts;
        for (std::size_t i = 0; i < Cn.size(); ++i)
            if (!J.Kinv[i][j].is_zero() && !Cn[i].is_zero()) ts.push_back(J.Kinv[i][j] * Cn[i]);
        out.flux.comps.push_back(J.Y * add(std::move(ts)));
    }
    if (C.multiplier) out.flux.multiplier = transform_expr(*C.multiplier, T, J);
    out.identity_residual = J.Y * transform_expr(divergence(C, T.old_js), T, J) - divergence(out.flux, T.new_js);
    return out;
}

Expr reduce_by_invariants(const Expr& e, const InvariantAnsatz& a) {
    // D_i = sum_a (d_i s^a) D'_a on functions of the invariants.
    std::map<std::string, std::vector<Expr>> dsa;
    for (auto& oi : a.old_js.indep) {
        std::vector<Expr> row;
        for (auto& nj : a.new_js.indep) row.push_back(substitute(partial(a.indep.at(nj), sym(oi)), a.inverse));
        dsa.emplace(oi, std::move(row));
    }
    ExprMap bind = a.inverse;
    for (auto& [od, nd] : a.dep) {
        std::map<MultiIndex, Expr> memo;
        std::function<Expr(const MultiIndex&)> rec = [&](const MultiIndex& alpha) -> Expr {
            auto it = memo.find(alpha);
            if (it != memo.end()) return it->second;
            Expr r;
            if (alpha.empty()) {
                r = sym(nd);
            } else {
                MultiIndex prev = alpha;
                std::string last = prev.back().first;
                if (--prev.back().second == 0) prev.pop_back();
                Expr lower = rec(prev);
                std::vector<Expr> ts;
                auto& row = dsa.at(last);
                for (std::size_t j = 0; j < a.new_js.indep.size(); ++j)
                    if (!row[j].is_zero()) ts.push_back(row[j] * total_derivative(lower, a.new_js.indep[j], a.new_js));
                r = add(std::move(ts));
            }
            memo.emplace(alpha, r);
            return r;
        };
        for (const Expr& j : jet_atoms(e, od)) bind.emplace(j, rec(jet_index(j)));
    }
    Expr r = substitute(e, bind);
    for (auto& oi : a.old_js.indep)
        if (depends_on_symbol(r, oi)) throw NonInvariant("reduction leaves " + oi + " in " + render(r));
    return r;
}

}  // namespace nlk
