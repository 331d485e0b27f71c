#include "nlk/linalg.hpp"

#include <map>

namespace nlk {

namespace {
bool atom_uses(const Expr& e, const std::set<std::string>& names) {
    switch (e.kind()) {
    case Kind::Num: return false;
    case Kind::Sym:
    case Kind::Jet: return names.count(e.name()) > 0;
    default:
        for (auto& x : e.node().ops)
            if (atom_uses(x, names)) return true;
        return false;
    }
}

bool factor_is_var(const Expr& x, const AtomPredicate& is_var) {
    for (const Expr& a : atoms(x))
        if (is_var(a)) return true;
    return false;
}
}  // namespace

AtomPredicate depends_on_any(std::set<std::string> names) {
    return [names = std::move(names)](const Expr& a) { return atom_uses(a, names); };
}

std::vector<std::pair<Expr, Expr>> split_coefficients(const Expr& e, const AtomPredicate& is_var) {
    std::map<Expr, std::vector<Expr>, ExprLess> acc;
    for (auto& [m, c] : terms_of(e)) {
        std::vector<Expr> var, par{num(c)};
        if (m.kind() == Kind::Mul) {
            for (std::size_t i = 0; i < m.nfactors(); ++i) {
                Expr f = pow(m.factor_base(i), m.factor_exp(i));
                (factor_is_var(m.factor_base(i), is_var) || factor_is_var(m.factor_exp(i), is_var) ? var : par)
                    .push_back(f);
            }
        } else if (!m.is_one()) {
            (factor_is_var(m, is_var) ? var : par).push_back(m);
        }
        acc[mul(var)].push_back(mul(par));
    }
    std::vector<std::pair<Expr, Expr>> out;
    for (auto& [k, v] : acc) {
        Expr c = add(v);
        if (!c.is_zero()) out.emplace_back(k, c);
    }
    return out;
}

bool exact_zero(const Expr& e) {
    if (e.is_zero()) return true;
    return clear_denominators(e).is_zero();
}

std::optional<Expr> proportional(const Expr& a, const Expr& b, const AtomPredicate& is_var) {
    if (exact_zero(b)) return exact_zero(a) ? std::optional<Expr>(Expr(0)) : std::nullopt;
    auto sb = split_coefficients(b, is_var);
    const auto& [mono, cb] = sb.front();
    Expr ca;
    for (auto& [m, c] : split_coefficients(a, is_var))
        if (m == mono) ca = c;
    Expr k = ca / cb;
    if (!exact_zero(a - k * b)) return std::nullopt;
    return k;
}

std::vector<std::size_t> rref(Matrix& m, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
        std::size_t best = m.size();
        for (std::size_t r = row; r < m.size(); ++r) {
            if (exact_zero(m[r][col])) {
                m[r][col] = Expr(0);
                continue;
            }
            if (best == m.size() || (m[r][col].is_num() && !m[best][col].is_num())) best = r;
        }
        if (best == m.size()) continue;
        std::swap(m[row], m[best]);
        Expr p = m[row][col];
        for (auto& x : m[row]) x = x / p;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].is_zero()) continue;
            Expr f = m[r][col];
            for (std::size_t c = 0; c < m[r].size(); ++c) {
                if (m[row][c].is_zero()) continue;
                m[r][c] = m[r][c] - f * m[row][c];
                if (exact_zero(m[r][c])) m[r][c] = Expr(0);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::vector<std::vector<Expr>> nullspace(Matrix m, std::size_t ncols) {
    auto piv = rref(m, ncols);
    std::vector<bool> is_piv(ncols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<Expr>> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Expr> v(ncols, Expr(0));
        v[f] = Expr(1);
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Expr>> solve(const Matrix& A, const std::vector<Expr>& b, std::size_t ncols) {
    Matrix m = A;
    for (std::size_t r = 0; r < m.size(); ++r) {
        m[r].resize(ncols, Expr(0));
        m[r].push_back(b[r]);
    }
    auto piv = rref(m, ncols);
    for (std::size_t r = piv.size(); r < m.size(); ++r)
        if (!exact_zero(m[r][ncols])) return std::nullopt;
    std::vector<Expr> x(ncols, Expr(0));
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = m[r][ncols];
    return x;
}

}  // namespace nlk
