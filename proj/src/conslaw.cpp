#include "nlk/conslaw.hpp"

#include <map>

#include "nlk/linalg.hpp"

namespace nlk {

std::vector<Expr> multiplier_residuals(const Expr& P, const Expr& delta, const JetSpace& js) {
    Expr H = delta * P;
    std::vector<Expr> out;
    for (auto& d : js.deps) out.push_back(euler_operator(H, d, js));
    return out;
}

ZeroVerdict verify_multiplier(const Expr& P, const Expr& delta, const JetSpace& js, const ZeroOptions& opt) {
    std::vector<ZeroVerdict> vs;
    for (auto& r : multiplier_residuals(P, delta, js)) vs.push_back(is_zero(r, opt));
    return combine(vs);
}

std::vector<Expr> multiplier_search(const Expr& P, const MultiplierAnsatz& ansatz, const JetSpace& js) {
    std::set<std::string> vars(js.indep.begin(), js.indep.end());
    vars.insert(js.deps.begin(), js.deps.end());
    auto is_var = depends_on_any(vars);
    const std::size_t n = ansatz.basis.size();
    // rows keyed by (dependent index, variable monomial)
    std::map<std::pair<std::size_t, Expr>, std::vector<Expr>, bool (*)(const std::pair<std::size_t, Expr>&,
                                                                       const std::pair<std::size_t, Expr>&)>
        rows([](const std::pair<std::size_t, Expr>& a, const std::pair<std::size_t, Expr>& b) {
            if (a.first != b.first) return a.first < b.first;
            return compare(a.second, b.second) < 0;
        });
    for (std::size_t i = 0; i < n; ++i) {
        auto res = multiplier_residuals(P, ansatz.basis[i], js);
        for (std::size_t d = 0; d < res.size(); ++d) {
            for (auto& [mono, coef] : split_coefficients(res[d], is_var)) {
                auto& row = rows[{d, mono}];
                row.resize(n, Expr(0));
                row[i] = row[i] + coef;
            }
        }
    }
    Matrix m;
    for (auto& [k, row] : rows) m.push_back(row);
    std::vector<Expr> out;
    for (auto& v : nullspace(m, n)) {
        std::vector<Expr> ts;
        for (std::size_t i = 0; i < n; ++i) ts.push_back(v[i] * ansatz.basis[i]);
        Expr mult = add(ts);
        if (!exact_zero(mult)) out.push_back(mult);
    }
    return out;
}

namespace {

Rat binom(int n, int k) {
    if (k < 0 || n < 0 || k > n) return Rat(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(r);
}

bool has_dep(const Expr& e, const JetSpace& js) {
    for (auto& d : js.deps)
        if (!jet_atoms(e, d).empty()) return true;
    return false;
}

// Degree of a monomial in the dependent jet variables; throws when not polynomial.
int dep_degree(const Expr& mono, const JetSpace& js) {
    auto one = [&](const Expr& b, const Expr& ex) -> int {
        if (!has_dep(b, js) && !has_dep(ex, js)) return 0;
        bool jetbase = (b.kind() == Kind::Sym || b.kind() == Kind::Jet) && js.is_dep(b.name());
        if (!jetbase || !ex.is_integer() || ex.num() < 0)
            throw Unsupported("homotopy operator needs an expression polynomial in the jet variables");
        return static_cast<int>(ex.num().get_num().get_si());
    };
    if (mono.kind() == Kind::Mul) {
        int d = 0;
        for (std::size_t i = 0; i < mono.nfactors(); ++i) d += one(mono.factor_base(i), mono.factor_exp(i));
        return d;
    }
    if (mono.kind() == Kind::Pow) return one(mono.base(), mono.exponent());
    if (mono.is_num()) return 0;
    return one(mono, Expr(1));
}

}  // namespace

HomotopyResult homotopy_flux(const Expr& H, const JetSpace& js) {
    const std::size_t m = js.indep.size();
    if (m == 0 || m > 3) throw Unsupported("homotopy operator implemented for one to three independent variables");
    for (auto& [mono, c] : terms_of(H))
        if (dep_degree(mono, js) == 0)
            throw std::invalid_argument("homotopy operator precondition: H has a part free of the dependent variables");
    HomotopyResult out;
    out.flux.order = js.indep;
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<std::size_t> role{c};
        for (std::size_t k = 1; k < m; ++k) role.push_back((c + k) % m);
        std::vector<Expr> integrand;
        for (auto& dep : js.deps) {
            for (const Expr& a : jet_atoms(H, dep)) {
                int k[3] = {0, 0, 0};
                for (auto& [v, ord] : jet_index(a))
                    for (std::size_t r = 0; r < role.size(); ++r)
                        if (js.indep[role[r]] == v) k[r] = ord;
                if (k[0] < 1) continue;
                Expr dH = partial(H, a);
                std::map<std::vector<int>, Expr> dcache;
                for (int i1 = 0; i1 < k[0]; ++i1)
                    for (int i2 = 0; i2 <= k[1]; ++i2)
                        for (int i3 = 0; i3 <= k[2]; ++i3) {
                            Rat B = binom(i1 + i2 + i3, i1) * binom(i2 + i3, i2) *
                                    binom(k[0] + k[1] + k[2] - i1 - i2 - i3 - 1, k[0] - i1 - 1) *
                                    binom(k[1] + k[2] - i2 - i3, k[1] - i2) /
                                    (binom(k[0] + k[1] + k[2], k[0]) * binom(k[1] + k[2], k[1]));
                            if (B == 0) continue;
                            std::vector<int> beta{k[0] - i1 - 1, k[1] - i2, k[2] - i3};
                            auto it = dcache.find(beta);
                            if (it == dcache.end()) {
                                MultiIndex al;
                                for (std::size_t r = 0; r < role.size(); ++r)
                                    if (beta[r] > 0) al.emplace_back(js.indep[role[r]], beta[r]);
                                Expr d = total_derivative(dH, al, js);
                                if ((beta[0] + beta[1] + beta[2]) % 2) d = -d;
                                it = dcache.emplace(beta, d).first;
                            }
                            MultiIndex I;
                            int is[3] = {i1, i2, i3};
                            for (std::size_t r = 0; r < role.size(); ++r)
                                if (is[r] > 0) I.emplace_back(js.indep[role[r]], is[r]);
                            integrand.push_back(num(B) * jet(dep, I) * it->second);
                        }
            }
        }
        Expr J = add(integrand);
        std::vector<Expr> scaled;
        for (auto& [mono, coef] : terms_of(J)) {
            int d = dep_degree(mono, js);
            if (d == 0) throw Unsupported("homotopy integrand has a dependent-free term");
            scaled.push_back(mono * num(coef / d));
        }
        out.flux.comps.push_back(add(scaled));
    }
    out.residual = divergence(out.flux, js) - H;
    return out;
}

Expr flux_residual(const Expr& P, const FluxVector& C, const JetSpace& js) {
    Expr delta = C.multiplier ? *C.multiplier : Expr(1);
    return divergence(C, js) - delta * P;
}

ZeroVerdict verify_flux(const Expr& P, const FluxVector& C, const JetSpace& js, const ZeroOptions& opt) {
    return is_zero(flux_residual(P, C, js), opt);
}

}  // namespace nlk
