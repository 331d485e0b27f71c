#include "nlk/vfield.hpp"

#include <set>
#include <sstream>

#include "nlk/linalg.hpp"

namespace nlk {

VectorField::VectorField(std::map<std::string, Expr> c) {
    for (auto& [z, e] : c) set(z, e);
}

const Expr& VectorField::operator[](const std::string& z) const {
    static const Expr zero;
    auto it = c_.find(z);
    return it == c_.end() ? zero : it->second;
}

void VectorField::set(const std::string& z, const Expr& c) {
    if (exact_zero(c)) c_.erase(z);
    else c_[z] = c;
}

Expr VectorField::apply(const Expr& f) const {
    std::vector<Expr> ts;
    for (auto& [z, c] : c_) {
        Expr d = partial(f, sym(z));
        if (!d.is_zero()) ts.push_back(c * d);
    }
    return add(std::move(ts));
}

VectorField VectorField::operator+(const VectorField& o) const {
    VectorField r = *this;
    for (auto& [z, c] : o.c_) r.set(z, r[z] + c);
    return r;
}

VectorField VectorField::operator-(const VectorField& o) const { return *this + o.scaled(Expr(-1)); }

VectorField VectorField::scaled(const Expr& k) const {
    VectorField r;
    for (auto& [z, c] : c_) r.set(z, k * c);
    return r;
}

std::string render(const VectorField& v, RenderStyle style) {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [z, c] : v.coeffs()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << render(c, style) << ")*d/d" << z;
    }
    return os.str();
}

VectorField commutator(const VectorField& v, const VectorField& w) {
    std::set<std::string> keys;
    for (auto& [z, c] : v.coeffs()) keys.insert(z);
    for (auto& [z, c] : w.coeffs()) keys.insert(z);
    VectorField r;
    for (auto& z : keys) r.set(z, v.apply(w[z]) - w.apply(v[z]));
    return r;
}

std::optional<std::vector<Expr>> span_coefficients(const VectorField& f, const std::vector<VectorField>& basis,
                                                   const std::set<std::string>& space) {
    const std::size_t n = basis.size();
    std::set<std::string> keys;
    for (auto& [z, c] : f.coeffs()) keys.insert(z);
    for (auto& b : basis)
        for (auto& [z, c] : b.coeffs()) keys.insert(z);
    auto is_var = depends_on_any(space);
    std::map<std::pair<std::string, Expr>, std::size_t,
             bool (*)(const std::pair<std::string, Expr>&, const std::pair<std::string, Expr>&)>
        rowid([](const std::pair<std::string, Expr>& a, const std::pair<std::string, Expr>& b) {
            if (a.first != b.first) return a.first < b.first;
            return compare(a.second, b.second) < 0;
        });
    Matrix A;
    std::vector<Expr> rhs;
    auto row = [&](const std::string& z, const Expr& mono) -> std::size_t {
        auto it = rowid.find({z, mono});
        if (it != rowid.end()) return it->second;
        rowid.emplace(std::make_pair(z, mono), A.size());
        A.emplace_back(n, Expr(0));
        rhs.emplace_back(0);
        return A.size() - 1;
    };
    for (auto& z : keys) {
        for (std::size_t k = 0; k < n; ++k)
            for (auto& [mono, c] : split_coefficients(basis[k][z], is_var)) {
                std::size_t r = row(z, mono);
                A[r][k] = A[r][k] + c;
            }
        for (auto& [mono, c] : split_coefficients(f[z], is_var)) {
            std::size_t r = row(z, mono);
            rhs[r] = rhs[r] + c;
        }
    }
    if (A.empty()) return std::vector<Expr>(n, Expr(0));
    return solve(A, rhs, n);
}

namespace {
std::set<std::string> space_of(const std::vector<VectorField>& basis) {
    std::set<std::string> s;
    for (auto& b : basis)
        for (auto& [z, c] : b.coeffs()) s.insert(z);
    return s;
}
}  // namespace

std::vector<const Bracket*> StructureTable::nonzero() const {
    std::vector<const Bracket*> out;
    for (auto& b : brackets)
        if (!b.value.is_zero()) out.push_back(&b);
    return out;
}

StructureTable structure_table(const std::vector<VectorField>& basis) {
    StructureTable t;
    t.basis = basis;
    auto space = space_of(basis);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            Bracket b;
            b.i = i;
            b.j = j;
            b.value = commutator(basis[i], basis[j]);
            b.omega = span_coefficients(b.value, basis, space);
            t.brackets.push_back(std::move(b));
        }
    return t;
}

ChainResult validate_chain(const std::vector<VectorField>& ordered) {
    ChainResult res;
    auto space = space_of(ordered);
    for (std::size_t j = 1; j < ordered.size(); ++j) {
        std::vector<VectorField> prefix(ordered.begin(), ordered.begin() + static_cast<long>(j));
        for (std::size_t i = 0; i < j; ++i) {
            Bracket b;
            b.i = i;
            b.j = j;
            b.value = commutator(ordered[i], ordered[j]);
            b.omega = span_coefficients(b.value, prefix, space);
            bool ok = b.omega.has_value();
            res.omegas.push_back(std::move(b));
            if (!ok) {
                res.valid = false;
                res.witness = std::make_pair(i + 1, j + 1);
                return res;
            }
        }
    }
    return res;
}

namespace {

struct Prolonger {
    const VectorField& v;
    const JetSpace& js;
    std::map<std::pair<std::string, MultiIndex>, Expr> memo;

    Expr phi(const std::string& dep, const MultiIndex& alpha) {
        auto key = std::make_pair(dep, alpha);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Expr r;
        if (alpha.empty()) {
            r = v[dep];
        } else {
            MultiIndex prev = alpha;
            std::string last = prev.back().first;
            if (--prev.back().second == 0) prev.pop_back();
            std::vector<Expr> ts{total_derivative(phi(dep, prev), last, js)};
            for (auto& xj : js.indep) {
                Expr dxi = total_derivative(v[xj], last, js);
                if (dxi.is_zero()) continue;
                MultiIndex up = prev;
                up.emplace_back(xj, 1);
                ts.push_back(-dxi * jet(dep, up));
            }
            r = add(std::move(ts));
        }
        memo.emplace(key, r);
        return r;
    }
};

Expr apply_no_int(const VectorField& v, const Expr& e, const JetSpace& js, Prolonger& pr) {
    std::vector<Expr> ts;
    for (auto& [z, c] : v.coeffs()) {
        Expr d = partial(e, sym(z));
        if (!d.is_zero()) ts.push_back(c * d);
    }
    for (auto& dep : js.deps)
        for (const Expr& a : jet_atoms(e, dep)) {
            if (a.kind() != Kind::Jet) continue;
            Expr d = partial(e, a);
            if (d.is_zero()) continue;
            Expr f = pr.phi(dep, a.index());
            if (!f.is_zero()) ts.push_back(f * d);
        }
    return add(std::move(ts));
}

void collect_ints(const Expr& e, ExprSet& out) {
    if (e.kind() == Kind::Int) {
        out.insert(e);
        return;
    }
    for (auto& x : e.node().ops) collect_ints(x, out);
}

}  // namespace

ExprMap prolong(const VectorField& v, int order, const JetSpace& js) {
    Prolonger pr{v, js, {}};
    ExprMap out;
    std::vector<MultiIndex> layer{{}};
    for (int k = 1; k <= order; ++k) {
        std::vector<MultiIndex> next;
        std::set<MultiIndex> seen;
        for (auto& a : layer)
            for (auto& xi : js.indep) {
                MultiIndex b = a;
                b.emplace_back(xi, 1);
                b = canonical_index(b);
                if (seen.insert(b).second) next.push_back(b);
            }
        for (auto& dep : js.deps)
            for (auto& b : next) out.emplace(jet(dep, b), pr.phi(dep, b));
        layer = std::move(next);
    }
    return out;
}

Expr apply_prolonged(const VectorField& v, const Expr& e, const JetSpace& js) {
    Prolonger pr{v, js, {}};
    ExprSet ints;
    collect_ints(e, ints);
    if (ints.empty()) return apply_no_int(v, e, js, pr);
    // Formal integrals are treated as constants when the field leaves them fixed.
    ExprMap hide, unhide;
    int k = 0;
    for (const Expr& I : ints) {
        const Expr& body = I.args()[0];
        const std::string& var = I.args()[1].name();
        ExprSet inner;
        collect_ints(body, inner);
        if (!inner.empty() || !v[var].is_zero() || !exact_zero(apply_no_int(v, body, js, pr)))
            throw Unsupported("prolonged field acting on a formal integral: " + render(I));
        Expr h = sym("_int" + std::to_string(k++));
        hide.emplace(I, h);
        unhide.emplace(h, I);
    }
    return substitute(apply_no_int(v, substitute(e, hide), js, pr), unhide);
}

std::vector<Expr> symmetry_residuals(const VectorField& v, const PdeSystem& sys) {
    std::vector<Expr> out;
    for (auto& q : sys.eqs) out.push_back(reduce_on_solutions(apply_prolonged(v, q.residual(), sys.js), sys));
    return out;
}

ZeroVerdict symmetry_check(const VectorField& v, const PdeSystem& sys, const ZeroOptions& opt) {
    std::vector<ZeroVerdict> vs;
    for (auto& r : symmetry_residuals(v, sys)) vs.push_back(is_zero(r, opt));
    return combine(vs);
}

ZeroVerdict canonical_check(const VectorField& v, const CanonicalCoords& c, const ZeroOptions& opt) {
    std::vector<ZeroVerdict> vs;
    for (auto& e : c.chi) vs.push_back(is_zero(v.apply(e), opt));
    for (auto& e : c.mu) vs.push_back(is_zero(v.apply(e), opt));
    vs.push_back(is_zero(v.apply(c.M) - Expr(1), opt));
    return combine(vs);
}

Projection project_field(const VectorField& v, const std::vector<std::pair<std::string, Expr>>& invariants,
                         const ExprMap& inverse, const std::set<std::string>& original) {
    if (inverse.empty()) throw Unsupported("project_field needs a declared inverse map");
    std::set<std::string> old = original;
    for (auto& [n, I] : invariants) old.erase(n);
    Projection p;
    p.expressible = true;
    std::set<std::string> left;
    for (auto& [n, I] : invariants) {
        Expr c = substitute(v.apply(I), inverse);
        for (auto& o : old)
            if (depends_on_symbol(c, o)) left.insert(o);
        p.field.set(n, c);
    }
    p.left.assign(left.begin(), left.end());
    p.expressible = left.empty();
    return p;
}

}  // namespace nlk
