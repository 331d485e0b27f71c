#ifndef NLK_JET_HPP
#define NLK_JET_HPP

#include <optional>
#include <string>
#include <vector>

#include "nlk/expr.hpp"

namespace nlk {

struct JetSpace {
    std::vector<std::string> indep{"x", "y", "t"};
    std::vector<std::string> deps{"u"};

    bool is_dep(const std::string& n) const;
    bool is_indep(const std::string& n) const;
};

// Total derivative D_v.
Expr total_derivative(const Expr& e, const std::string& v, const JetSpace& js);
// D^alpha applied component by component.
Expr total_derivative(const Expr& e, const MultiIndex& alpha, const JetSpace& js);

// Jet atoms (order >= 0) of the given dependent variable occurring anywhere in e.
ExprSet jet_atoms(const Expr& e, const std::string& dep);
// Multi-index of a jet atom (empty for the bare dependent variable).
MultiIndex jet_index(const Expr& atom);
int jet_order(const Expr& atom);
bool is_jet_of(const Expr& atom, const std::string& dep);

// Variational derivative E_dep. Throws Unsupported for formal integrals whose
// body involves the dependent variables.
Expr euler_operator(const Expr& e, const std::string& dep, const JetSpace& js);

struct FluxVector {
    std::vector<std::string> order;  // one independent variable per component
    std::vector<Expr> comps;
    std::optional<Expr> multiplier;

    const Expr& operator[](const std::string& v) const;
};

Expr divergence(const FluxVector& C, const JetSpace& js);

struct Equation {
    Expr lhs;
    Expr rhs;
    Expr lead;    // solved leading jet atom L
    Expr solved;  // R with L = R
    Expr residual() const { return lhs - rhs; }
};

struct PdeSystem {
    JetSpace js;
    std::vector<Equation> eqs;
};

// Solves lhs = rhs for the jet atom lead (which must occur linearly).
Equation make_equation(const Expr& lhs, const Expr& rhs, const Expr& lead);

// Replaces solved leading derivatives and all their prolongations until no
// solved atom remains. Throws Unsupported past the order bound.
Expr reduce_on_solutions(const Expr& e, const PdeSystem& sys, int order_bound = 12);

}  // namespace nlk

#endif
