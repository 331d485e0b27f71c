#ifndef NLK_CONSLAW_HPP
#define NLK_CONSLAW_HPP

#include <string>
#include <vector>

#include "nlk/jet.hpp"
#include "nlk/numeric.hpp"

namespace nlk {

// E_u(delta * P) for every dependent variable of js.
std::vector<Expr> multiplier_residuals(const Expr& P, const Expr& delta, const JetSpace& js);
ZeroVerdict verify_multiplier(const Expr& P, const Expr& delta, const JetSpace& js, const ZeroOptions& opt = {});

struct MultiplierAnsatz {
    std::vector<Expr> basis;
};

// Basis of the multipliers sum c_i m_i (c_i constants, possibly depending on
// parameters) for which E_u(multiplier * P) vanishes identically.
std::vector<Expr> multiplier_search(const Expr& P, const MultiplierAnsatz& ansatz, const JetSpace& js);

struct HomotopyResult {
    FluxVector flux;
    Expr residual;  // Div(flux) - H
};

// Flux reconstruction by the homotopy operator. H must be polynomial in the
// jet variables of the dependents with no dependent-free part.
HomotopyResult homotopy_flux(const Expr& H, const JetSpace& js);

// Div(C) - multiplier * P.
Expr flux_residual(const Expr& P, const FluxVector& C, const JetSpace& js);
ZeroVerdict verify_flux(const Expr& P, const FluxVector& C, const JetSpace& js, const ZeroOptions& opt = {});

}  // namespace nlk

#endif
