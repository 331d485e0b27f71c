#ifndef NLK_POTENTIAL_HPP
#define NLK_POTENTIAL_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlk/jet.hpp"
#include "nlk/numeric.hpp"
#include "nlk/vfield.hpp"

namespace nlk {

// Exact antiderivative where possible: polynomial-in-var parts and integration
// by parts of c(var) * (jet with a var-derivative) for polynomial c. The rest is
// kept as formal integrals with var-free factors pulled out.
Expr antiderivative(const Expr& e, const std::string& var, const JetSpace& js);

struct PotentialSystem {
    JetSpace js;                     // base independents; deps = base deps + potentials
    Expr P;                          // base PDE residual
    Expr multiplier;                 // the CL the potentials encode: Div C = multiplier * P
    std::vector<std::string> potentials;
    std::vector<Equation> eqs;       // potential equations in solved form
    std::string source;
    Expr compat_residual;            // recorded by the builders
};

// Algebraic gauge omega^3 = 0 and omega^2 = -int C^{x1} dx2. roles = (x1, x2, x3).
// orientation +1 emits { w_x2 = C^x3, w_x3 = -C^x2 - int D_x1 C^x1 dx2 };
// orientation -1 negates the potential and lists the x3 equation first.
// Refuses (invalid_argument) when Div C - multiplier * P is not zero.
PotentialSystem build_rps(const Expr& P, const FluxVector& C, const Expr& multiplier,
                          const std::array<std::string, 3>& roles, const std::string& potential,
                          const JetSpace& base, int orientation = -1, const ZeroOptions& opt = {});

// D_b(A) - D_a(B) - multiplier * P for a two-equation system w_a = A, w_b = B.
Expr compatibility_residual(const PotentialSystem& ps);
ZeroVerdict compatibility_check(const PotentialSystem& ps, const ZeroOptions& opt = {});

// The PDE system made of the base equation(s) and the potential equations.
PdeSystem combined_system(const PdeSystem& base, const std::vector<const PotentialSystem*>& parts);

// Three-equation gauge system omega^3 = 0 for a flux C with roles (x1, x2, x3):
// w2_x2 = -C^x1, w1_x2 = C^x3, w1_x3 = w2_x1 - C^x2.
struct GaugeSystem {
    JetSpace js;
    std::vector<Equation> eqs;
    Expr compat_residual;  // D_x3(C^x3) - D_x2(w2_x1 - C^x2) reduced with the w2 equation
};

GaugeSystem gauge_system(const FluxVector& C, const std::array<std::string, 3>& roles, const std::string& w1,
                         const std::string& w2, const JetSpace& js);

struct NonlocalExtension {
    GaugeSystem ext;
    Expr onshell_residual;  // Div(nlC) reduced on solutions of the base system
    Expr multiplier_residual;  // Div(nlC) - sum Delta_k * (equation residual k)
};

// Extension of a potential system by a nonlocal CL. multipliers pair with base.eqs.
// Refuses (invalid_argument) when no multiplier involves a potential variable.
NonlocalExtension extend_nonlocal(const PdeSystem& base, const std::vector<std::string>& potentials,
                                  const FluxVector& nlC, const std::vector<Expr>& multipliers,
                                  const std::array<std::string, 3>& roles, const std::string& w1,
                                  const std::string& w2);

struct HodographChart {
    std::vector<std::string> chi;  // new independents (in order), e.g. s, r
    std::string w;                 // new independent replacing the dependent
    std::string M;                 // new dependent
    ExprMap coords;                // new name -> original variable
    std::array<std::string, 3> theta{"a", "b", "c"};  // names for M_chi1, M_chi2, M_w
};

struct IpsResult {
    Expr transformed;  // base PDE in the chart, denominators of M_w cleared
    int cleared_power = 0;
    PdeSystem ips;     // curl equations + main equation in theta
    Expr main;         // main equation residual in theta
};

// Hodograph inverse potential system. Unsupported for non-hodograph charts.
IpsResult build_ips_hodograph(const Expr& P, const JetSpace& base, const VectorField& V, const HodographChart& chart,
                              std::optional<Expr> main_lead = std::nullopt, const ZeroOptions& opt = {});

struct ColeHopfPair {
    Expr nu = Expr(1);  // viscosity 1/Re
    std::array<std::string, 2> space{"x", "y"};
    std::string time = "t";
};

std::array<Expr, 2> cole_hopf_forward(const Expr& f, const ColeHopfPair& pair);

struct ColeHopfInverse {
    Expr f;
    ZeroVerdict antiderivative;  // D_var A - mu
    ZeroVerdict round_trip;      // forward(f)[k] - mu
};

ColeHopfInverse cole_hopf_inverse(const Expr& mu, const Expr& A, const ColeHopfPair& pair, int component = 0,
                                  const ZeroOptions& opt = {});

Expr heat_residual(const Expr& f, const ColeHopfPair& pair);

}  // namespace nlk

#endif
