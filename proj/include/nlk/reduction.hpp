#ifndef NLK_REDUCTION_HPP
#define NLK_REDUCTION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nlk/chvar.hpp"
#include "nlk/jet.hpp"
#include "nlk/numeric.hpp"
#include "nlk/vfield.hpp"

namespace nlk {

struct AssociationResult {
    std::vector<Expr> residuals;  // one per flux component
    ZeroVerdict verdict;
    bool associated() const { return verdict.ok(); }
};

// prV(C^i) + C^i D_k xi^k - C^k D_k xi^i for every component, reduced on
// solutions of sys when it has equations.
AssociationResult association_check(const VectorField& V, const FluxVector& C, const PdeSystem& sys,
                                    const ZeroOptions& opt = {});

struct DoubleReduction {
    FluxTransform full;          // all components in the new chart
    std::vector<Expr> reduced;   // same, with jets along the translation coordinate dropped
    std::string translation;
    JetSpace reduced_js;         // new chart without the translation coordinate
};

// Transforms C to the canonical chart of a symmetry and imposes invariance
// (no dependence on the translation coordinate). NonInvariant when it remains.
DoubleReduction double_reduce(const FluxVector& C, const PointTransform& T, const std::string& translation);

// Sum of D_k of the reduced components over the remaining independents.
Expr reduced_divergence(const DoubleReduction& d);

// Closed-form solution: dependent name -> expression in the independents.
using Solution = std::map<std::string, Expr>;

// Rewrites every jet atom of a bound dependent as the matching partial derivative.
Expr apply_solution(const Expr& e, const Solution& sol, const JetSpace& js);

struct SolutionCheck {
    std::vector<Expr> residuals;
    ZeroVerdict verdict;
};

SolutionCheck verify_solution(const PdeSystem& sys, const Solution& sol, const ZeroOptions& opt = {});

struct GridSpec {
    int points = 1000;
    std::uint64_t seed = 42;
    Box box;                                   // per-symbol intervals
    std::pair<double, double> default_box{-1.0, 1.0};
    double guard = 1e-3;                       // minimum |denominator| at accepted points
    double tol = 1e-9;
};

struct GridResult {
    ZeroStatus status = ZeroStatus::Unknown;
    double max_abs = 0.0;
    Point worst;
    int accepted = 0;
    int rejected = 0;
};

// Max |residual| over seeded random points, skipping points near poles.
GridResult grid_residual(const std::vector<Expr>& residuals, const GridSpec& spec);
GridResult grid_residual(const PdeSystem& sys, const Solution& sol, const GridSpec& spec);

// Remainder allowed in the inheritance test: a field along one coordinate
// whose coefficient is annihilated by every listed field.
struct FunctionFamily {
    std::string component;
    std::vector<VectorField> annihilators;
};

struct Inheritance {
    bool inherited = false;
    std::vector<Expr> coeffs;  // constant weights of the projected fields
    Expr remainder;            // coefficient left in the family component
};

// Is target = sum c_k projected_k + (family member) for constants c_k?
Inheritance inheritance(const VectorField& target, const std::vector<VectorField>& projected,
                        const FunctionFamily& family, const std::set<std::string>& space);

}  // namespace nlk

#endif
