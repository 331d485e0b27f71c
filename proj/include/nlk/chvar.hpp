#ifndef NLK_CHVAR_HPP
#define NLK_CHVAR_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlk/jet.hpp"
#include "nlk/linalg.hpp"

namespace nlk {

enum class TransformClass { PureIndependent, Hodograph, Similarity };
const char* to_string(TransformClass c);

class NonInvariant : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Point transformation between two jet spaces with one dependent each side.
struct PointTransform {
    JetSpace old_js;
    JetSpace new_js;
    ExprMap forward;  // new coordinate symbol -> expression in the old coordinates
    ExprMap inverse;  // old coordinate symbol -> expression in the new coordinates
    TransformClass cls = TransformClass::PureIndependent;
};

// Builds the transform and checks forward(inverse) = identity on every new coordinate.
PointTransform make_transform(const JetSpace& old_js, const JetSpace& new_js,
                              const std::map<std::string, std::string>& forward,
                              const std::map<std::string, std::string>& inverse, TransformClass cls,
                              const ParseContext& ctx = {});

struct JacobianData {
    Matrix K;     // K[j][i] = D'_j x^i (rows: new independents, columns: old)
    Matrix Kinv;  // Kinv[i][j] = D_i x'^j
    Expr Y;       // det K
};

Expr determinant(const Matrix& m);
Matrix inverse(const Matrix& m, const Expr& det);

JacobianData jacobian(const PointTransform& T);

// Rewrites old jet atoms and coordinates in the new ones by the chain rule.
Expr transform_expr(const Expr& e, const PointTransform& T);
Expr transform_expr(const Expr& e, const PointTransform& T, const JacobianData& J);

struct FluxTransform {
    FluxVector flux;  // components ordered as T.new_js.indep
    Expr identity_residual;  // Y * Div(C) - Div'(flux), in the new coordinates
};

FluxTransform transform_fluxes(const FluxVector& C, const PointTransform& T);

// Reduction by invariants: new independents given as functions of the old
// independents, each old dependent replaced by a new one depending on the new
// independents only. inverse rewrites the old independents; any old
// independent left over raises NonInvariant.
struct InvariantAnsatz {
    JetSpace old_js;
    JetSpace new_js;
    std::map<std::string, Expr> indep;      // new independent -> expression in old independents
    std::map<std::string, std::string> dep; // old dependent -> new dependent
    ExprMap inverse;
};

Expr reduce_by_invariants(const Expr& e, const InvariantAnsatz& a);

}  // namespace nlk

#endif
