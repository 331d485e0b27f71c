#ifndef NLK_VFIELD_HPP
#define NLK_VFIELD_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nlk/jet.hpp"
#include "nlk/numeric.hpp"

namespace nlk {

// Point vector field sum_z coef_z d/dz over the (x,u)-space. Missing entries are 0.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(std::map<std::string, Expr> c);

    const Expr& operator[](const std::string& z) const;
    void set(const std::string& z, const Expr& c);
    const std::map<std::string, Expr>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    // V(F) = sum_z coef_z dF/dz; F is a function on the (x,u)-space.
    Expr apply(const Expr& f) const;

    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField scaled(const Expr& k) const;

private:
    std::map<std::string, Expr> c_;
};

std::string render(const VectorField& v, RenderStyle style = RenderStyle::Canonical);

VectorField commutator(const VectorField& v, const VectorField& w);

// Coefficients of f in span(basis) with constant (parameter-valued) scalars,
// or nullopt. Space variables are the names appearing in the fields and js.
std::optional<std::vector<Expr>> span_coefficients(const VectorField& f, const std::vector<VectorField>& basis,
                                                   const std::set<std::string>& space);

struct Bracket {
    std::size_t i = 0, j = 0;
    VectorField value;
    std::optional<std::vector<Expr>> omega;  // nullopt: not in span
};

struct StructureTable {
    std::vector<VectorField> basis;
    std::vector<Bracket> brackets;  // every pair i < j, zero brackets included
    std::vector<const Bracket*> nonzero() const;
};

StructureTable structure_table(const std::vector<VectorField>& basis);

struct ChainResult {
    bool valid = true;
    std::vector<Bracket> omegas;                      // checked pairs, 0-based indices
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // 1-based first violating pair
};

ChainResult validate_chain(const std::vector<VectorField>& ordered);

// Prolongation coefficients up to the given order for every dependent of js.
ExprMap prolong(const VectorField& v, int order, const JetSpace& js);

// pr V applied to an expression in the jet variables.
Expr apply_prolonged(const VectorField& v, const Expr& e, const JetSpace& js);

// Applies pr V to each equation and reduces on solutions of sys.
ZeroVerdict symmetry_check(const VectorField& v, const PdeSystem& sys, const ZeroOptions& opt = {});
std::vector<Expr> symmetry_residuals(const VectorField& v, const PdeSystem& sys);

struct CanonicalCoords {
    std::vector<Expr> chi;
    std::vector<Expr> mu;
    Expr M;
};

ZeroVerdict canonical_check(const VectorField& v, const CanonicalCoords& c, const ZeroOptions& opt = {});

struct Projection {
    bool expressible = false;
    VectorField field;              // over the invariant names
    std::vector<std::string> left;  // original variables that survived the inverse map
};

// Rewrites V(I_k) in the invariants through a declared inverse map
// (original symbol -> expression in invariant names and any leftover variables).
// original lists the coordinates of the space the field lives on.
Projection project_field(const VectorField& v, const std::vector<std::pair<std::string, Expr>>& invariants,
                         const ExprMap& inverse, const std::set<std::string>& original);

}  // namespace nlk

#endif
