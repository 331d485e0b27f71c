#ifndef NLK_LINALG_HPP
#define NLK_LINALG_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nlk/expr.hpp"

namespace nlk {

using AtomPredicate = std::function<bool(const Expr&)>;

// Atom is "variable" when it is, or is built from, one of the given names
// (symbols, jet atoms of those dependents, opaque functions of them).
AtomPredicate depends_on_any(std::set<std::string> names);

// Splits e = sum_k coef_k * mono_k where mono_k collects the factors that
// involve variable atoms and coef_k the rest (parameters and numbers).
std::vector<std::pair<Expr, Expr>> split_coefficients(const Expr& e, const AtomPredicate& is_var);

// Constant c (free of variable atoms) with a = c * b, or nullopt.
std::optional<Expr> proportional(const Expr& a, const Expr& b, const AtomPredicate& is_var);

// Exact zero test for rational expressions: normal form, then cleared numerator.
bool exact_zero(const Expr& e);

using Matrix = std::vector<std::vector<Expr>>;

// Reduced row echelon form in place over the field of parameter expressions.
std::vector<std::size_t> rref(Matrix& m, std::size_t ncols);
std::vector<std::vector<Expr>> nullspace(Matrix m, std::size_t ncols);
// Particular solution of A x = b (free unknowns set to 0), or nullopt.
std::optional<std::vector<Expr>> solve(const Matrix& A, const std::vector<Expr>& b, std::size_t ncols);

}  // namespace nlk

#endif
