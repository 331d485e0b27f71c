#ifndef NLK_NUMERIC_HPP
#define NLK_NUMERIC_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlk/expr.hpp"

namespace nlk {

using Point = std::map<std::string, double>;
using Box = std::map<std::string, std::pair<double, double>>;

// Key used to bind an atom in a Point: the symbol name, or the canonical
// rendering for jet atoms, opaque applications and formal integrals.
std::string atom_key(const Expr& atom);

// Evaluates one expression repeatedly over different bindings of its atoms.
class Evaluator {
public:
    explicit Evaluator(const Expr& e);
    const std::vector<std::string>& keys() const { return keys_; }
    // vals[i] binds keys()[i]. Non-finite results signal a domain error.
    double operator()(const std::vector<double>& vals) const;
    // Same, also returning the sum of absolute values of the top-level terms.
    double eval_scaled(const std::vector<double>& vals, double& scale) const;

private:
    Expr e_;
    std::vector<std::string> keys_;
    std::unordered_map<const Node*, int> slot_;
    double rec(const Expr& e, const std::vector<double>& v) const;
};

// Throws DomainError on unbound atoms or non-finite results. "pi" defaults to M_PI.
double eval_numeric(const Expr& e, const Point& point);

enum class ZeroStatus { SymbolicZero, NumericZero, NonZero, Unknown };
enum class ZeroMode { Symbolic, Numeric, Auto };

const char* to_string(ZeroStatus s);
const char* to_string(ZeroMode m);
ZeroMode parse_mode(const std::string& s);

struct ZeroOptions {
    ZeroMode mode = ZeroMode::Auto;
    std::uint64_t seed = 42;
    int samples = 16;
    double tol = 1e-9;
    Box box;                                   // per-atom sampling interval
    std::pair<double, double> default_box{0.5, 1.5};
};

struct ZeroVerdict {
    ZeroStatus status = ZeroStatus::Unknown;
    double max_abs = 0.0;  // over accepted samples
    Point witness;         // point of max |value| (the NonZero witness)
    double witness_value = 0.0;
    int samples_used = 0;
    std::string note;
    bool ok() const { return status == ZeroStatus::SymbolicZero || status == ZeroStatus::NumericZero; }
};

ZeroVerdict is_zero(const Expr& e, const ZeroOptions& opt = {});

// Combines verdicts of several residuals: the worst status wins.
ZeroVerdict combine(const std::vector<ZeroVerdict>& vs);

// True when the normal form decides zero-ness exactly: no elementary
// functions and no fractional powers of compound bases.
bool exact_class(const Expr& e);

// Deterministic uniform draw in [lo, hi] on a 2^-20 grid.
double draw(std::mt19937_64& rng, double lo, double hi);

}  // namespace nlk

#endif
