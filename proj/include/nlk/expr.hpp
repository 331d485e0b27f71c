#ifndef NLK_EXPR_HPP
#define NLK_EXPR_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlk {

using Rat = mpq_class;

// Node kinds, listed in the order used by the canonical term ordering.
enum class Kind : std::uint8_t { Num, Sym, Jet, Func, Elem, Int, Pow, Mul, Add };

class Expr;
struct Node;

// Multi-index of a jet atom: (independent variable, order) pairs with
// order > 0, sorted by var_less().
using MultiIndex = std::vector<std::pair<std::string, int>>;

class Expr {
public:
    Expr();  // the constant 0
    Expr(int v);
    Expr(long v);
    Expr(const Rat& q);
    explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

    Kind kind() const;
    const Node& node() const { return *p_; }
    const Node* get() const { return p_.get(); }
    std::size_t hash() const;

    bool is_num() const { return kind() == Kind::Num; }
    bool is_sym() const { return kind() == Kind::Sym; }
    bool is_zero() const;
    bool is_one() const;
    bool is_integer() const;
    const Rat& num() const;         // Num value, Mul coefficient, Add constant
    const std::string& name() const;

    // Pow: base/exponent. Mul: factor bases/exponents. Add: terms/coefficients.
    const Expr& base() const;
    const Expr& exponent() const;
    std::size_t nfactors() const;
    const Expr& factor_base(std::size_t i) const;
    const Expr& factor_exp(std::size_t i) const;
    std::size_t nterms() const;
    const Expr& term(std::size_t i) const;
    const Rat& term_coef(std::size_t i) const;
    const std::vector<Expr>& args() const;  // Func args, Elem arg, Int (body, var)
    const MultiIndex& index() const;        // Jet
    const std::vector<int>& orders() const; // Func derivative orders per arg

private:
    std::shared_ptr<const Node> p_;
};

struct Node {
    Kind kind;
    std::size_t hash = 0;
    Rat q;
    std::string name;
    std::vector<Expr> ops;
    std::vector<Rat> coef;
    MultiIndex idx;
    std::vector<int> ord;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& msg)
        : std::runtime_error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }
private:
    std::size_t offset_;
};

// Raised by operations that cannot handle their input (e.g. Euler operator
// over a formal integral of the dependent variable).
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Total order used for canonical sorting. Returns <0, 0, >0.
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};
using ExprMap = std::map<Expr, Expr, ExprLess>;
using ExprSet = std::set<Expr, ExprLess>;

bool var_less(const std::string& a, const std::string& b);
// Merges repeated variables, drops zero orders and sorts by var_less.
MultiIndex canonical_index(const MultiIndex& idx);

// Constructors. All return expressions in normal form.
Expr num(const Rat& q);
Expr num(long p, long q);
Expr sym(const std::string& name);
Expr jet(const std::string& dep, MultiIndex idx);
Expr func(const std::string& name, std::vector<Expr> args, std::vector<int> orders = {});
Expr elem(const std::string& fn, const Expr& arg);
Expr integral(const Expr& body, const std::string& var);
Expr pow(const Expr& base, const Expr& exponent);
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

bool is_elementary(const std::string& fn);
bool is_atom(const Expr& e);  // Sym, Jet, Func, Elem, Int

// Rendering: canonical form uses diff(u,x,2,y,1); compact uses u_xxy when
// every variable name is a single letter.
enum class RenderStyle { Canonical, Compact };
std::string render(const Expr& e, RenderStyle style = RenderStyle::Canonical);

struct ParseContext {
    std::set<std::string> opaque;  // extra opaque function names
    bool allow_default_opaque = true;
};
Expr parse(const std::string& text, const ParseContext& ctx = {});
bool is_declared_opaque(const std::string& name, const ParseContext& ctx);

// Simultaneous replacement of atoms (or any subexpression matched exactly).
Expr substitute(const Expr& e, const ExprMap& bindings);

// Atoms appearing in e (Sym, Jet, Func, Int; Elem applications are traversed).
void collect_atoms(const Expr& e, ExprSet& out);
ExprSet atoms(const Expr& e);
bool contains(const Expr& e, const Expr& atom);
bool depends_on_symbol(const Expr& e, const std::string& name);

// Partial derivative treating every atom as an independent coordinate.
Expr partial(const Expr& e, const Expr& atom);
Expr derivative_of_elementary(const std::string& fn, const Expr& arg);

// Coefficient-wise split of a normalized expression into (monomial, coefficient)
// pairs; the constant part has monomial 1.
std::vector<std::pair<Expr, Rat>> terms_of(const Expr& e);

// Multiply through by powers of sum-denominators so that no negative power of
// a sum remains. Returns the cleared numerator.
Expr clear_denominators(const Expr& e);

}  // namespace nlk

#endif
