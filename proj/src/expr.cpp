#include "nlk/expr.hpp"

#include <algorithm>
#include <unordered_map>

namespace nlk {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_str(const std::string& s) {
    std::size_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t hash_mpz(mpz_srcptr z) {
    std::size_t h = static_cast<std::size_t>(mpz_sgn(z) + 3);
    std::size_t n = mpz_size(z);
    h = mix(h, n);
    for (std::size_t i = 0; i < n && i < 4; ++i) h = mix(h, mpz_getlimbn(z, i));
    return h;
}

std::size_t hash_rat(const Rat& q) {
    return mix(hash_mpz(q.get_num_mpz_t()), hash_mpz(q.get_den_mpz_t()));
}

void finalize(Node& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 0x51ed27ULL + 17;
    switch (n.kind) {
    case Kind::Num: h = mix(h, hash_rat(n.q)); break;
    case Kind::Sym: h = mix(h, hash_str(n.name)); break;
    case Kind::Jet:
        h = mix(h, hash_str(n.name));
        for (auto& [v, k] : n.idx) h = mix(mix(h, hash_str(v)), static_cast<std::size_t>(k));
        break;
    case Kind::Func:
    case Kind::Elem:
        h = mix(h, hash_str(n.name));
        for (auto& a : n.ops) h = mix(h, a.hash());
        for (int k : n.ord) h = mix(h, static_cast<std::size_t>(k));
        break;
    case Kind::Int:
    case Kind::Pow:
        for (auto& a : n.ops) h = mix(h, a.hash());
        break;
    case Kind::Mul:
        h = mix(h, hash_rat(n.q));
        for (auto& a : n.ops) h = mix(h, a.hash());
        break;
    case Kind::Add:
        h = mix(h, hash_rat(n.q));
        for (std::size_t i = 0; i < n.ops.size(); ++i)
            h = mix(mix(h, n.ops[i].hash()), hash_rat(n.coef[i]));
        break;
    }
    n.hash = h;
}

Expr make(Node&& n) {
    finalize(n);
    return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr raw_num(const Rat& q) {
    Node n;
    n.kind = Kind::Num;
    n.q = q;
    return make(std::move(n));
}

const Expr& zero_expr() {
    static const Expr z = raw_num(Rat(0));
    return z;
}
const Expr& one_expr() {
    static const Expr o = raw_num(Rat(1));
    return o;
}

Expr raw_pow(const Expr& b, const Expr& e) {
    Node n;
    n.kind = Kind::Pow;
    n.ops = {b, e};
    return make(std::move(n));
}

Expr raw_elem(const std::string& fn, const Expr& arg) {
    Node n;
    n.kind = Kind::Elem;
    n.name = fn;
    n.ops = {arg};
    return make(std::move(n));
}

using Pair = std::pair<Expr, Expr>;

// Builds a product node from already-canonical, base-sorted factors.
Expr make_mul_node(const Rat& c, const std::vector<Pair>& pairs) {
    if (c == 0) return zero_expr();
    if (pairs.empty()) return raw_num(c);
    if (c == 1 && pairs.size() == 1) {
        if (pairs[0].second.is_one()) return pairs[0].first;
        return raw_pow(pairs[0].first, pairs[0].second);
    }
    Node n;
    n.kind = Kind::Mul;
    n.q = c;
    for (auto& [b, e] : pairs) {
        n.ops.push_back(b);
        n.ops.push_back(e);
    }
    return make(std::move(n));
}

void factor_pairs(const Expr& e, Rat& c, std::vector<Pair>& out) {
    switch (e.kind()) {
    case Kind::Num: c *= e.num(); break;
    case Kind::Mul:
        c *= e.num();
        for (std::size_t i = 0; i < e.nfactors(); ++i) out.emplace_back(e.factor_base(i), e.factor_exp(i));
        break;
    case Kind::Pow: out.emplace_back(e.base(), e.exponent()); break;
    default: out.emplace_back(e, one_expr()); break;
    }
}

// Splits e into monomial (coefficient 1) and rational coefficient.
std::pair<Expr, Rat> split_coef(const Expr& e) {
    if (e.kind() == Kind::Num) return {one_expr(), e.num()};
    if (e.kind() == Kind::Mul && e.num() != 1) {
        std::vector<Pair> pairs;
        for (std::size_t i = 0; i < e.nfactors(); ++i) pairs.emplace_back(e.factor_base(i), e.factor_exp(i));
        return {make_mul_node(Rat(1), pairs), e.num()};
    }
    return {e, Rat(1)};
}

Expr scale(const Expr& e, const Rat& c) {
    if (c == 0) return zero_expr();
    if (c == 1) return e;
    if (e.kind() == Kind::Num) return raw_num(e.num() * c);
    if (e.kind() == Kind::Add) {
        Node n;
        n.kind = Kind::Add;
        n.q = e.num() * c;
        n.ops = e.node().ops;
        for (auto& k : e.node().coef) n.coef.push_back(k * c);
        return make(std::move(n));
    }
    Rat cc(1);
    std::vector<Pair> pairs;
    factor_pairs(e, cc, pairs);
    return make_mul_node(cc * c, pairs);
}

bool is_atomic_kind(Kind k) {
    return k == Kind::Sym || k == Kind::Jet || k == Kind::Func || k == Kind::Elem || k == Kind::Int;
}

Rat rat_pow(const Rat& b, long k) {
    if (k == 0) return Rat(1);
    if (b == 0) {
        if (k < 0) throw DomainError("division by zero");
        return Rat(0);
    }
    unsigned long ak = static_cast<unsigned long>(k < 0 ? -k : k);
    mpz_class nn, dd;
    mpz_pow_ui(nn.get_mpz_t(), b.get_num_mpz_t(), ak);
    mpz_pow_ui(dd.get_mpz_t(), b.get_den_mpz_t(), ak);
    Rat r(nn, dd);
    r.canonicalize();
    if (k < 0) r = 1 / r;
    return r;
}

bool rat_is_int(const Rat& q) { return q.get_den() == 1; }

bool fits_long(const Rat& q) { return rat_is_int(q) && q.get_num().fits_slong_p(); }

mpz_class rat_floor(const Rat& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

// Exact q-th root of a positive integer, or false.
bool exact_root(const mpz_class& z, unsigned long q, mpz_class& out) {
    if (z < 0) return false;
    return mpz_root(out.get_mpz_t(), z.get_mpz_t(), q) != 0;
}

int leading_sign(const Expr& e) {
    switch (e.kind()) {
    case Kind::Num: return sgn(e.num());
    case Kind::Mul: return sgn(e.num());
    case Kind::Add:
        if (e.nterms() > 0) return sgn(e.term_coef(0));
        return sgn(e.num());
    default: return 1;
    }
}

Expr expand_product(const Expr& a, const Expr& b) {
    std::vector<Expr> ta, tb, out;
    auto items = [](const Expr& s, std::vector<Expr>& v) {
        if (s.kind() == Kind::Add) {
            if (s.num() != 0) v.push_back(raw_num(s.num()));
            for (std::size_t i = 0; i < s.nterms(); ++i) v.push_back(scale(s.term(i), s.term_coef(i)));
        } else {
            v.push_back(s);
        }
    };
    items(a, ta);
    items(b, tb);
    out.reserve(ta.size() * tb.size());
    for (auto& x : ta)
        for (auto& y : tb) out.push_back(mul({x, y}));
    return add(std::move(out));
}

const std::set<std::string>& odd_fns() {
    static const std::set<std::string> s = {"tanh", "sinh", "sin", "erf"};
    return s;
}
const std::set<std::string>& even_fns() {
    static const std::set<std::string> s = {"cosh", "sech", "cos"};
    return s;
}

}  // namespace

// ---------------------------------------------------------------- Expr

Expr::Expr() : p_(zero_expr().p_) {}
Expr::Expr(int v) : Expr(static_cast<long>(v)) {}
Expr::Expr(long v) {
    if (v == 0) p_ = zero_expr().p_;
    else if (v == 1) p_ = one_expr().p_;
    else p_ = raw_num(Rat(v)).p_;
}
Expr::Expr(const Rat& q) : p_(raw_num(q).p_) {}

Kind Expr::kind() const { return p_->kind; }
std::size_t Expr::hash() const { return p_->hash; }
bool Expr::is_zero() const { return p_->kind == Kind::Num && p_->q == 0; }
bool Expr::is_one() const { return p_->kind == Kind::Num && p_->q == 1; }
bool Expr::is_integer() const { return p_->kind == Kind::Num && rat_is_int(p_->q); }
const Rat& Expr::num() const { return p_->q; }
const std::string& Expr::name() const { return p_->name; }
const Expr& Expr::base() const { return p_->ops[0]; }
const Expr& Expr::exponent() const { return p_->ops[1]; }
std::size_t Expr::nfactors() const { return p_->ops.size() / 2; }
const Expr& Expr::factor_base(std::size_t i) const { return p_->ops[2 * i]; }
const Expr& Expr::factor_exp(std::size_t i) const { return p_->ops[2 * i + 1]; }
std::size_t Expr::nterms() const { return p_->ops.size(); }
const Expr& Expr::term(std::size_t i) const { return p_->ops[i]; }
const Rat& Expr::term_coef(std::size_t i) const { return p_->coef[i]; }
const std::vector<Expr>& Expr::args() const { return p_->ops; }
const MultiIndex& Expr::index() const { return p_->idx; }
const std::vector<int>& Expr::orders() const { return p_->ord; }

// ---------------------------------------------------------------- ordering

bool var_less(const std::string& a, const std::string& b) {
    auto rank = [](const std::string& s) {
        if (s == "x") return 0;
        if (s == "y") return 1;
        if (s == "t") return 2;
        return 3;
    };
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
}

namespace {
int cmp_rat(const Rat& a, const Rat& b) { return cmp(a, b) < 0 ? -1 : (cmp(a, b) > 0 ? 1 : 0); }
int cmp_str(const std::string& a, const std::string& b) { return a < b ? -1 : (b < a ? 1 : 0); }
int cmp_ops(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare(a[i], b[i]);
        if (c) return c;
    }
    return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}
}  // namespace

int compare(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
    switch (x.kind) {
    case Kind::Num: return cmp_rat(x.q, y.q);
    case Kind::Sym:
        if (x.name == y.name) return 0;
        return var_less(x.name, y.name) ? -1 : 1;
    case Kind::Jet: {
        if (int c = cmp_str(x.name, y.name)) return c;
        std::size_t n = std::min(x.idx.size(), y.idx.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (x.idx[i].first != y.idx[i].first) return var_less(x.idx[i].first, y.idx[i].first) ? -1 : 1;
            if (x.idx[i].second != y.idx[i].second) return x.idx[i].second < y.idx[i].second ? -1 : 1;
        }
        return x.idx.size() < y.idx.size() ? -1 : (x.idx.size() > y.idx.size() ? 1 : 0);
    }
    case Kind::Func:
    case Kind::Elem: {
        if (int c = cmp_str(x.name, y.name)) return c;
        if (int c = cmp_ops(x.ops, y.ops)) return c;
        if (x.ord != y.ord) return x.ord < y.ord ? -1 : 1;
        return 0;
    }
    case Kind::Int:
    case Kind::Pow: return cmp_ops(x.ops, y.ops);
    case Kind::Mul: {
        if (x.hash == y.hash && x.q == y.q && cmp_ops(x.ops, y.ops) == 0) return 0;
        if (int c = cmp_ops(x.ops, y.ops)) return c;
        return cmp_rat(x.q, y.q);
    }
    case Kind::Add: {
        if (int c = cmp_ops(x.ops, y.ops)) return c;
        for (std::size_t i = 0; i < x.coef.size(); ++i)
            if (int c = cmp_rat(x.coef[i], y.coef[i])) return c;
        return cmp_rat(x.q, y.q);
    }
    }
    return 0;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a.hash() != b.hash()) return false;
    return compare(a, b) == 0;
}

// ---------------------------------------------------------------- builders

Expr num(const Rat& q) {
    if (q == 0) return zero_expr();
    if (q == 1) return one_expr();
    Rat c(q);
    c.canonicalize();
    return raw_num(c);
}

Expr num(long p, long q) {
    if (q == 0) throw DomainError("division by zero");
    return num(Rat(p, q));
}

Expr sym(const std::string& name) {
    Node n;
    n.kind = Kind::Sym;
    n.name = name;
    return make(std::move(n));
}

MultiIndex canonical_index(const MultiIndex& idx) {
    std::map<std::string, int, bool (*)(const std::string&, const std::string&)> acc(var_less);
    for (auto& [v, k] : idx) {
        if (k < 0) throw std::invalid_argument("negative derivative order for " + v);
        acc[v] += k;
    }
    MultiIndex clean;
    for (auto& [v, k] : acc)
        if (k > 0) clean.emplace_back(v, k);
    return clean;
}

Expr jet(const std::string& dep, MultiIndex idx) {
    MultiIndex clean = canonical_index(idx);
    if (clean.empty()) return sym(dep);
    Node n;
    n.kind = Kind::Jet;
    n.name = dep;
    n.idx = std::move(clean);
    return make(std::move(n));
}

Expr func(const std::string& name, std::vector<Expr> args, std::vector<int> orders) {
    if (orders.empty()) orders.assign(args.size(), 0);
    if (orders.size() != args.size()) throw std::invalid_argument("derivative orders do not match arguments of " + name);
    for (int k : orders)
        if (k < 0) throw std::invalid_argument("negative derivative order for " + name);
    Node n;
    n.kind = Kind::Func;
    n.name = name;
    n.ops = std::move(args);
    n.ord = std::move(orders);
    return make(std::move(n));
}

bool is_elementary(const std::string& fn) {
    static const std::set<std::string> s = {"exp", "ln", "tanh", "sech", "sqrt", "erf",
                                            "sin", "cos", "cosh", "sinh"};
    return s.count(fn) > 0;
}

bool is_atom(const Expr& e) { return is_atomic_kind(e.kind()); }

Expr elem(const std::string& fn, const Expr& arg) {
    if (fn == "sqrt") return pow(arg, num(1, 2));
    if (!is_elementary(fn)) throw std::invalid_argument("unknown elementary function " + fn);
    if (fn == "exp") {
        // exp(c0 + sum c_i m_i) = exp(1)^c0 * prod exp(m_i)^c_i, with exp(k ln A) = A^k
        std::vector<Expr> fs;
        for (auto& [m, c] : terms_of(arg)) {
            if (m.is_one()) {
                fs.push_back(pow(raw_elem("exp", one_expr()), num(c)));
            } else if (m.kind() == Kind::Elem && m.name() == "ln") {
                fs.push_back(pow(m.args()[0], num(c)));
            } else {
                fs.push_back(pow(raw_elem("exp", m), num(c)));
            }
        }
        return mul(std::move(fs));
    }
    if (fn == "ln") {
        if (arg.is_one()) return zero_expr();
        if (arg.kind() == Kind::Elem && arg.name() == "exp") return arg.args()[0];
        if (arg.kind() == Kind::Pow && arg.exponent().is_num()) return arg.exponent() * elem("ln", arg.base());
        return raw_elem(fn, arg);
    }
    if (odd_fns().count(fn)) {
        if (arg.is_zero()) return zero_expr();
        if (leading_sign(arg) < 0) return -raw_elem(fn, -arg);
        return raw_elem(fn, arg);
    }
    if (even_fns().count(fn)) {
        if (arg.is_zero()) return one_expr();
        if (leading_sign(arg) < 0) return raw_elem(fn, -arg);
        return raw_elem(fn, arg);
    }
    return raw_elem(fn, arg);
}

Expr integral(const Expr& body, const std::string& var) {
    if (body.is_zero()) return zero_expr();
    Node n;
    n.kind = Kind::Int;
    n.ops = {body, sym(var)};
    return make(std::move(n));
}

Expr pow(const Expr& b, const Expr& e) {
    if (e.is_zero()) return one_expr();
    if (e.is_one()) return b;
    switch (b.kind()) {
    case Kind::Num: {
        const Rat& q = b.num();
        if (q == 1) return one_expr();
        if (q == 0) {
            if (e.is_num()) {
                if (e.num() > 0) return zero_expr();
                throw DomainError("division by zero");
            }
            return raw_pow(b, e);
        }
        if (!e.is_num()) return raw_pow(b, e);
        const Rat& k = e.num();
        if (fits_long(k)) return raw_num(rat_pow(q, k.get_num().get_si()));
        mpz_class fl = rat_floor(k);
        Rat frac = k - Rat(fl);
        Rat whole = fl.fits_slong_p() ? rat_pow(q, fl.get_si()) : Rat(1);
        if (!fl.fits_slong_p()) return raw_pow(b, e);
        unsigned long den = frac.get_den().get_ui();
        mpz_class rn, rd;
        if (q > 0 && exact_root(q.get_num(), den, rn) && exact_root(q.get_den(), den, rd)) {
            Rat root(rn, rd);
            root.canonicalize();
            return num(whole * rat_pow(root, frac.get_num().get_si()));
        }
        if (whole == 1) return raw_pow(b, num(frac));
        return mul({raw_num(whole), raw_pow(b, num(frac))});
    }
    case Kind::Pow: return pow(b.base(), b.exponent() * e);
    case Kind::Mul: {
        if (!e.is_num() || !fits_long(e.num())) {
            // exp factors are positive, so they split off under any exponent
            std::vector<Expr> pos, rest{raw_num(b.num())};
            for (std::size_t i = 0; i < b.nfactors(); ++i) {
                const Expr& f = b.factor_base(i);
                bool positive = f.kind() == Kind::Elem && f.name() == "exp";
                (positive ? pos : rest).push_back(pow(f, b.factor_exp(i)));
            }
            if (!pos.empty()) {
                for (auto& f : pos) f = pow(f, e);
                pos.push_back(pow(mul(std::move(rest)), e));
                return mul(std::move(pos));
            }
        }
        if (!e.is_num()) return raw_pow(b, e);
        const Rat& k = e.num();
        if (fits_long(k)) {
            std::vector<Expr> fs;
            fs.push_back(raw_num(rat_pow(b.num(), k.get_num().get_si())));
            for (std::size_t i = 0; i < b.nfactors(); ++i) fs.push_back(pow(b.factor_base(i), b.factor_exp(i) * e));
            return mul(std::move(fs));
        }
        mpz_class fl = rat_floor(k);
        Rat frac = k - Rat(fl);
        if (fl == 0) return raw_pow(b, e);
        return mul({pow(b, num(Rat(fl))), raw_pow(b, num(frac))});
    }
    case Kind::Add: {
        if (!e.is_num()) return raw_pow(b, e);
        const Rat& k = e.num();
        if (fits_long(k)) {
            long kk = k.get_num().get_si();
            if (kk > 0) {
                if (kk > 64) throw Unsupported("power of a sum too large to expand");
                Expr r = b;
                for (long i = 1; i < kk; ++i) r = expand_product(r, b);
                return r;
            }
            Rat lead = b.nterms() > 0 ? b.term_coef(0) : Rat(1);
            if (lead != 1) {
                Expr s = scale(b, 1 / lead);
                return mul({raw_num(rat_pow(lead, kk)), raw_pow(s, e)});
            }
        }
        return raw_pow(b, e);
    }
    default: return raw_pow(b, e);
    }
}

Expr add(std::vector<Expr> ts) {
    Rat c0(0);
    std::vector<std::pair<Expr, Rat>> terms;
    terms.reserve(ts.size());
    for (auto& t : ts) {
        switch (t.kind()) {
        case Kind::Num: c0 += t.num(); break;
        case Kind::Add:
            c0 += t.num();
            for (std::size_t i = 0; i < t.nterms(); ++i) terms.emplace_back(t.term(i), t.term_coef(i));
            break;
        default: terms.push_back(split_coef(t)); break;
        }
    }
    std::sort(terms.begin(), terms.end(), [](auto& a, auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<std::pair<Expr, Rat>> merged;
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().first == t.first) merged.back().second += t.second;
        else merged.push_back(std::move(t));
    }
    Node n;
    n.kind = Kind::Add;
    n.q = c0;
    for (auto& [m, c] : merged) {
        if (c == 0) continue;
        n.ops.push_back(m);
        n.coef.push_back(c);
    }
    if (n.ops.empty()) return num(c0);
    if (n.ops.size() == 1 && c0 == 0) return scale(n.ops[0], n.coef[0]);
    return make(std::move(n));
}

Expr mul(std::vector<Expr> fs) {
    Rat c(1);
    std::vector<Pair> pairs;
    std::vector<Expr> sums;
    for (auto& f : fs) {
        if (f.is_zero()) return zero_expr();
        factor_pairs(f, c, pairs);
    }
    for (int pass = 0;; ++pass) {
        if (pass > 64) throw Unsupported("product normalization did not stabilize");
        std::sort(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return compare(a.first, b.first) < 0; });
        std::vector<Pair> merged;
        for (auto& p : pairs) {
            if (!merged.empty() && merged.back().first == p.first)
                merged.back().second = merged.back().second + p.second;
            else merged.push_back(std::move(p));
        }
        std::vector<Pair> next;
        bool changed = false;
        for (auto& [b, e] : merged) {
            if (e.is_zero()) continue;
            if (is_atomic_kind(b.kind())) {
                next.emplace_back(b, e);
                continue;
            }
            Expr r = pow(b, e);
            switch (r.kind()) {
            case Kind::Num: c *= r.num(); break;
            case Kind::Add: sums.push_back(r); break;
            case Kind::Pow:
                if (r.base() == b && r.exponent() == e) next.emplace_back(b, e);
                else {
                    next.emplace_back(r.base(), r.exponent());
                    changed = true;
                }
                break;
            case Kind::Mul:
                factor_pairs(r, c, next);
                changed = true;
                break;
            default:
                next.emplace_back(r, one_expr());
                changed = true;
                break;
            }
        }
        pairs = std::move(next);
        if (c == 0) return zero_expr();
        if (!changed) break;
    }
    Expr core = make_mul_node(c, pairs);
    for (auto& s : sums) core = expand_product(core, s);
    return core;
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_num() && b.is_num()) return num(a.num() + b.num());
    return add({a, b});
}
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return zero_expr();
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.is_num() && b.is_num()) return num(a.num() * b.num());
    if (a.is_num() && b.kind() != Kind::Add) return scale(b, a.num());
    if (b.is_num() && a.kind() != Kind::Add) return scale(a, b.num());
    if (a.is_num()) return scale(b, a.num());
    if (b.is_num()) return scale(a, b.num());
    return mul({a, b});
}
Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    if (b.is_num()) return a * num(1 / b.num());
    return a * pow(b, Expr(-1));
}
Expr operator-(const Expr& a) { return scale(a, Rat(-1)); }
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

// ---------------------------------------------------------------- traversal

std::vector<std::pair<Expr, Rat>> terms_of(const Expr& e) {
    std::vector<std::pair<Expr, Rat>> out;
    if (e.kind() == Kind::Add) {
        if (e.num() != 0) out.emplace_back(one_expr(), e.num());
        for (std::size_t i = 0; i < e.nterms(); ++i) out.emplace_back(e.term(i), e.term_coef(i));
        return out;
    }
    if (e.is_zero()) return out;
    out.push_back(split_coef(e));
    return out;
}

namespace {
Expr subst_rec(const Expr& e, const ExprMap& b, std::unordered_map<const Node*, std::pair<Expr, Expr>>& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second.second;
    Expr r;
    switch (e.kind()) {
    case Kind::Num: r = e; break;
    case Kind::Sym:
    case Kind::Jet: {
        auto f = b.find(e);
        r = f == b.end() ? e : f->second;
        break;
    }
    case Kind::Func: {
        auto f = b.find(e);
        if (f != b.end()) { r = f->second; break; }
        std::vector<Expr> a;
        for (auto& x : e.args()) a.push_back(subst_rec(x, b, memo));
        r = func(e.name(), a, e.orders());
        break;
    }
    case Kind::Elem: {
        auto f = b.find(e);
        if (f != b.end()) { r = f->second; break; }
        r = elem(e.name(), subst_rec(e.args()[0], b, memo));
        break;
    }
    case Kind::Int: {
        auto f = b.find(e);
        if (f != b.end()) { r = f->second; break; }
        r = integral(subst_rec(e.args()[0], b, memo), e.args()[1].name());
        break;
    }
    case Kind::Pow: r = pow(subst_rec(e.base(), b, memo), subst_rec(e.exponent(), b, memo)); break;
    case Kind::Mul: {
        std::vector<Expr> fs;
        fs.push_back(num(e.num()));
        for (std::size_t i = 0; i < e.nfactors(); ++i)
            fs.push_back(pow(subst_rec(e.factor_base(i), b, memo), subst_rec(e.factor_exp(i), b, memo)));
        r = mul(std::move(fs));
        break;
    }
    case Kind::Add: {
        std::vector<Expr> ts;
        ts.push_back(num(e.num()));
        for (std::size_t i = 0; i < e.nterms(); ++i) ts.push_back(subst_rec(e.term(i), b, memo) * num(e.term_coef(i)));
        r = add(std::move(ts));
        break;
    }
    }
    memo.emplace(e.get(), std::make_pair(e, r));
    return r;
}
}  // namespace

Expr substitute(const Expr& e, const ExprMap& bindings) {
    if (bindings.empty()) return e;
    std::unordered_map<const Node*, std::pair<Expr, Expr>> memo;
    return subst_rec(e, bindings, memo);
}

void collect_atoms(const Expr& e, ExprSet& out) {
    switch (e.kind()) {
    case Kind::Num: return;
    case Kind::Sym:
    case Kind::Jet:
    case Kind::Func:
    case Kind::Int: out.insert(e); return;
    case Kind::Elem: collect_atoms(e.args()[0], out); return;
    default:
        for (auto& x : e.node().ops) collect_atoms(x, out);
    }
}

ExprSet atoms(const Expr& e) {
    ExprSet s;
    collect_atoms(e, s);
    return s;
}

bool contains(const Expr& e, const Expr& atom) {
    if (e == atom) return true;
    for (auto& x : e.node().ops)
        if (contains(x, atom)) return true;
    return false;
}

bool depends_on_symbol(const Expr& e, const std::string& name) {
    if (e.kind() == Kind::Sym) return e.name() == name;
    for (auto& x : e.node().ops)
        if (depends_on_symbol(x, name)) return true;
    return false;
}

Expr derivative_of_elementary(const std::string& fn, const Expr& a) {
    if (fn == "exp") return elem("exp", a);
    if (fn == "ln") return pow(a, Expr(-1));
    if (fn == "tanh") return pow(elem("sech", a), Expr(2));
    if (fn == "sech") return -(elem("sech", a) * elem("tanh", a));
    if (fn == "sin") return elem("cos", a);
    if (fn == "cos") return -elem("sin", a);
    if (fn == "sinh") return elem("cosh", a);
    if (fn == "cosh") return elem("sinh", a);
    if (fn == "erf") return num(2) * pow(sym("pi"), num(-1, 2)) * elem("exp", -(a * a));
    throw std::invalid_argument("no derivative rule for " + fn);
}

Expr partial(const Expr& e, const Expr& atom) {
    if (e == atom) return one_expr();
    switch (e.kind()) {
    case Kind::Num:
    case Kind::Sym:
    case Kind::Jet: return zero_expr();
    case Kind::Func: {
        std::vector<Expr> ts;
        for (std::size_t k = 0; k < e.args().size(); ++k) {
            Expr da = partial(e.args()[k], atom);
            if (da.is_zero()) continue;
            auto ord = e.orders();
            ord[k] += 1;
            ts.push_back(func(e.name(), e.args(), ord) * da);
        }
        return add(std::move(ts));
    }
    case Kind::Elem: {
        Expr da = partial(e.args()[0], atom);
        if (da.is_zero()) return zero_expr();
        return derivative_of_elementary(e.name(), e.args()[0]) * da;
    }
    case Kind::Int:
        if (contains(e.args()[0], atom))
            throw Unsupported("partial derivative through a formal integral: " + render(e));
        return zero_expr();
    case Kind::Pow: {
        const Expr& B = e.base();
        const Expr& E = e.exponent();
        Expr dB = partial(B, atom);
        Expr dE = partial(E, atom);
        if (dE.is_zero()) {
            if (dB.is_zero()) return zero_expr();
            return E * pow(B, E - Expr(1)) * dB;
        }
        return e * (dE * elem("ln", B) + E * dB / B);
    }
    case Kind::Mul: {
        std::vector<Expr> ts;
        std::size_t n = e.nfactors();
        for (std::size_t i = 0; i < n; ++i) {
            Expr fi = pow(e.factor_base(i), e.factor_exp(i));
            Expr d = partial(fi, atom);
            if (d.is_zero()) continue;
            std::vector<Expr> fs;
            fs.push_back(num(e.num()));
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) fs.push_back(pow(e.factor_base(j), e.factor_exp(j)));
            fs.push_back(d);
            ts.push_back(mul(std::move(fs)));
        }
        return add(std::move(ts));
    }
    case Kind::Add: {
        std::vector<Expr> ts;
        for (std::size_t i = 0; i < e.nterms(); ++i) {
            Expr d = partial(e.term(i), atom);
            if (!d.is_zero()) ts.push_back(d * num(e.term_coef(i)));
        }
        return add(std::move(ts));
    }
    }
    return zero_expr();
}

Expr clear_denominators(const Expr& e) {
    Expr cur = e;
    for (int round = 0; round < 16; ++round) {
        std::map<Expr, Rat, ExprLess> need;
        for (auto& [m, c] : terms_of(cur)) {
            std::vector<Pair> pairs;
            Rat cc(1);
            factor_pairs(m, cc, pairs);
            for (auto& [b, x] : pairs) {
                if (b.kind() == Kind::Add && x.is_num() && x.num() < 0) {
                    Rat k = -x.num();
                    auto it = need.find(b);
                    if (it == need.end() || it->second < k) need[b] = k;
                }
            }
        }
        if (need.empty()) return cur;
        std::vector<Expr> ts;
        for (auto& [m, c] : terms_of(cur)) {
            std::vector<Expr> fs{m, num(c)};
            for (auto& [b, k] : need) fs.push_back(raw_pow(b, num(k)));
            ts.push_back(mul(std::move(fs)));
        }
        cur = add(std::move(ts));
    }
    return cur;
}

}  // namespace nlk
