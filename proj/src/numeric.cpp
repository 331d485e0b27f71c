#include "nlk/numeric.hpp"

#include <cmath>
#include <limits>

namespace nlk {

std::string atom_key(const Expr& atom) {
    if (atom.kind() == Kind::Sym) return atom.name();
    return render(atom);
}

namespace {
void gather(const Expr& e, std::map<Expr, int, ExprLess>& slots, std::unordered_map<const Node*, int>& slot,
            std::vector<std::string>& keys) {
    switch (e.kind()) {
    case Kind::Num: return;
    case Kind::Sym:
    case Kind::Jet:
    case Kind::Func:
    case Kind::Int: {
        if (slot.count(e.get())) return;
        auto it = slots.find(e);
        int id;
        if (it == slots.end()) {
            id = static_cast<int>(keys.size());
            keys.push_back(atom_key(e));
            slots.emplace(e, id);
        } else {
            id = it->second;
        }
        slot.emplace(e.get(), id);
        return;
    }
    default:
        for (auto& x : e.node().ops) gather(x, slots, slot, keys);
    }
}

double apply_elem(const std::string& fn, double a) {
    if (fn == "exp") return std::exp(a);
    if (fn == "ln") return a > 0 ? std::log(a) : std::numeric_limits<double>::quiet_NaN();
    if (fn == "tanh") return std::tanh(a);
    if (fn == "sech") return 1.0 / std::cosh(a);
    if (fn == "erf") return std::erf(a);
    if (fn == "sin") return std::sin(a);
    if (fn == "cos") return std::cos(a);
    if (fn == "sinh") return std::sinh(a);
    if (fn == "cosh") return std::cosh(a);
    return std::numeric_limits<double>::quiet_NaN();
}

double ipow_or_pow(double b, const Expr& ex, double e) {
    if (ex.is_integer() && ex.num().get_num().fits_sint_p()) {
        int k = static_cast<int>(ex.num().get_num().get_si());
        if (b == 0.0 && k < 0) return std::numeric_limits<double>::infinity();
        return std::pow(b, k);
    }
    if (b < 0) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(b, e);
}
}  // namespace

Evaluator::Evaluator(const Expr& e) : e_(e) {
    std::map<Expr, int, ExprLess> slots;
    gather(e, slots, slot_, keys_);
}

double Evaluator::rec(const Expr& e, const std::vector<double>& v) const {
    switch (e.kind()) {
    case Kind::Num: return e.num().get_d();
    case Kind::Sym:
    case Kind::Jet:
    case Kind::Func:
    case Kind::Int: return v[static_cast<std::size_t>(slot_.at(e.get()))];
    case Kind::Elem: return apply_elem(e.name(), rec(e.args()[0], v));
    case Kind::Pow: {
        double ex = rec(e.exponent(), v);
        return ipow_or_pow(rec(e.base(), v), e.exponent(), ex);
    }
    case Kind::Mul: {
        double r = e.num().get_d();
        for (std::size_t i = 0; i < e.nfactors(); ++i) {
            double ex = rec(e.factor_exp(i), v);
            r *= ipow_or_pow(rec(e.factor_base(i), v), e.factor_exp(i), ex);
        }
        return r;
    }
    case Kind::Add: {
        double r = e.num().get_d();
        for (std::size_t i = 0; i < e.nterms(); ++i) r += e.term_coef(i).get_d() * rec(e.term(i), v);
        return r;
    }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double Evaluator::operator()(const std::vector<double>& vals) const { return rec(e_, vals); }

double Evaluator::eval_scaled(const std::vector<double>& vals, double& scale) const {
    if (e_.kind() != Kind::Add) {
        double r = rec(e_, vals);
        scale = std::fabs(r);
        return r;
    }
    double r = e_.num().get_d();
    scale = std::fabs(r);
    for (std::size_t i = 0; i < e_.nterms(); ++i) {
        double t = e_.term_coef(i).get_d() * rec(e_.term(i), vals);
        scale += std::fabs(t);
        r += t;
    }
    return r;
}

double eval_numeric(const Expr& e, const Point& point) {
    Evaluator ev(e);
    std::vector<double> vals;
    for (auto& k : ev.keys()) {
        auto it = point.find(k);
        if (it != point.end()) vals.push_back(it->second);
        else if (k == "pi") vals.push_back(M_PI);
        else throw DomainError("unbound atom " + k);
    }
    double r = ev(vals);
    if (!std::isfinite(r)) throw DomainError("domain error evaluating " + render(e));
    return r;
}

const char* to_string(ZeroStatus s) {
    switch (s) {
    case ZeroStatus::SymbolicZero: return "SymbolicZero";
    case ZeroStatus::NumericZero: return "NumericZero";
    case ZeroStatus::NonZero: return "NonZero";
    case ZeroStatus::Unknown: return "Unknown";
    }
    return "Unknown";
}

const char* to_string(ZeroMode m) {
    switch (m) {
    case ZeroMode::Symbolic: return "symbolic";
    case ZeroMode::Numeric: return "numeric";
    case ZeroMode::Auto: return "auto";
    }
    return "auto";
}

ZeroMode parse_mode(const std::string& s) {
    if (s == "symbolic") return ZeroMode::Symbolic;
    if (s == "numeric") return ZeroMode::Numeric;
    if (s == "auto") return ZeroMode::Auto;
    throw std::invalid_argument("unknown mode '" + s + "' (expected symbolic|numeric|auto)");
}

double draw(std::mt19937_64& rng, double lo, double hi) {
    const double grid = 1048576.0;
    double k = static_cast<double>(rng() % 1048577ULL);
    return lo + (hi - lo) * (k / grid);
}

bool exact_class(const Expr& e) {
    switch (e.kind()) {
    case Kind::Elem: return false;
    case Kind::Func:
    case Kind::Int:
        for (auto& a : e.args())
            if (!exact_class(a)) return false;
        return true;
    case Kind::Pow:
        if (!e.exponent().is_num()) return e.base().kind() != Kind::Add && e.base().kind() != Kind::Mul && exact_class(e.base());
        if (!e.exponent().is_integer() && e.base().kind() != Kind::Sym && e.base().kind() != Kind::Jet &&
            e.base().kind() != Kind::Func)
            return false;
        return exact_class(e.base());
    default:
        for (auto& x : e.node().ops)
            if (!exact_class(x)) return false;
        return true;
    }
}

ZeroVerdict is_zero(const Expr& e, const ZeroOptions& opt) {
    ZeroVerdict v;
    Expr target = e;
    if (opt.mode != ZeroMode::Numeric) {
        if (e.is_zero()) {
            v.status = ZeroStatus::SymbolicZero;
            return v;
        }
        try {
            Expr c = clear_denominators(e);
            if (c.is_zero()) {
                v.status = ZeroStatus::SymbolicZero;
                v.note = "zero after clearing denominators";
                return v;
            }
        } catch (const std::exception&) {
        }
    }
    bool exact = exact_class(e);
    Evaluator ev(target);
    std::mt19937_64 rng(opt.seed);
    int accepted = 0, attempts = 0;
    const int max_attempts = std::max(8, opt.samples * 8);
    double max_scale = 0.0;
    std::vector<double> vals(ev.keys().size());
    while (accepted < opt.samples && attempts < max_attempts) {
        ++attempts;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const std::string& k = ev.keys()[i];
            if (k == "pi") {
                vals[i] = M_PI;
                continue;
            }
            auto it = opt.box.find(k);
            auto [lo, hi] = it == opt.box.end() ? opt.default_box : it->second;
            vals[i] = draw(rng, lo, hi);
        }
        double scale = 0;
        double r = ev.eval_scaled(vals, scale);
        if (!std::isfinite(r) || !std::isfinite(scale)) continue;
        ++accepted;
        max_scale = std::max(max_scale, scale);
        if (std::fabs(r) >= v.max_abs) {
            v.max_abs = std::fabs(r);
            v.witness_value = r;
            v.witness.clear();
            for (std::size_t i = 0; i < vals.size(); ++i) v.witness[ev.keys()[i]] = vals[i];
        }
    }
    v.samples_used = accepted;
    if (opt.mode != ZeroMode::Numeric && exact) {
        v.status = ZeroStatus::NonZero;
        v.note = "normal form is not zero";
        return v;
    }
    if (opt.mode == ZeroMode::Symbolic) {
        v.status = ZeroStatus::Unknown;
        v.note = "normal form not zero; transcendental terms not decided symbolically";
        return v;
    }
    if (accepted < opt.samples) {
        v.status = ZeroStatus::Unknown;
        v.note = "too many sample points outside the domain";
        return v;
    }
    if (v.max_abs < opt.tol) {
        v.status = ZeroStatus::NumericZero;
        return v;
    }
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, max_scale);
    if (v.max_abs <= roundoff) {
        v.status = ZeroStatus::Unknown;
        v.note = "residual above tolerance but within floating-point resolution";
        return v;
    }
    v.status = ZeroStatus::NonZero;
    return v;
}

ZeroVerdict combine(const std::vector<ZeroVerdict>& vs) {
    auto rank = [](ZeroStatus s) {
        switch (s) {
        case ZeroStatus::SymbolicZero: return 0;
        case ZeroStatus::NumericZero: return 1;
        case ZeroStatus::Unknown: return 2;
        case ZeroStatus::NonZero: return 3;
        }
        return 2;
    };
    ZeroVerdict out;
    out.status = ZeroStatus::SymbolicZero;
    for (auto& v : vs) {
        if (rank(v.status) > rank(out.status)) {
            double m = std::max(out.max_abs, v.max_abs);
            out = v;
            out.max_abs = m;
        } else {
            out.max_abs = std::max(out.max_abs, v.max_abs);
        }
        out.samples_used = std::max(out.samples_used, v.samples_used);
    }
    return out;
}

}  // namespace nlk
