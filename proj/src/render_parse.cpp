#include <cctype>
#include <sstream>

#include "nlk/expr.hpp"

namespace nlk {

namespace {

std::string rat_str(const Rat& q) { return q.get_str(); }

bool single_letters(const MultiIndex& idx) {
    for (auto& [v, k] : idx)
        if (v.size() != 1) return false;
    return true;
}

bool distinct_sym_args(const Expr& f) {
    ExprSet seen;
    for (auto& a : f.args()) {
        if (a.kind() != Kind::Sym || !seen.insert(a).second) return false;
    }
    return true;
}

std::string render_rec(const Expr& e, RenderStyle st);

std::string render_base(const Expr& b, RenderStyle st) {
    switch (b.kind()) {
    case Kind::Sym:
    case Kind::Jet:
    case Kind::Func:
    case Kind::Elem:
    case Kind::Int: return render_rec(b, st);
    case Kind::Num:
        if (b.num() > 0 && b.num().get_den() == 1) return rat_str(b.num());
        return "(" + render_rec(b, st) + ")";
    default: return "(" + render_rec(b, st) + ")";
    }
}

std::string render_pow(const Expr& b, const Expr& e, RenderStyle st) {
    if (e.is_one()) return render_base(b, st);
    std::string s = render_base(b, st) + "^";
    if (e.is_num() && e.num() > 0 && e.num().get_den() == 1) return s + rat_str(e.num());
    if (e.kind() == Kind::Sym) return s + e.name();
    return s + "(" + render_rec(e, st) + ")";
}

std::string render_func(const Expr& e, RenderStyle st) {
    std::string call = e.name() + "(";
    for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) call += ",";
        call += render_rec(e.args()[i], st);
    }
    call += ")";
    bool any = false;
    for (int k : e.orders()) any = any || k > 0;
    if (!any) return call;
    if (distinct_sym_args(e)) {
        bool letters = true;
        for (auto& a : e.args()) letters = letters && a.name().size() == 1;
        if (st == RenderStyle::Compact && letters) {
            std::string sub;
            for (std::size_t i = 0; i < e.args().size(); ++i) sub += std::string(e.orders()[i], e.args()[i].name()[0]);
            return e.name() + "_" + sub + call.substr(e.name().size());
        }
        std::string s = "diff(" + call;
        for (std::size_t i = 0; i < e.args().size(); ++i)
            if (e.orders()[i] > 0) s += "," + e.args()[i].name() + "," + std::to_string(e.orders()[i]);
        return s + ")";
    }
    std::string s = "fdiff(" + call;
    for (int k : e.orders()) s += "," + std::to_string(k);
    return s + ")";
}

std::string render_rec(const Expr& e, RenderStyle st) {
    switch (e.kind()) {
    case Kind::Num: return rat_str(e.num());
    case Kind::Sym: return e.name();
    case Kind::Jet: {
        if (st == RenderStyle::Compact && single_letters(e.index())) {
            std::string s = e.name() + "_";
            for (auto& [v, k] : e.index()) s += std::string(k, v[0]);
            return s;
        }
        std::string s = "diff(" + e.name();
        for (auto& [v, k] : e.index()) s += "," + v + "," + std::to_string(k);
        return s + ")";
    }
    case Kind::Func: return render_func(e, st);
    case Kind::Elem: return e.name() + "(" + render_rec(e.args()[0], st) + ")";
    case Kind::Int: return "int(" + render_rec(e.args()[0], st) + "," + e.args()[1].name() + ")";
    case Kind::Pow: return render_pow(e.base(), e.exponent(), st);
    case Kind::Mul: {
        std::string s;
        const Rat& c = e.num();
        if (c == -1) s = "-";
        else if (c != 1) s = rat_str(c) + "*";
        for (std::size_t i = 0; i < e.nfactors(); ++i) {
            if (i) s += "*";
            s += render_pow(e.factor_base(i), e.factor_exp(i), st);
        }
        return s;
    }
    case Kind::Add: {
        std::string s;
        auto append = [&](const std::string& t) {
            if (s.empty()) s = t;
            else if (t[0] == '-') s += " - " + t.substr(1);
            else s += " + " + t;
        };
        for (std::size_t i = 0; i < e.nterms(); ++i) append(render_rec(e.term(i) * num(e.term_coef(i)), st));
        if (e.num() != 0) append(rat_str(e.num()));
        return s;
    }
    }
    return "?";
}

// ---------------------------------------------------------------- parser

class Parser {
public:
    Parser(const std::string& s, const ParseContext& ctx) : s_(s), ctx_(ctx) {}

    Expr run() {
        skip();
        if (pos_ >= s_.size()) throw ParseError(pos_, "syntax error: empty expression");
        Expr e = sum();
        skip();
        if (pos_ < s_.size()) throw ParseError(pos_, std::string("syntax error: unexpected '") + s_[pos_] + "'");
        return e;
    }

private:
    const std::string& s_;
    const ParseContext& ctx_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c)) {
            if (pos_ >= s_.size()) throw ParseError(pos_, std::string("syntax error: expected '") + c + "' before end of input");
            throw ParseError(pos_, std::string("syntax error: expected '") + c + "'");
        }
        ++pos_;
    }

    Expr sum() {
        Expr acc = product();
        std::vector<Expr> ts{acc};
        while (true) {
            if (peek('+')) {
                ++pos_;
                ts.push_back(product());
            } else if (peek('-')) {
                ++pos_;
                ts.push_back(-product());
            } else break;
        }
        return ts.size() == 1 ? ts[0] : add(std::move(ts));
    }

    Expr product() {
        Expr acc = unary();
        while (true) {
            if (peek('*')) {
                ++pos_;
                acc = acc * unary();
            } else if (peek('/')) {
                std::size_t at = pos_++;
                Expr d = unary();
                if (d.is_zero()) throw ParseError(at, "division by zero");
                acc = acc / d;
            } else break;
        }
        return acc;
    }

    Expr unary() {
        if (peek('-')) {
            ++pos_;
            return -unary();
        }
        if (peek('+')) {
            ++pos_;
            return unary();
        }
        return power();
    }

    Expr power() {
        Expr b = primary();
        if (peek('^')) {
            std::size_t at = pos_++;
            Expr e = unary();
            try {
                return pow(b, e);
            } catch (const DomainError& err) {
                throw ParseError(at, err.what());
            }
        }
        return b;
    }

    std::string ident() {
        std::size_t st = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(st, pos_ - st);
    }

    std::vector<Expr> arglist() {
        std::vector<Expr> a;
        expect('(');
        if (peek(')')) {
            ++pos_;
            return a;
        }
        a.push_back(sum());
        while (peek(',')) {
            ++pos_;
            a.push_back(sum());
        }
        expect(')');
        return a;
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) throw ParseError(pos_, "syntax error: unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(s_[pos_]))))
                throw ParseError(pos_, "syntax error: malformed number");
            return num(Rat(mpz_class(s_.substr(st, pos_ - st))));
        }
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            expect(')');
            return e;
        }
        if (!std::isalpha(static_cast<unsigned char>(c)))
            throw ParseError(pos_, std::string("syntax error: unexpected '") + c + "'");
        std::size_t at = pos_;
        std::string name = ident();
        std::string sub;
        std::size_t sub_at = pos_;
        if (pos_ < s_.size() && s_[pos_] == '_') {
            ++pos_;
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            sub = s_.substr(st, pos_ - st);
            if (sub.empty()) throw ParseError(sub_at, "malformed multi-index: empty subscript");
            if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                throw ParseError(pos_, "malformed multi-index: subscripts are variable letters");
        }
        if (!peek('(')) {
            if (sub.empty()) return sym(name);
            MultiIndex idx;
            for (char v : sub) idx.emplace_back(std::string(1, v), 1);
            return jet(name, idx);
        }
        std::size_t call_at = pos_;
        if (!sub.empty()) {
            if (!is_declared_opaque(name, ctx_)) throw ParseError(at, "unknown function name '" + name + "'");
            auto args = arglist();
            Expr f = func(name, args);
            if (!distinct_sym_args(f)) throw ParseError(sub_at, "malformed multi-index: subscripted function needs symbol arguments");
            std::vector<int> ord(args.size(), 0);
            for (char v : sub) {
                bool found = false;
                for (std::size_t k = 0; k < args.size(); ++k)
                    if (args[k].name() == std::string(1, v)) {
                        ord[k]++;
                        found = true;
                    }
                if (!found) throw ParseError(sub_at, std::string("malformed multi-index: '") + v + "' is not an argument of " + name);
            }
            return func(name, args, ord);
        }
        if (name == "diff") return diff(call_at);
        if (name == "fdiff") return fdiff(call_at);
        if (name == "int") {
            auto args = arglist();
            if (args.size() != 2 || args[1].kind() != Kind::Sym)
                throw ParseError(call_at, "int expects (expression, variable)");
            return integral(args[0], args[1].name());
        }
        if (is_elementary(name)) {
            auto args = arglist();
            if (args.size() != 1) throw ParseError(call_at, name + " expects one argument");
            return elem(name, args[0]);
        }
        if (is_declared_opaque(name, ctx_)) {
            auto args = arglist();
            if (args.empty()) throw ParseError(call_at, name + " needs at least one argument");
            return func(name, args);
        }
        throw ParseError(at, "unknown function name '" + name + "'");
    }

    // Reads "var[, k]" pairs following the differentiated object.
    std::vector<std::pair<std::string, int>> orders(const std::vector<Expr>& a, std::size_t at) {
        std::vector<std::pair<std::string, int>> out;
        std::size_t i = 1;
        while (i < a.size()) {
            if (a[i].kind() != Kind::Sym) throw ParseError(at, "malformed multi-index: expected variable name");
            std::string v = a[i].name();
            int k = 1;
            ++i;
            if (i < a.size() && a[i].is_num()) {
                const Rat& q = a[i].num();
                if (q.get_den() != 1 || q < 0 || !q.get_num().fits_sint_p())
                    throw ParseError(at, "malformed multi-index: order must be a non-negative integer");
                k = static_cast<int>(q.get_num().get_si());
                ++i;
            }
            out.emplace_back(v, k);
        }
        return out;
    }

    Expr diff(std::size_t at) {
        auto a = arglist();
        if (a.empty()) throw ParseError(at, "diff expects arguments");
        auto ords = orders(a, at);
        const Expr& obj = a[0];
        if (obj.kind() == Kind::Sym || obj.kind() == Kind::Jet) {
            MultiIndex idx = obj.kind() == Kind::Jet ? obj.index() : MultiIndex{};
            for (auto& o : ords) idx.push_back(o);
            return jet(obj.name(), idx);
        }
        if (obj.kind() == Kind::Func) {
            std::vector<int> ord = obj.orders();
            for (auto& [v, k] : ords) {
                bool found = false;
                for (std::size_t j = 0; j < obj.args().size(); ++j)
                    if (obj.args()[j].kind() == Kind::Sym && obj.args()[j].name() == v) {
                        ord[j] += k;
                        found = true;
                        break;
                    }
                if (!found) throw ParseError(at, "malformed multi-index: '" + v + "' is not an argument of " + obj.name());
            }
            return func(obj.name(), obj.args(), ord);
        }
        throw ParseError(at, "diff expects a dependent variable or an opaque function application");
    }

    Expr fdiff(std::size_t at) {
        auto a = arglist();
        if (a.empty() || a[0].kind() != Kind::Func) throw ParseError(at, "fdiff expects an opaque function application");
        const Expr& f = a[0];
        if (a.size() != f.args().size() + 1) throw ParseError(at, "malformed multi-index: fdiff needs one order per argument");
        std::vector<int> ord = f.orders();
        for (std::size_t j = 0; j < f.args().size(); ++j) {
            const Expr& k = a[j + 1];
            if (!k.is_num() || k.num().get_den() != 1 || k.num() < 0)
                throw ParseError(at, "malformed multi-index: order must be a non-negative integer");
            ord[j] += static_cast<int>(k.num().get_num().get_si());
        }
        return func(f.name(), f.args(), ord);
    }
};

}  // namespace

std::string render(const Expr& e, RenderStyle style) { return render_rec(e, style); }

bool is_declared_opaque(const std::string& name, const ParseContext& ctx) {
    if (ctx.opaque.count(name)) return true;
    if (!ctx.allow_default_opaque) return false;
    for (const char* p : {"g", "h", "rho", "F", "G"}) {
        std::string pre(p);
        if (name.compare(0, pre.size(), pre) != 0) continue;
        bool digits = true;
        for (std::size_t i = pre.size(); i < name.size(); ++i)
            digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
        if (digits) return true;
    }
    return false;
}

Expr parse(const std::string& text, const ParseContext& ctx) {
    Parser p(text, ctx);
    return p.run();
}

}  // namespace nlk
