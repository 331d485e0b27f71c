#ifndef NLK_TESTS_SUPPORT_HPP
#define NLK_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "nlk/expr.hpp"
#include "nlk/jet.hpp"
#include "nlk/vfield.hpp"

namespace nlk::testing {

inline Expr P(const std::string& s) { return parse(s); }

// The base equation residual with symbolic n.
inline const char* kBase =
    "u_xt + alpha*n*u^(n-1)*u_x^2 + alpha*u^n*u_xx + beta*u_xxx + gamma*u_yy";

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return range(0, 1) == 1; }
    Rat rat() {
        int p = range(-5, 5);
        if (p == 0) p = 1;
        return Rat(p, range(1, 4));
    }
    std::mt19937_64& engine() { return rng_; }

    // Jet atoms of u up to the given order in (x, y, t).
    Expr jet_atom(int max_order) {
        static const char* vars[] = {"x", "y", "t"};
        int order = range(0, max_order);
        MultiIndex idx;
        for (int k = 0; k < order; ++k) idx.push_back({vars[range(0, 2)], 1});
        return jet("u", canonical_index(idx));
    }
    Expr coord() {
        static const char* vars[] = {"x", "y", "t"};
        return sym(vars[range(0, 2)]);
    }

    // Random polynomial in x, y, t and jets of u, total degree <= deg.
    Expr poly(int deg, int jet_order, int terms = 3) {
        std::vector<Expr> ts;
        for (int k = 0; k < terms; ++k) {
            std::vector<Expr> fs{num(rat())};
            int d = range(1, deg);
            for (int m = 0; m < d; ++m) fs.push_back(coin() ? jet_atom(jet_order) : coord());
            ts.push_back(mul(std::move(fs)));
        }
        return add(std::move(ts));
    }

    // Polynomial in which every term carries at least one jet factor.
    Expr jet_poly(int deg, int jet_order, int terms = 3) {
        std::vector<Expr> ts;
        for (int k = 0; k < terms; ++k) {
            std::vector<Expr> fs{num(rat()), jet_atom(jet_order)};
            int d = range(0, deg - 1);
            for (int m = 0; m < d; ++m) fs.push_back(coin() ? jet_atom(jet_order) : coord());
            ts.push_back(mul(std::move(fs)));
        }
        return add(std::move(ts));
    }

    // Mixed expression tree: sums, products, small powers, quotients and
    // elementary functions over a handful of atoms.
    Expr tree(int depth) {
        if (depth == 0 || range(0, 3) == 0) {
            switch (range(0, 4)) {
                case 0: return num(rat());
                case 1: return coord();
                case 2: return jet_atom(2);
                case 3: return sym(coin() ? "alpha" : "beta");
                default: return func("g1", {sym("t")});
            }
        }
        switch (range(0, 5)) {
            case 0: return tree(depth - 1) + tree(depth - 1);
            case 1: return tree(depth - 1) * tree(depth - 1);
            case 2: return pow(tree(depth - 1), num(range(0, 3)));
            case 3: return tree(depth - 1) - tree(depth - 1);
            case 4: {
                static const char* fns[] = {"exp", "tanh", "sin", "cos"};
                return elem(fns[range(0, 3)], tree(depth - 1));
            }
            default: return tree(depth - 1) / (num(range(1, 3)) + coord());
        }
    }

    VectorField field(const std::vector<std::string>& coords, int deg) {
        VectorField v;
        for (auto& z : coords) {
            std::vector<Expr> ts;
            int nt = range(0, 2);
            for (int k = 0; k < nt; ++k) {
                std::vector<Expr> fs{num(rat())};
                int d = range(0, deg);
                for (int m = 0; m < d; ++m) fs.push_back(sym(coords[range(0, coords.size() - 1)]));
                ts.push_back(mul(std::move(fs)));
            }
            v.set(z, add(std::move(ts)));
        }
        return v;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace nlk::testing

#endif
