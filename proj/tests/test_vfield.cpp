#include <gtest/gtest.h>

#include "nlk/vfield.hpp"
#include "support.hpp"

using namespace nlk;
using nlk::testing::Gen;
using nlk::testing::P;

namespace {
const JetSpace XYT;

VectorField F(std::initializer_list<std::pair<const char*, const char*>> cs) {
    VectorField v;
    for (auto& [z, c] : cs) v.set(z, P(c));
    return v;
}

const VectorField V1 = F({{"x", "1"}});
const VectorField V2 = F({{"y", "1"}});
const VectorField V3 = F({{"t", "1"}});
const VectorField V4 = F({{"t", "t"}, {"x", "x/2"}, {"y", "3*y/4"}, {"u", "-u/(2*n)"}});
const VectorField V5 = F({{"x", "-y"}, {"y", "2*gamma*t"}});

PdeSystem base() { return {XYT, {make_equation(P(nlk::testing::kBase), Expr(0), P("u_xt"))}}; }

bool same(const VectorField& a, const VectorField& b) { return (a - b).is_zero(); }
}  // namespace

TEST(Commutator, Examples) {
    EXPECT_TRUE(same(commutator(V1, V4), V1.scaled(num(1, 2))));
    EXPECT_TRUE(same(commutator(V4, V5), V5.scaled(num(1, 4))));
    EXPECT_TRUE(same(commutator(V2, V5), V1.scaled(Expr(-1))));
    EXPECT_TRUE(commutator(V1, V1).is_zero());
}

TEST(StructureTable, Basis) {
    StructureTable t = structure_table({V1, V2, V3, V4, V5});
    EXPECT_EQ(t.brackets.size(), 10u);
    EXPECT_EQ(t.nonzero().size(), 6u);
    for (auto& b : t.brackets) EXPECT_TRUE(b.omega.has_value());
    EXPECT_TRUE(structure_table({V1}).brackets.empty());
    StructureTable twice = structure_table({V1, V1});
    ASSERT_EQ(twice.brackets.size(), 1u);
    EXPECT_TRUE(twice.brackets[0].value.is_zero());
}

TEST(StructureTable, FunctionCoefficientIsNotInSpan) {
    StructureTable t = structure_table({V3, F({{"x", "t"}}), V1});
    bool seen = false;
    for (auto& b : t.brackets)
        if (b.i == 0 && b.j == 1) {
            seen = true;
            EXPECT_TRUE(b.omega.has_value());  // [d_t, t d_x] = d_x = V1
        }
    EXPECT_TRUE(seen);
    StructureTable u = structure_table({V3, F({{"x", "t^2"}})});
    EXPECT_FALSE(u.brackets[0].omega.has_value());
}

TEST(Chain, Examples) {
    ChainResult a = validate_chain({V5, V4});
    EXPECT_TRUE(a.valid);
    ASSERT_FALSE(a.omegas.empty());
    ASSERT_TRUE(a.omegas[0].omega.has_value());
    EXPECT_TRUE((*a.omegas[0].omega)[0] == num(-1, 4));

    ChainResult b = validate_chain({V4, V5});
    EXPECT_FALSE(b.valid);
    ASSERT_TRUE(b.witness.has_value());
    EXPECT_EQ(*b.witness, std::make_pair(std::size_t{1}, std::size_t{2}));

    EXPECT_TRUE(validate_chain({V1, V2, V3, V5, V4}).valid);
    EXPECT_TRUE(validate_chain({V1}).valid);
    // [V2,V5] = -V1 leaves span(V2,V3)
    ChainResult c = validate_chain({V2, V3, V5, V1, V4});
    EXPECT_FALSE(c.valid);
    EXPECT_EQ(*c.witness, std::make_pair(std::size_t{1}, std::size_t{3}));
}

TEST(Prolong, Examples) {
    ExprMap p = prolong(F({{"u", "x"}}), 1, XYT);
    EXPECT_TRUE(p.at(P("u_x")).is_one());
    ExprMap q = prolong(V4, 1, XYT);
    EXPECT_TRUE((q.at(P("u_x")) - P("-u_x/(2*n) - u_x/2")).is_zero());
    for (auto& [a, c] : prolong(V1, 3, XYT)) EXPECT_TRUE(c.is_zero()) << render(a);
}

TEST(Symmetry, Examples) {
    for (auto& v : {V1, V2, V3, V4, V5}) EXPECT_EQ(symmetry_check(v, base()).status, ZeroStatus::SymbolicZero);
    EXPECT_EQ(symmetry_check(F({{"x", "u"}}), base()).status, ZeroStatus::NonZero);

    JetSpace js{{"x", "y", "t"}, {"u", "w", "v"}};
    const char* a = "u_t + alpha*u^n*u_x + beta*u_xx";
    PdeSystem uwv{js,
                  {make_equation(P("w_y"), P(a), P("w_y")), make_equation(P("w_x"), P("-gamma*u_y"), P("w_x")),
                   make_equation(P("v_y"), P(std::string("y*(") + a + ")"), P("v_y")),
                   make_equation(P("v_x"), P("-gamma*y*u_y + gamma*u"), P("v_x"))}};
    EXPECT_EQ(symmetry_check(F({{"y", "1"}, {"v", "w"}}), uwv).status, ZeroStatus::SymbolicZero);
    EXPECT_EQ(symmetry_check(F({{"w", "h1(t)"}}), uwv).status, ZeroStatus::SymbolicZero);
    EXPECT_EQ(symmetry_check(F({{"w", "u"}}), uwv).status, ZeroStatus::NonZero);
}

TEST(Canonical, Examples) {
    CanonicalCoords c4{{P("x*t^(-1/2)"), P("y*t^(-3/4)")}, {P("u*t^(1/(2*n))")}, P("ln(t)")};
    EXPECT_EQ(canonical_check(V4, c4).status, ZeroStatus::SymbolicZero);
    CanonicalCoords c1{{P("y"), P("t")}, {P("u")}, P("x")};
    EXPECT_EQ(canonical_check(V1, c1).status, ZeroStatus::SymbolicZero);
    CanonicalCoords bad{{P("y"), P("t")}, {P("u")}, P("2*x")};
    EXPECT_EQ(canonical_check(V1, bad).status, ZeroStatus::NonZero);
}

TEST(Projection, Examples) {
    std::vector<std::pair<std::string, Expr>> inv{{"s", P("x - zeta*y")}, {"r", P("t")}, {"v", P("u")}, {"p", P("w")}};
    ExprMap back{{sym("x"), P("s + zeta*y")}, {sym("t"), sym("r")}, {sym("u"), sym("v")}, {sym("w"), sym("p")}};
    std::set<std::string> orig{"x", "y", "t", "u", "w"};
    Projection w3 = project_field(V3, inv, back, orig);
    EXPECT_TRUE(w3.expressible);
    EXPECT_TRUE(same(w3.field, F({{"r", "1"}})));
    Projection w2 = project_field(V2, inv, back, orig);
    EXPECT_TRUE(same(w2.field, F({{"s", "-zeta"}})));
    Projection w12 = project_field(F({{"x", "zeta"}, {"y", "1"}}), inv, back, orig);
    EXPECT_TRUE(w12.expressible);
    EXPECT_TRUE(w12.field.is_zero());
    Projection boost = project_field(V5, inv, back, orig);
    EXPECT_FALSE(boost.expressible);
    EXPECT_EQ(boost.left, std::vector<std::string>{"y"});
}

// ---- properties

namespace {
const std::vector<std::string> kCoords{"x", "y", "t", "u"};
}

TEST(VfieldProperty, AntisymmetryAndBilinearity) {
    Gen g(31);
    for (int i = 0; i < 200; ++i) {
        VectorField a = g.field(kCoords, 2), b = g.field(kCoords, 2), c = g.field(kCoords, 2);
        ASSERT_TRUE(same(commutator(a, b), commutator(b, a).scaled(Expr(-1))));
        Expr p = num(g.rat()), q = num(g.rat());
        VectorField lhs = commutator(a.scaled(p) + b.scaled(q), c);
        VectorField rhs = commutator(a, c).scaled(p) + commutator(b, c).scaled(q);
        ASSERT_TRUE(same(lhs, rhs));
    }
}

TEST(VfieldProperty, Jacobi) {
    Gen g(32);
    for (int i = 0; i < 200; ++i) {
        VectorField u = g.field(kCoords, 2), v = g.field(kCoords, 2), w = g.field(kCoords, 2);
        VectorField j = commutator(commutator(u, v), w) + commutator(commutator(v, w), u) +
                        commutator(commutator(w, u), v);
        ASSERT_TRUE(j.is_zero()) << render(j);
    }
}

TEST(VfieldProperty, BasisClosesUnderBrackets) {
    StructureTable t = structure_table({V1, V2, V3, V4, V5});
    for (auto& b : t.brackets) {
        ASSERT_TRUE(b.omega.has_value());
        VectorField sum;
        for (std::size_t k = 0; k < t.basis.size(); ++k) sum = sum + t.basis[k].scaled((*b.omega)[k]);
        EXPECT_TRUE(same(sum, b.value));
    }
}

TEST(VfieldProperty, SymmetryInvariantUnderRescaling) {
    Gen g(33);
    PdeSystem s = base();
    std::vector<VectorField> fields{V1, V2, V3, V4, V5, F({{"x", "u"}}), F({{"y", "x"}}), F({{"u", "1"}})};
    for (int i = 0; i < 40; ++i) {
        const VectorField& v = fields[g.range(0, fields.size() - 1)];
        Expr k = num(g.rat());
        EXPECT_EQ(symmetry_check(v, s).status, symmetry_check(v.scaled(k), s).status);
    }
}
