#include <gtest/gtest.h>

#include "nlk/reduction.hpp"
#include "support.hpp"

using namespace nlk;
using nlk::testing::Gen;
using nlk::testing::P;

namespace {
const JetSpace XYT;
const PdeSystem kSpace{XYT, {}};

const VectorField V1({{"x", Expr(1)}});
const VectorField V4({{"t", P("t")}, {"x", P("x/2")}, {"y", P("3*y/4")}, {"u", P("-u/(2*n)")}});
const VectorField V4n1({{"t", P("t")}, {"x", P("x/2")}, {"y", P("3*y/4")}, {"u", P("-u/2")}});

// CL1 with weight g1(t) bound to g and the exponent to n.
FluxVector cl1(const std::string& g, const std::string& n = "n") {
    Expr G = P(g);
    ExprMap bind{{P("g1(t)"), G}, {P("diff(g1(t),t)"), partial(G, sym("t"))}, {sym("n"), P(n)}};
    auto q = [&](const char* s) { return substitute(P(s), bind); };
    return {{"t", "x", "y"},
            {q("u_x/2*g1(t)"), q("g1(t)*(u_t/2 + alpha*u^n*u_x + beta*u_xx) - u/2*diff(g1(t),t)"),
             q("gamma*g1(t)*u_y")},
            G};
}

PointTransform similarity() {
    return make_transform(XYT, JetSpace{{"R", "S", "Q"}, {"V"}},
                          {{"R", "x*t^(-1/2)"}, {"S", "y*t^(-3/4)"}, {"Q", "ln(t)"}, {"V", "u*t^(1/2)"}},
                          {{"x", "R*exp(Q)^(1/2)"}, {"y", "S*exp(Q)^(3/4)"}, {"t", "exp(Q)"}, {"u", "V*exp(Q)^(-1/2)"}},
                          TransformClass::Similarity);
}

const char* kBx1 = "m1_t + m1*m1_x + m2*m1_y - nu*(m1_xx + m1_yy)";
const char* kBx2 = "m2_t + m1*m2_x + m2*m2_y - nu*(m2_xx + m2_yy)";

PdeSystem burgers(const char* nu) {
    JetSpace js{{"x", "y", "t"}, {"m1", "m2"}};
    auto sub = [&](const char* e) { return substitute(P(e), {{sym("nu"), P(nu)}}); };
    return {js, {make_equation(sub(kBx1), Expr(0), P("m1_t")), make_equation(sub(kBx2), Expr(0), P("m2_t"))}};
}

PdeSystem base_n1(const Expr& gamma = sym("gamma")) {
    Expr r = substitute(P(nlk::testing::kBase), {{sym("n"), Expr(1)}, {sym("gamma"), gamma}});
    return {XYT, {make_equation(r, Expr(0), P("u_xt"))}};
}

const char* kKink = "1 - 2*tanh(2*t - x - y)";
}  // namespace

TEST(Association, Examples) {
    EXPECT_EQ(association_check(V1, cl1("1"), kSpace).verdict.status, ZeroStatus::SymbolicZero);
    EXPECT_TRUE(association_check(V4n1, cl1("t^(-1/4)", "1"), kSpace).associated());
    EXPECT_TRUE(association_check(V4n1, cl1("3*t^(-1/4)", "1"), kSpace).associated());
    AssociationResult bad = association_check(V4n1, cl1("1", "1"), kSpace);
    EXPECT_EQ(bad.verdict.status, ZeroStatus::NonZero);
    EXPECT_EQ(bad.residuals.size(), 3u);
}

TEST(DoubleReduction, Cl1AtNOne) {
    DoubleReduction d = double_reduce(cl1("t^(-1/4)", "1"), similarity(), "Q");
    EXPECT_EQ(d.reduced_js.indep, (std::vector<std::string>{"R", "S"}));
    EXPECT_TRUE(is_zero(d.full.identity_residual).ok());
    ASSERT_EQ(d.full.flux.order, (std::vector<std::string>{"R", "S", "Q"}));
    EXPECT_TRUE(is_zero(d.reduced[0] - P("alpha*V*V_R + beta*V_RR - R*V_R/2 - 3*S*V_S/8 - V/8")).ok());
    EXPECT_TRUE(is_zero(d.reduced[1] - P("-3*S*V_R/8 + gamma*V_S")).ok());
    EXPECT_FALSE(is_zero(reduced_divergence(d)).ok());
}

TEST(DoubleReduction, NonInvariantWeight) {
    EXPECT_THROW(double_reduce(cl1("1", "1"), similarity(), "Q"), NonInvariant);
}

TEST(Solutions, BurgersKink) {
    Solution s{{"m1", P(kKink)}, {"m2", P(kKink)}};
    EXPECT_TRUE(verify_solution(burgers("-1"), s).verdict.ok());
    EXPECT_EQ(verify_solution(burgers("1"), s).verdict.status, ZeroStatus::NonZero);
    GridSpec spec;
    GridResult g = grid_residual(burgers("-1"), s, spec);
    EXPECT_EQ(g.status, ZeroStatus::NumericZero);
    EXPECT_LT(g.max_abs, 1e-9);
    EXPECT_EQ(g.accepted, 1000);
    EXPECT_EQ(grid_residual(burgers("1"), s, spec).status, ZeroStatus::NonZero);
}

TEST(Solutions, InvariantFamily) {
    const char* u = "(x - zeta*y)/(alpha*t) - gamma*zeta^2/alpha + 2*beta/(2*c1*beta*t + alpha*(x - zeta*y))";
    EXPECT_TRUE(verify_solution(base_n1(), {{"u", P(u)}}).verdict.ok());
    const char* printed = "(x - zeta*y)/(alpha*t) - 1/alpha + 2*beta/(2*c1*beta*t + alpha*(x - zeta*y))";
    EXPECT_EQ(verify_solution(base_n1(), {{"u", P(printed)}}).verdict.status, ZeroStatus::NonZero);
    EXPECT_TRUE(verify_solution(base_n1(P("1/zeta^2")), {{"u", P(printed)}}).verdict.ok());
}

TEST(Solutions, ApplySolution) {
    JetSpace js{{"x", "t"}, {"u"}};
    EXPECT_TRUE(apply_solution(P("u_x + u_t"), {{"u", P("x^2*t")}}, js) == P("2*x*t + x^2"));
}

TEST(Inheritance, Examples) {
    std::set<std::string> space{"s", "r", "v", "p"};
    std::vector<VectorField> proj{VectorField({{"s", Expr(1)}}), VectorField({{"r", Expr(1)}})};
    FunctionFamily fam{"p", {VectorField({{"s", Expr(1)}}), VectorField({{"v", Expr(1)}}), VectorField({{"p", Expr(1)}})}};
    Inheritance in = inheritance(VectorField({{"s", P("2")}, {"r", P("3")}, {"p", P("r^2")}}), proj, fam, space);
    ASSERT_TRUE(in.inherited);
    EXPECT_TRUE(in.coeffs[0] == Expr(2) && in.coeffs[1] == Expr(3));
    EXPECT_TRUE(in.remainder == P("r^2"));
    EXPECT_FALSE(inheritance(VectorField({{"s", P("1")}, {"p", P("s")}}), proj, fam, space).inherited);
}

// ---- properties

TEST(ReductionProperty, DoubleReduceLinearInMultiplier) {
    Gen g(61);
    PointTransform T = similarity();
    DoubleReduction base = double_reduce(cl1("t^(-1/4)", "1"), T, "Q");
    for (int i = 0; i < 8; ++i) {
        Expr k = num(g.rat());
        FluxVector c = cl1("t^(-1/4)", "1");
        for (auto& e : c.comps) e = k * e;
        DoubleReduction d = double_reduce(c, T, "Q");
        for (std::size_t j = 0; j < d.reduced.size(); ++j)
            ASSERT_TRUE(is_zero(d.reduced[j] - k * base.reduced[j]).ok());
    }
}

TEST(ReductionProperty, VerifySolutionInvariantUnderRowOperations) {
    Gen g(62);
    std::vector<Solution> sols{{{"m1", P(kKink)}, {"m2", P(kKink)}},
                               {{"m1", P("(x + y)/(2*t)")}, {"m2", P("(x + y)/(2*t)")}},
                               {{"m1", P("x")}, {"m2", P("y")}},
                               {{"m1", P(kKink)}, {"m2", P("x")}}};
    PdeSystem s = burgers("-1");
    for (int i = 0; i < 12; ++i) {
        Expr a = num(g.rat()), b = num(g.rat());
        PdeSystem r = s;
        r.eqs[0] = make_equation(s.eqs[0].residual() + a * s.eqs[1].residual(), Expr(0), s.eqs[0].lead);
        r.eqs[1] = make_equation(b * s.eqs[1].residual(), Expr(0), s.eqs[1].lead);
        std::swap(r.eqs[0], r.eqs[1]);
        for (auto& sol : sols) {
            bool before = verify_solution(s, sol).verdict.ok();
            bool after = verify_solution(r, sol).verdict.ok();
            ASSERT_EQ(before, after);
        }
    }
}

TEST(ReductionProperty, AssociationInvariantUnderRescaling) {
    Gen g(63);
    std::vector<FluxVector> cs{cl1("1", "1"), cl1("t^(-1/4)", "1"), cl1("t", "1"), cl1("2*t^(-1/4)", "1")};
    for (int i = 0; i < 12; ++i) {
        Expr k = num(g.rat());
        for (const VectorField& v : {V1, V4n1}) {
            const FluxVector& c = cs[g.range(0, cs.size() - 1)];
            ASSERT_EQ(association_check(v, c, kSpace).associated(),
                      association_check(v.scaled(k), c, kSpace).associated());
        }
    }
}
