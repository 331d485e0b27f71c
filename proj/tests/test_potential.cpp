#include <gtest/gtest.h>

#include "nlk/linalg.hpp"
#include "nlk/potential.hpp"
#include "support.hpp"

using namespace nlk;
using nlk::testing::Gen;
using nlk::testing::P;

namespace {
const JetSpace XYT;
const Expr Pn = P(nlk::testing::kBase);
const std::array<std::string, 3> kRoles{"t", "x", "y"};
const char* kInner = "(u_t/2 + alpha*u^n*u_x + beta*u_xx)";
const char* kA = "alpha*u^n*u_x + beta*u_xx";

FluxVector cl1() { return {{"t", "x", "y"}, {P("u_x/2"), P(kInner), P("gamma*u_y")}, Expr(1)}; }
FluxVector cl2() {
    return {{"t", "x", "y"}, {P("y*u_x/2"), P(std::string("y*") + kInner), P("gamma*y*u_y - gamma*u")}, P("y")};
}
FluxVector cl3() {
    return {{"t", "x", "y"},
            {P("x*u_x/2 - u/2"), P(std::string("x*") + kInner + " - alpha*u^(n+1)/(n+1) - beta*u_x"), P("gamma*x*u_y")},
            P("x")};
}
FluxVector cl4() {
    return {{"t", "x", "y"},
            {P("x*y*u_x/2 - y*u/2"), P(std::string("x*y*") + kInner + " - alpha*y*u^(n+1)/(n+1) - beta*y*u_x"),
             P("gamma*x*y*u_y - gamma*x*u")},
            P("x*y")};
}

ColeHopfPair pair(const char* nu) {
    ColeHopfPair p;
    p.nu = P(nu);
    return p;
}
}  // namespace

TEST(Antiderivative, Examples) {
    EXPECT_TRUE(antiderivative(P("2*x"), "x", XYT) == P("x^2"));
    EXPECT_TRUE(antiderivative(P("u_x"), "x", XYT) == sym("u"));
    EXPECT_TRUE(exact_zero(antiderivative(P("x*u_xt"), "x", XYT) - P("x*u_t - int(u_t, x)")));
    Expr d = total_derivative(antiderivative(P("x*y*u_xt + u^2"), "x", XYT), "x", XYT);
    EXPECT_TRUE(exact_zero(d - P("x*y*u_xt + u^2")));
}

TEST(Rps, Singlets) {
    PotentialSystem uw = build_rps(Pn, cl1(), Expr(1), kRoles, "w", XYT);
    ASSERT_EQ(uw.eqs.size(), 2u);
    EXPECT_TRUE(exact_zero(uw.eqs[0].solved - P(std::string("u_t + ") + kA)));
    EXPECT_TRUE(exact_zero(uw.eqs[1].solved - P("-gamma*u_y")));
    EXPECT_EQ(compatibility_check(uw).status, ZeroStatus::SymbolicZero);

    PotentialSystem uv = build_rps(Pn, cl2(), P("y"), kRoles, "v", XYT);
    EXPECT_TRUE(exact_zero(uv.eqs[0].solved - P(std::string("y*(u_t + ") + kA + ")")));
    EXPECT_TRUE(exact_zero(uv.eqs[1].solved - P("-gamma*y*u_y + gamma*u")));
    EXPECT_EQ(compatibility_check(uv).status, ZeroStatus::SymbolicZero);
}

TEST(Rps, RefusesNonConservedFlux) {
    FluxVector bad = cl1();
    bad.comps[1] = bad.comps[1] + sym("u");
    EXPECT_THROW(build_rps(Pn, bad, Expr(1), kRoles, "w", XYT), std::invalid_argument);
}

TEST(Rps, ZeroFluxGivesTrivialPotential) {
    FluxVector z{{"t", "x", "y"}, {Expr(0), Expr(0), Expr(0)}, Expr(0)};
    PotentialSystem ps = build_rps(Pn, z, Expr(0), kRoles, "w", XYT);
    for (auto& e : ps.eqs) EXPECT_TRUE(e.solved.is_zero());
    EXPECT_TRUE(compatibility_residual(ps).is_zero());
}

TEST(Rps, InjectedDefectIsDetected) {
    PotentialSystem ps = build_rps(Pn, cl1(), Expr(1), kRoles, "w", XYT);
    ps.eqs[0] = make_equation(ps.eqs[0].lhs, ps.eqs[0].rhs + sym("u"), ps.eqs[0].lead);
    EXPECT_EQ(compatibility_check(ps).status, ZeroStatus::NonZero);
}

TEST(Rps, OrientationFlipsSign) {
    PotentialSystem m = build_rps(Pn, cl1(), Expr(1), kRoles, "w", XYT, -1);
    PotentialSystem p = build_rps(Pn, cl1(), Expr(1), kRoles, "w", XYT, +1);
    ASSERT_EQ(p.eqs.size(), 2u);
    EXPECT_TRUE(exact_zero(p.eqs[1].solved + m.eqs[0].solved));
    EXPECT_TRUE(exact_zero(p.eqs[0].solved + m.eqs[1].solved));
    EXPECT_EQ(compatibility_check(p).status, ZeroStatus::SymbolicZero);
}

TEST(Gauge, Cl1SystemIsCompatible) {
    JetSpace js{{"x", "y", "t"}, {"u", "w1", "w2"}};
    GaugeSystem g = gauge_system(cl1(), kRoles, "w1", "w2", js);
    EXPECT_EQ(g.eqs.size(), 3u);
    // D_y(w1_x) - D_x(w1_y) reduces to Div C, which is the base residual
    EXPECT_TRUE(exact_zero(g.compat_residual - Pn)) << render(g.compat_residual);
}

TEST(Nonlocal, RefusesLocalMultipliers) {
    JetSpace js{{"x", "y", "t"}, {"u", "w"}};
    PdeSystem uw{js,
                 {make_equation(P("w_y"), P(std::string("u_t + ") + kA), P("w_y")),
                  make_equation(P("w_x"), P("-gamma*u_y"), P("w_x"))}};
    FluxVector c{{"t", "x", "y"}, {P("u"), Expr(0), Expr(0)}, {}};
    EXPECT_THROW(extend_nonlocal(uw, {"w"}, c, {Expr(1), Expr(1)}, kRoles, "z1", "z2"), std::invalid_argument);
}

// Div of (-gamma*u^2/2, -alpha*gamma*u^3/3 + w^2/2, gamma*u*w) on UW at n = 1, beta = 0
// equals w*(w_x + gamma*u_y) + gamma*u*(w_y - u_t - alpha*u*u_x).
TEST(Nonlocal, Cl5Extension) {
    JetSpace js{{"x", "y", "t"}, {"u", "w"}};
    PdeSystem uw{js,
                 {make_equation(P("w_y"), P("u_t + alpha*u*u_x"), P("w_y")),
                  make_equation(P("w_x"), P("-gamma*u_y"), P("w_x"))}};
    FluxVector c{{"t", "x", "y"}, {P("-gamma*u^2/2"), P("-alpha*gamma*u^3/3 + w^2/2"), P("gamma*u*w")}, {}};
    NonlocalExtension e = extend_nonlocal(uw, {"w"}, c, {P("gamma*u"), P("w")}, kRoles, "z1", "z2");
    EXPECT_TRUE(e.onshell_residual.is_zero()) << render(e.onshell_residual);
    EXPECT_TRUE(exact_zero(e.multiplier_residual)) << render(e.multiplier_residual);
    EXPECT_TRUE(reduce_on_solutions(e.ext.compat_residual, uw).is_zero());
}

TEST(Ips, HodographFromTranslation) {
    VectorField V1({{"x", Expr(1)}});
    HodographChart ch;
    ch.chi = {"s", "r"};
    ch.w = "w";
    ch.M = "M";
    ch.coords = {{sym("s"), sym("y")}, {sym("r"), sym("t")}, {sym("w"), sym("u")}, {sym("M"), sym("x")}};
    IpsResult r = build_ips_hodograph(Pn, XYT, V1, ch, P("c_r"));
    Expr transformed = P("M_w^2*(M_ww*M_r - M_w*M_rw) + alpha*(n*w^(n-1)*M_w^3 - w^n*M_w^2*M_ww)"
                  " + beta*(3*M_ww^2 - M_w*M_www) + gamma*M_w^2*(2*M_w*M_s*M_sw - M_w^2*M_ss - M_s^2*M_ww)");
    Expr main_eq = P("c^2*(b*c_w - c*c_r) + alpha*(n*w^(n-1)*c^3 - w^n*c^2*c_w) + beta*(3*c_w^2 - c*c_ww)"
                  " + gamma*c^2*(2*a*c*c_s - a^2*c_w - c^2*a_s)");
    EXPECT_EQ(is_zero(r.transformed - transformed).status, ZeroStatus::SymbolicZero);
    EXPECT_EQ(is_zero(r.main - main_eq).status, ZeroStatus::SymbolicZero);
    EXPECT_EQ(r.ips.eqs.size(), 4u);
}

TEST(Ips, NonHodographChartUnsupported) {
    VectorField V5({{"x", P("-y")}, {"y", P("2*gamma*t")}});
    HodographChart ch;
    ch.chi = {"s", "r"};
    ch.w = "w";
    ch.M = "M";
    ch.coords = {{sym("s"), P("x + y^2/(4*gamma*t)")}, {sym("r"), sym("t")}, {sym("w"), sym("u")},
                 {sym("M"), P("y/(2*gamma*t)")}};
    EXPECT_THROW(build_ips_hodograph(Pn, XYT, V5, ch), Unsupported);
}

TEST(ColeHopf, Examples) {
    auto mu = cole_hopf_forward(P("exp(x)"), pair("nu"));
    EXPECT_TRUE(mu[0] == P("-2*nu"));
    EXPECT_TRUE(mu[1].is_zero());
    ColeHopfInverse inv = cole_hopf_inverse(Expr(0), Expr(0), pair("nu"));
    EXPECT_TRUE(inv.f.is_one());
    EXPECT_TRUE(heat_residual(P("exp(t)*exp(x)*exp(y)"), pair("1/2")).is_zero());
    EXPECT_TRUE(heat_residual(P("exp(t)*exp(x)"), pair("1")).is_zero());
    EXPECT_FALSE(heat_residual(P("exp(t)*exp(x)"), pair("1/2")).is_zero());
}

TEST(ColeHopf, FundamentalSolution) {
    ColeHopfPair p = pair("-1");
    Expr f = P("(-4*pi*t)^(-1/2)*exp((x + y)^2/(8*t))");
    ZeroOptions o;
    o.box["t"] = {-2.0, -1.0};
    EXPECT_TRUE(is_zero(heat_residual(f, p), o).ok());
    auto mu = cole_hopf_forward(f, p);
    for (auto& m : mu) EXPECT_TRUE(is_zero(m - P("(x + y)/(2*t)"), o).ok());
}

// ---- properties

TEST(PotentialProperty, CorpusConservationLawsGiveCompatibleSystems) {
    std::vector<std::pair<FluxVector, std::string>> cls{{cl1(), "w"}, {cl2(), "v"}, {cl3(), "p"}, {cl4(), "q"}};
    for (auto& [c, pot] : cls) {
        PotentialSystem ps = build_rps(Pn, c, *c.multiplier, kRoles, pot, XYT);
        EXPECT_TRUE(compatibility_check(ps).ok()) << pot;
    }
}

TEST(PotentialProperty, ColeHopfRoundTrip) {
    Gen g(51);
    ColeHopfPair p = pair("nu");
    for (int i = 0; i < 40; ++i) {
        // A polynomial in x, y, t; mu = D_x A.
        Expr A;
        for (int k = 0; k < 3; ++k) A = A + num(g.rat()) * pow(g.coord(), num(g.range(1, 3)));
        Expr mu = partial(A, sym("x"));
        ColeHopfInverse inv = cole_hopf_inverse(mu, A, p);
        ASSERT_TRUE(inv.antiderivative.ok());
        ASSERT_TRUE(inv.round_trip.ok()) << render(A);
    }
}

// Sums of exp(k.x + nu*|k|^2 t) solve the heat equation; their forward images solve Burgers.
TEST(PotentialProperty, HeatSolutionsMapToBurgers) {
    Gen g(52);
    ColeHopfPair p = pair("nu");
    for (int i = 0; i < 15; ++i) {
        Expr f = Expr(0);
        for (int k = 0; k < 2; ++k) {
            Expr a = num(g.rat()), b = num(g.rat()), c = num(g.range(1, 3));
            f = f + c * elem("exp", a * sym("x") + b * sym("y") + p.nu * (a * a + b * b) * sym("t"));
        }
        ASSERT_TRUE(heat_residual(f, p).is_zero() || exact_zero(heat_residual(f, p)));
        auto mu = cole_hopf_forward(f, p);
        auto D = [](const Expr& e, const char* v) { return partial(e, sym(v)); };
        for (int k = 0; k < 2; ++k) {
            Expr r = D(mu[k], "t") + mu[0] * D(mu[k], "x") + mu[1] * D(mu[k], "y") -
                     p.nu * (D(D(mu[k], "x"), "x") + D(D(mu[k], "y"), "y"));
            ZeroOptions o;
            o.box["nu"] = {0.5, 1.5};
            ASSERT_TRUE(is_zero(r, o).ok()) << render(f);
        }
    }
}
