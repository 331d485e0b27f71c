// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "nlk/claims.hpp"
#include "nlk/conslaw.hpp"
#include "nlk/linalg.hpp"
#include "nlk/potential.hpp"
#include "nlk/reduction.hpp"
#include "support.hpp"

using namespace nlk;
using nlk::testing::Gen;
using nlk::testing::P;

namespace {

const JetSpace XYT;

struct Verdict {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string data_dir() {
    const char* d = std::getenv("NLK_DATA");
    return d ? d : NLK_DEFAULT_DATA;
}

const ClaimSet& corpus() {
    static const ClaimSet set = load_claims(data_dir() + "/corpus.json");
    return set;
}

// Runs the listed corpus claims; each must exist and meet its expected verdict.
void corpus_met(Verdict& v, const std::vector<std::string>& ids) {
    RunOptions o;
    o.only = ids;
    Report r = run_claims(corpus(), o);
    v.require(r.results.size() == ids.size(), "missing corpus claims");
    for (auto& c : r.results) v.require(c.outcome == "met", c.id + " " + c.verdict);
}

bool same_field(const VectorField& a, const VectorField& b) { return (a - b).is_zero(); }

const VectorField V1({{"x", Expr(1)}});
const VectorField V2({{"y", Expr(1)}});
const VectorField V3({{"t", Expr(1)}});
const VectorField V4({{"t", P("t")}, {"x", P("x/2")}, {"y", P("3*y/4")}, {"u", P("-u/(2*n)")}});
const VectorField V5({{"x", P("-y")}, {"y", P("2*gamma*t")}});

Verdict euler_annihilation() {
    Verdict v;
    Gen g(1001);
    auto t0 = std::chrono::steady_clock::now();
    int zero = 0;
    for (int i = 0; i < 200; ++i) {
        FluxVector c{{"x", "y", "t"}, {g.poly(3, 2), g.poly(3, 2), g.poly(3, 2)}, {}};
        if (is_zero(euler_operator(divergence(c, XYT), "u", XYT)).status == ZeroStatus::SymbolicZero) ++zero;
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(zero == 200, std::to_string(200 - zero) + " nonzero");
    v.require(s < 10.0, "took " + std::to_string(s) + " s");
    std::ostringstream os;
    os << zero << "/200 in " << s << " s";
    if (v.pass) v.detail = os.str();
    return v;
}

Verdict homotopy_round_trip() {
    Verdict v;
    Gen g(1002);
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
        Expr H;
        do {
            FluxVector c{{"x", "y", "t"}, {g.jet_poly(3, 2), g.jet_poly(3, 2), g.jet_poly(3, 2)}, {}};
            H = divergence(c, XYT);
        } while (H.is_zero());
        HomotopyResult h = homotopy_flux(H, XYT);
        if (h.residual.is_zero() && is_zero(divergence(h.flux, XYT) - H).status == ZeroStatus::SymbolicZero) ++ok;
    }
    v.require(ok == 100, std::to_string(100 - ok) + " round trips failed");
    HomotopyResult j = homotopy_flux(P("2*u*u_x"), XYT);
    v.require(j.flux["x"] == P("u^2") && j.flux["y"].is_zero() && j.flux["t"].is_zero(), "J(2uu_x) != (u^2,0,0)");
    corpus_met(v, {"CL1.homotopy.g1=1.n=1", "CL2.homotopy.g2=1.n=2", "CL3.homotopy.g3=1.n=1", "CL4.homotopy.g4=1.n=2"});
    if (v.pass) v.detail = "100/100, J^x(2uu_x) = u^2";
    return v;
}

Verdict multipliers_and_fluxes() {
    Verdict v;
    corpus_met(v, {"CL1.multiplier.g=1", "CL2.multiplier.g=1", "CL3.multiplier.g=1", "CL4.multiplier.g=1",
                   "CL1.flux.g1=1", "CL2.flux.g2=1", "CL3.flux.g3=1", "CL4.flux.g4=1", "CL3.multiplier.g3=t",
                   "CL1.multiplier.g1=t^(-1/4)", "multiplier.search.deg2"});
    Expr Pn = P(nlk::testing::kBase);
    auto found = multiplier_search(Pn, {{P("1"), P("x"), P("y"), P("x*y"), P("x^2"), P("y^2")}}, XYT);
    v.require(found.size() == 4, "search returned " + std::to_string(found.size()) + " multipliers");
    std::vector<VectorField> fb;
    for (auto& e : found) fb.push_back(VectorField({{"m", e}}));
    for (const char* m : {"1", "x", "y", "x*y"})
        v.require(span_coefficients(VectorField({{"m", P(m)}}), fb, {"x", "y", "t", "u"}).has_value(),
                  std::string(m) + " not in span");
    if (v.pass) v.detail = "CL1-CL4 exact, search span{1,x,y,xy}";
    return v;
}

Verdict commutators() {
    Verdict v;
    corpus_met(v, {"commutator.V1V4", "commutator.V2V4", "commutator.V2V5", "commutator.V3V4", "commutator.V3V5",
                   "commutator.V4V5"});
    StructureTable t = structure_table({V1, V2, V3, V4, V5});
    v.require(t.nonzero().size() == 6, "table has " + std::to_string(t.nonzero().size()) + " nonzero entries");
    v.require(same_field(commutator(V2, V5), V1.scaled(Expr(-1))), "[V2,V5] != -V1");
    if (v.pass) v.detail = "5/6 as printed, [V2,V5] = -V1 (printed sign differs)";
    return v;
}

Verdict chains() {
    Verdict v;
    v.require(validate_chain({V5, V4}).valid, "(V5,V4) rejected");
    v.require(validate_chain({V1, V2, V3, V5, V4}).valid, "(V1,V2,V3,V5,V4) rejected");
    ChainResult bad = validate_chain({V4, V5});
    v.require(!bad.valid && bad.witness.has_value(), "(V4,V5) not rejected with a witness");
    corpus_met(v, {"chain.L54", "chain.L12354", "chain.V4V5"});
    if (v.pass) v.detail = "(V4,V5) witness (" + std::to_string(bad.witness->first) + "," +
                           std::to_string(bad.witness->second) + ")";
    return v;
}

Verdict symmetries() {
    Verdict v;
    corpus_met(v, {"symmetry.V1", "symmetry.V2", "symmetry.V3", "symmetry.V4", "symmetry.V5", "tableII.K1.UWV",
                   "tableII.K5.UWV", "tableII.K5.UPQ", "tableII.K10.UPQ", "symmetry.V2_1", "symmetry.V2_2",
                   "symmetry.V2_3.printed", "symmetry.V2_3c", "symmetry.V2_4"});
    PdeSystem base{XYT, {make_equation(P(nlk::testing::kBase), Expr(0), P("u_xt"))}};
    for (auto& f : {V1, V2, V3, V4, V5})
        v.require(symmetry_check(f, base).status == ZeroStatus::SymbolicZero, "V on base fails");
    if (v.pass) v.detail = "V1-V5 symbolic n, K1/K5/K10 on couplets, IPS1 fields with V2^3 corrected";
    return v;
}

Verdict hodograph() {
    Verdict v;
    corpus_met(v, {"IPS1.hodograph"});
    HodographChart ch;
    ch.chi = {"s", "r"};
    ch.w = "w";
    ch.M = "M";
    ch.coords = {{sym("s"), sym("y")}, {sym("r"), sym("t")}, {sym("w"), sym("u")}, {sym("M"), sym("x")}};
    IpsResult r = build_ips_hodograph(P(nlk::testing::kBase), XYT, V1, ch, P("c_r"));
    Expr main = P("c^2*(b*c_w - c*c_r) + alpha*(n*w^(n-1)*c^3 - w^n*c^2*c_w) + beta*(3*c_w^2 - c*c_ww)"
                  " + gamma*c^2*(2*a*c*c_s - a^2*c_w - c^2*a_s)");
    v.require(exact_zero(r.main - main), "main equation differs");
    if (v.pass) v.detail = "cleared M_w^" + std::to_string(r.cleared_power) + ", main equation exact";
    return v;
}

Verdict double_reduction() {
    Verdict v;
    corpus_met(v, {"double.jacobian", "double.identity.CL1.n=1", "double.fluxes.CL1.n=1",
                   "double.divergence.CL1.DR-WV"});
    if (v.pass) v.detail = "Y = t^(9/4), Kinv^T, flux identity, reduced divergence modulo DR-WV";
    return v;
}

Verdict association() {
    Verdict v;
    corpus_met(v, {"association.V4.CL1.n=1.g1=t^(-1/4)", "association.V4.CL1.n=1.g1=3t^(-1/4)",
                   "association.V4.CL1.n=1.g1=1"});
    // Sweep g1 = c * t^k: associated exactly for k = -1/4.
    VectorField v4({{"t", P("t")}, {"x", P("x/2")}, {"y", P("3*y/4")}, {"u", P("-u/2")}});
    PdeSystem space{XYT, {}};
    int agree = 0, total = 0;
    for (const char* k : {"-1", "-1/2", "-1/4", "0", "1/4", "1", "3/4"})
        for (const char* c : {"1", "2", "-5/3"}) {
            Expr G = P(std::string("(") + c + ")*t^(" + k + ")");
            ExprMap b{{P("g1(t)"), G}, {P("diff(g1(t),t)"), partial(G, sym("t"))}};
            auto q = [&](const char* s) { return substitute(P(s), b); };
            FluxVector C{{"t", "x", "y"},
                         {q("u_x/2*g1(t)"), q("g1(t)*(u_t/2 + alpha*u*u_x + beta*u_xx) - u/2*diff(g1(t),t)"),
                          q("gamma*g1(t)*u_y")},
                         G};
            bool assoc = association_check(v4, C, space).associated();
            ++total;
            if (assoc == (std::string(k) == "-1/4")) ++agree;
        }
    v.require(agree == total, std::to_string(total - agree) + " weights misclassified");
    if (v.pass) v.detail = "associated iff g1 ~ t^(-1/4) over " + std::to_string(total) + " weights";
    return v;
}

Verdict cl5() {
    Verdict v;
    corpus_met(v, {"CL5.onshell.beta=0", "CL5.onshell.beta", "CL5.multiple-of-beta"});
    if (v.pass) v.detail = "zero at beta = 0, nonzero multiple of beta otherwise";
    return v;
}

Verdict solutions() {
    Verdict v;
    corpus_met(v, {"solution.4.21.1", "solution.4.21.2", "solution.5.11.grid", "solution.5.13.heat",
                   "cole-hopf.forward.5.13", "solution.4.31.rational", "solution.4.31.rational.printed",
                   "solution.4.31.rational.printed.alpha=1,gamma*zeta^2=1"});
    JetSpace js{{"x", "y", "t"}, {"m1", "m2"}};
    const char* kink = "1 - 2*tanh(2*t - x - y)";
    PdeSystem burgers{js,
                      {make_equation(P("m1_t + m1*m1_x + m2*m1_y + (m1_xx + m1_yy)"), Expr(0), P("m1_t")),
                       make_equation(P("m2_t + m1*m2_x + m2*m2_y + (m2_xx + m2_yy)"), Expr(0), P("m2_t"))}};
    GridResult g = grid_residual(burgers, {{"m1", P(kink)}, {"m2", P(kink)}}, GridSpec{});
    v.require(g.max_abs < 1e-9 && g.accepted > 0, "kink grid residual " + std::to_string(g.max_abs));
    std::ostringstream os;
    os << "kink grid max " << g.max_abs << " over " << g.accepted << " points; printed -1/alpha family needs gamma*zeta^2=1";
    if (v.pass) v.detail = os.str();
    return v;
}

Verdict full_corpus() {
    Verdict v;
    std::string out = "nlk_acceptance_report.json";
    std::string cmd = std::string("\"") + NLK_CLI + "\" claims run --claims \"" + data_dir() + "/corpus.json\" --out " +
                      out + " > nlk_acceptance_run.txt 2>&1";
    int rc = std::system(cmd.c_str());
    v.require(rc == 0, "claims run exit status " + std::to_string(rc));
    std::ifstream in(out);
    if (!in) {
        v.require(false, "no report written");
        return v;
    }
    json rep = json::parse(in);
    int unexpected = rep.at("summary").at("unexpected").get<int>();
    v.require(unexpected == 0, std::to_string(unexpected) + " unexpected verdicts");
    int bullets = 0;
    for (auto& row : rep.at("census")) {
        ++bullets;
        v.require(row.at("claims").get<int>() >= 1 && row.at("missing").empty(),
                  "census gap: " + row.at("bullet").get<std::string>());
    }
    v.require(bullets > 0, "report has no census");
    if (v.pass)
        v.detail = std::to_string(rep.at("summary").at("total").get<int>()) + " claims met, " +
                   std::to_string(bullets) + " census bullets covered";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"Euler operator annihilates divergences", euler_annihilation},
        {"homotopy operator round trip", homotopy_round_trip},
        {"multiplier and flux identities", multipliers_and_fluxes},
        {"commutator table", commutators},
        {"solvable chains", chains},
        {"symmetry suite", symmetries},
        {"hodograph inverse potential system", hodograph},
        {"double reduction", double_reduction},
        {"association", association},
        {"nonlocal conservation law", cl5},
        {"solution battery", solutions},
        {"full corpus run", full_corpus},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        if (!v.pass) ++failed;
        std::printf("%s %2zu  %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
