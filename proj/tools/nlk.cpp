#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlk/claims.hpp"
#include "nlk/conslaw.hpp"
#include "nlk/potential.hpp"
#include "nlk/reduction.hpp"

using namespace nlk;

namespace {

constexpr int kUsage = 2;

const char* kGrammar = R"(expression grammar:
  numbers 3, 1/2; symbols x, alpha, c1; jets u_x, u_xxt, m1_t; u^(n-1)
  opaque functions g1(t), rho1(s,r), F(t); derivatives g1_t(t) or diff(g1(t),t,2)
  elementary exp ln tanh sech sqrt erf sin cos cosh sinh; formal integral int(u_t,x)
documents (file path or inline JSON):
  space     {"indep":["x","y","t"],"deps":["u"]}
  system    {"indep":..,"deps":..,"equations":[{"lhs":"..","rhs":"..","lead":"u_xt"}]}
  field     {"x":"1","u":"-u/2"}
  flux      {"order":["t","x","y"],"comps":[..],"multiplier":".."}
  transform {"old":space,"new":space,"forward":{..},"inverse":{..},"class":"similarity"}
)";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Global {
    std::string format = "text";
    std::string mode = "auto";
    std::uint64_t seed = 42;
    int samples = 16;
    double tol = 1e-9;

    ZeroOptions zero() const {
        ZeroOptions o;
        o.mode = parse_mode(mode);
        o.seed = seed;
        o.samples = samples;
        o.tol = tol;
        return o;
    }
    bool json_out() const { return format == "json"; }
};

json read_doc(const std::string& arg) {
    std::string text = arg;
    auto first = arg.find_first_not_of(" \t\n");
    if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
        std::ifstream in(arg);
        if (!in) throw UsageError("cannot open " + arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("invalid JSON in ") + arg + ": " + e.what());
    }
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

JetSpace space_of(const std::string& indep, const std::string& deps) {
    JetSpace js;
    js.indep = split(indep);
    js.deps = split(deps);
    return js;
}

std::map<std::string, VectorField> field_map(const json& j) {
    std::map<std::string, VectorField> out;
    const json& fs = j.contains("fields") ? j.at("fields") : j;
    for (auto& [k, v] : fs.items()) out.emplace(k, doc::field(v));
    return out;
}

std::vector<std::string> field_order(const json& j, const std::map<std::string, VectorField>& fs) {
    std::vector<std::string> order;
    if (j.contains("order"))
        for (auto& s : j.at("order")) order.push_back(s.get<std::string>());
    else
        for (auto& [k, v] : fs) order.push_back(k);
    return order;
}

void print(const Global& g, const json& j, const std::string& text) {
    if (g.json_out())
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

json verdict_json(const ZeroVerdict& v) {
    json j = {{"status", to_string(v.status)}, {"max_abs", v.max_abs}};
    if (v.status == ZeroStatus::NonZero && !v.witness.empty()) {
        j["witness"] = v.witness;
        j["witness_value"] = v.witness_value;
    }
    return j;
}

int status_exit(const ZeroVerdict& v) { return v.ok() ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlk: nonlocally related PDE systems toolkit"};
    app.require_subcommand(1);
    Global g;
    if (const char* s = std::getenv("NLK_SEED")) g.seed = std::strtoull(s, nullptr, 10);
    app.add_option("--format", g.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--mode", g.mode, "zero test mode")->check(CLI::IsMember({"auto", "symbolic", "numeric"}));
    app.add_option("--seed", g.seed, "sampling seed (NLK_SEED overrides the default)");
    app.add_option("--samples", g.samples, "numeric samples");
    app.add_option("--tol", g.tol, "numeric tolerance");

    std::string text, at, indep = "x,y,t", deps = "u", pde, multiplier, basis, flux_doc, field_doc, fields_doc,
                          system_doc, transform_doc, chart_doc, roles = "t,x,y", potential = "w", translation = "Q",
                          f, mu, A, nu = "1", solution_doc, claims_path, out_path, only;
    int order = 1, orientation = -1, component = 0, jobs = 1, grid = 0;
    std::vector<std::string> chain;
    bool times = false;
    std::function<int()> action;

    auto add_space = [&](CLI::App* c) {
        c->add_option("--indep", indep, "independent variables, comma separated");
        c->add_option("--deps", deps, "dependent variables, comma separated");
    };

    // expr
    auto* expr = app.add_subcommand("expr", "expression kernel");
    expr->require_subcommand(1);
    auto* simplify = expr->add_subcommand("simplify", "print the normal form");
    simplify->add_option("text", text)->required();
    simplify->callback([&] {
        action = [&] {
            Expr e = parse(text);
            print(g, {{"result", render(e)}}, render(e) + "\n");
            return 0;
        };
    });
    auto* eval = expr->add_subcommand("eval", "evaluate numerically");
    eval->add_option("text", text)->required();
    eval->add_option("--at", at, "bindings name=value,...");
    eval->callback([&] {
        action = [&] {
            Point p;
            for (auto& kv : split(at)) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw UsageError("--at expects name=value pairs");
                p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
            double v = eval_numeric(parse(text), p);
            std::ostringstream os;
            os.precision(17);
            os << v << "\n";
            print(g, {{"value", v}}, os.str());
            return 0;
        };
    });

    // cl
    auto* cl = app.add_subcommand("cl", "conservation laws");
    cl->require_subcommand(1);
    auto* clv = cl->add_subcommand("verify", "check a multiplier, and a flux when given");
    clv->add_option("--pde", pde)->required();
    clv->add_option("--multiplier", multiplier)->required();
    clv->add_option("--flux", flux_doc, "flux document");
    add_space(clv);
    clv->callback([&] {
        action = [&] {
            JetSpace js = space_of(indep, deps);
            Expr P = parse(pde), m = parse(multiplier);
            ZeroVerdict vm = verify_multiplier(P, m, js, g.zero());
            json j = {{"multiplier", verdict_json(vm)}};
            std::string t = std::string("multiplier: ") + to_string(vm.status) + "\n";
            std::vector<ZeroVerdict> all{vm};
            if (!flux_doc.empty()) {
                FluxVector C = doc::flux(read_doc(flux_doc));
                ZeroVerdict vf = verify_flux(P, C, js, g.zero());
                j["flux"] = verdict_json(vf);
                t += std::string("flux: ") + to_string(vf.status) + "\n";
                all.push_back(vf);
            }
            print(g, j, t);
            return status_exit(combine(all));
        };
    });
    auto* cls = cl->add_subcommand("search", "multipliers in the span of a basis");
    cls->add_option("--pde", pde)->required();
    cls->add_option("--basis", basis, "comma separated candidate multipliers")->required();
    add_space(cls);
    cls->callback([&] {
        action = [&] {
            MultiplierAnsatz a;
            for (auto& b : split(basis)) a.basis.push_back(parse(b));
            auto found = multiplier_search(parse(pde), a, space_of(indep, deps));
            json j = json::array();
            std::string t;
            for (auto& e : found) {
                j.push_back(render(e));
                t += render(e) + "\n";
            }
            print(g, {{"multipliers", j}}, t);
            return 0;
        };
    });
    auto* clh = cl->add_subcommand("homotopy", "fluxes of a total divergence");
    clh->add_option("text", text, "the divergence expression")->required();
    add_space(clh);
    clh->callback([&] {
        action = [&] {
            HomotopyResult h = homotopy_flux(parse(text), space_of(indep, deps));
            std::string t;
            for (std::size_t k = 0; k < h.flux.order.size(); ++k)
                t += "C^" + h.flux.order[k] + " = " + render(h.flux.comps[k]) + "\n";
            t += "Div C - H = " + render(h.residual) + "\n";
            json j = doc::to_json(h.flux);
            j["residual"] = render(h.residual);
            print(g, j, t);
            return h.residual.is_zero() ? 0 : 1;
        };
    });

    // lie
    auto* lie = app.add_subcommand("lie", "symmetry algebra");
    lie->require_subcommand(1);
    auto* lc = lie->add_subcommand("commutators", "non-zero brackets of a list of fields");
    lc->add_option("--fields", fields_doc, "{\"fields\":{name:field},\"order\":[..],\"expected\":{\"A,B\":field}}")
        ->required();
    lc->callback([&] {
        action = [&] {
            json d = read_doc(fields_doc);
            auto fs = field_map(d);
            auto names = field_order(d, fs);
            json j = json::array();
            std::string t;
            int mismatches = 0;
            for (std::size_t a = 0; a < names.size(); ++a)
                for (std::size_t b = a + 1; b < names.size(); ++b) {
                    VectorField br = commutator(fs.at(names[a]), fs.at(names[b]));
                    if (br.is_zero()) continue;
                    std::string key = names[a] + "," + names[b];
                    json e = {{"pair", key}, {"value", doc::to_json(br)}};
                    t += "[" + names[a] + "," + names[b] + "] = " + render(br, RenderStyle::Compact) + "\n";
                    if (d.contains("expected") && d.at("expected").contains(key)) {
                        VectorField want = doc::field(d.at("expected").at(key));
                        bool same = true;
                        for (auto& [z, c] : (br - want).coeffs()) same = same && is_zero(c, g.zero()).ok();
                        e["matches_expected"] = same;
                        if (!same) {
                            ++mismatches;
                            t += "  note: differs from the expected " + render(want, RenderStyle::Compact) + "\n";
                        }
                    }
                    j.push_back(e);
                }
            print(g, {{"brackets", j}, {"mismatches", mismatches}}, t);
            return 0;
        };
    });
    auto* lch = lie->add_subcommand("chain", "solvable-chain test for an ordered list");
    lch->add_option("--fields", fields_doc)->required();
    lch->add_option("--order", chain, "field names in chain order");
    lch->callback([&] {
        action = [&] {
            json d = read_doc(fields_doc);
            auto fs = field_map(d);
            auto names = chain.empty() ? field_order(d, fs) : chain;
            std::vector<VectorField> vs;
            for (auto& n : names) vs.push_back(fs.at(n));
            ChainResult r = validate_chain(vs);
            json j = {{"valid", r.valid}};
            std::string t = r.valid ? "valid\n" : "invalid";
            if (!r.valid) {
                auto [i, k] = *r.witness;
                j["witness"] = {names[i - 1], names[k - 1]};
                t += ": [" + names[i - 1] + "," + names[k - 1] + "] leaves the span of its prefix\n";
            }
            print(g, j, t);
            return r.valid ? 0 : 1;
        };
    });
    auto* lp = lie->add_subcommand("prolong", "prolongation coefficients");
    lp->add_option("--field", field_doc)->required();
    lp->add_option("--order", order);
    add_space(lp);
    lp->callback([&] {
        action = [&] {
            ExprMap pr = prolong(doc::field(read_doc(field_doc)), order, space_of(indep, deps));
            json j = json::object();
            std::string t;
            for (auto& [a, c] : pr) {
                j[render(a)] = render(c);
                t += render(a) + ": " + render(c) + "\n";
            }
            print(g, j, t);
            return 0;
        };
    });
    auto* lk = lie->add_subcommand("check", "is the field a symmetry of the system");
    lk->add_option("--field", field_doc)->required();
    lk->add_option("--system", system_doc)->required();
    lk->callback([&] {
        action = [&] {
            PdeSystem sys = doc::system(read_doc(system_doc));
            VectorField v = doc::field(read_doc(field_doc));
            auto rs = symmetry_residuals(v, sys);
            std::vector<ZeroVerdict> vs;
            json j = json::array();
            std::string t;
            for (auto& r : rs) {
                vs.push_back(is_zero(r, g.zero()));
                j.push_back({{"residual", render(r)}, {"verdict", verdict_json(vs.back())}});
                t += std::string(to_string(vs.back().status)) + ": " + render(r, RenderStyle::Compact) + "\n";
            }
            ZeroVerdict c = combine(vs);
            print(g, {{"equations", j}, {"verdict", to_string(c.status)}}, t);
            return status_exit(c);
        };
    });

    // rps
    auto rps_args = [&](CLI::App* c) {
        c->add_option("--pde", pde)->required();
        c->add_option("--flux", flux_doc)->required();
        c->add_option("--roles", roles, "coordinate roles x1,x2,x3");
        c->add_option("--potential", potential);
        c->add_option("--orientation", orientation);
        add_space(c);
    };
    auto run_rps = [&](bool only_check) {
        JetSpace js = space_of(indep, deps);
        FluxVector C = doc::flux(read_doc(flux_doc));
        auto r = split(roles);
        if (r.size() != 3) throw UsageError("--roles needs three variables");
        Expr m = C.multiplier ? *C.multiplier : Expr(1);
        PotentialSystem ps = build_rps(parse(pde), C, m, {r[0], r[1], r[2]}, potential, js, orientation, g.zero());
        ZeroVerdict v = compatibility_check(ps, g.zero());
        json eqs = json::array();
        std::string t;
        if (!only_check)
            for (auto& q : ps.eqs) {
                eqs.push_back({{"lead", render(q.lead)}, {"rhs", render(q.solved)}});
                t += render(q.lead) + " = " + render(q.solved) + "\n";
            }
        t += std::string("compatibility: ") + to_string(v.status) + "\n";
        print(g, {{"equations", eqs}, {"compatibility", verdict_json(v)}}, t);
        return status_exit(v);
    };
    auto* rps = app.add_subcommand("rps", "reduced potential systems");
    rps->require_subcommand(1);
    auto* rb = rps->add_subcommand("build", "potential system of a conservation law");
    rps_args(rb);
    rb->callback([&] { action = [&] { return run_rps(false); }; });
    auto* rc = rps->add_subcommand("check", "compatibility of the potential system");
    rps_args(rc);
    rc->callback([&] { action = [&] { return run_rps(true); }; });

    // ips
    auto* ips = app.add_subcommand("ips", "inverse potential systems");
    ips->require_subcommand(1);
    auto* ib = ips->add_subcommand("build", "hodograph IPS of a symmetry");
    ib->add_option("--pde", pde)->required();
    ib->add_option("--field", field_doc)->required();
    ib->add_option("--chart", chart_doc, "{\"chi\":[..],\"w\":..,\"M\":..,\"coords\":{new:old}}")->required();
    add_space(ib);
    ib->callback([&] {
        action = [&] {
            json cj = read_doc(chart_doc);
            HodographChart ch;
            for (auto& s : cj.at("chi")) ch.chi.push_back(s.get<std::string>());
            ch.w = cj.at("w").get<std::string>();
            ch.M = cj.at("M").get<std::string>();
            for (auto& [k, v] : cj.at("coords").items()) ch.coords.emplace(sym(k), parse(v.get<std::string>()));
            IpsResult r = build_ips_hodograph(parse(pde), space_of(indep, deps), doc::field(read_doc(field_doc)), ch,
                                              std::nullopt, g.zero());
            json j = {{"transformed", render(r.transformed)}, {"cleared_power", r.cleared_power},
                      {"system", doc::to_json(r.ips)}};
            std::string t = "transformed: " + render(r.transformed) + "\n";
            for (auto& q : r.ips.eqs) t += render(q.lead) + " = " + render(q.solved) + "\n";
            print(g, j, t);
            return 0;
        };
    });

    // reduce
    auto* red = app.add_subcommand("reduce", "change of variables and double reduction");
    red->require_subcommand(1);
    auto* rj = red->add_subcommand("jacobian", "Y and (K^-1)^T of a point transformation");
    rj->add_option("--transform", transform_doc)->required();
    rj->callback([&] {
        action = [&] {
            PointTransform T = doc::transform(read_doc(transform_doc));
            JacobianData J = jacobian(T);
            json m = json::array();
            std::string t = "Y = " + render(J.Y) + "\n";
            for (std::size_t j = 0; j < T.new_js.indep.size(); ++j) {
                json row = json::array();
                for (std::size_t i = 0; i < T.old_js.indep.size(); ++i) {
                    row.push_back(render(J.Kinv[i][j]));
                    t += (i ? " | " : "") + render(J.Kinv[i][j]);
                }
                t += "\n";
                m.push_back(row);
            }
            print(g, {{"Y", render(J.Y)}, {"KinvT", m}}, t);
            return 0;
        };
    });
    auto* rf = red->add_subcommand("fluxes", "fluxes in the new chart");
    rf->add_option("--transform", transform_doc)->required();
    rf->add_option("--flux", flux_doc)->required();
    rf->callback([&] {
        action = [&] {
            FluxTransform ft = transform_fluxes(doc::flux(read_doc(flux_doc)), doc::transform(read_doc(transform_doc)));
            ZeroVerdict v = is_zero(ft.identity_residual, g.zero());
            json j = doc::to_json(ft.flux);
            j["identity"] = verdict_json(v);
            std::string t;
            for (std::size_t k = 0; k < ft.flux.order.size(); ++k)
                t += "C^" + ft.flux.order[k] + " = " + render(ft.flux.comps[k]) + "\n";
            t += std::string("Y*Div C - Div' C~: ") + to_string(v.status) + "\n";
            print(g, j, t);
            return status_exit(v);
        };
    });
    auto* rd = red->add_subcommand("double", "reduced fluxes along a translation coordinate");
    rd->add_option("--transform", transform_doc)->required();
    rd->add_option("--flux", flux_doc)->required();
    rd->add_option("--translation", translation);
    rd->callback([&] {
        action = [&] {
            DoubleReduction d =
                double_reduce(doc::flux(read_doc(flux_doc)), doc::transform(read_doc(transform_doc)), translation);
            json j = json::object();
            std::string t;
            for (std::size_t k = 0; k < d.full.flux.order.size(); ++k) {
                if (d.full.flux.order[k] == translation) continue;
                j[d.full.flux.order[k]] = render(d.reduced[k]);
                t += "C^" + d.full.flux.order[k] + " = " + render(d.reduced[k]) + "\n";
            }
            Expr div = reduced_divergence(d);
            j["divergence"] = render(div);
            t += "reduced divergence = " + render(div) + "\n";
            print(g, j, t);
            return 0;
        };
    });

    // cole-hopf
    auto* ch = app.add_subcommand("cole-hopf", "Cole-Hopf transport (mu^k = -2 nu D_k ln f)");
    ch->require_subcommand(1);
    auto* chf = ch->add_subcommand("forward", "heat solution to Burgers pair");
    chf->add_option("--f", f)->required();
    chf->add_option("--nu", nu, "viscosity 1/Re");
    chf->callback([&] {
        action = [&] {
            ColeHopfPair p;
            p.nu = parse(nu);
            Expr F = parse(f);
            auto m = cole_hopf_forward(F, p);
            ZeroVerdict h = is_zero(heat_residual(F, p), g.zero());
            print(g, {{"mu1", render(m[0])}, {"mu2", render(m[1])}, {"heat", verdict_json(h)}},
                  "mu1 = " + render(m[0]) + "\nmu2 = " + render(m[1]) + "\nheat residual: " + to_string(h.status) +
                      "\n");
            return 0;
        };
    });
    auto* chi = ch->add_subcommand("inverse", "Burgers component to heat solution");
    chi->add_option("--mu", mu)->required();
    chi->add_option("--A", A, "antiderivative with D_k A = mu (component k)")->required();
    chi->add_option("--nu", nu);
    chi->add_option("--component", component, "0 for x, 1 for y");
    chi->callback([&] {
        action = [&] {
            ColeHopfPair p;
            p.nu = parse(nu);
            ColeHopfInverse r = cole_hopf_inverse(parse(mu), parse(A), p, component, g.zero());
            print(g,
                  {{"f", render(r.f)},
                   {"antiderivative", verdict_json(r.antiderivative)},
                   {"round_trip", verdict_json(r.round_trip)}},
                  "f = " + render(r.f) + "\nantiderivative: " + to_string(r.antiderivative.status) +
                      "\nround trip: " + to_string(r.round_trip.status) + "\n");
            return status_exit(combine({r.antiderivative, r.round_trip}));
        };
    });

    // check-solution
    auto* cs = app.add_subcommand("check-solution", "substitute a closed-form solution");
    cs->add_option("--system", system_doc)->required();
    cs->add_option("--solution", solution_doc, "{dep: expression}")->required();
    cs->add_option("--grid", grid, "grid points instead of the zero test (0: off)");
    cs->callback([&] {
        action = [&] {
            PdeSystem sys = doc::system(read_doc(system_doc));
            Solution sol;
            for (auto& [k, v] : read_doc(solution_doc).items()) sol.emplace(k, parse(v.get<std::string>()));
            if (grid > 0) {
                GridSpec spec;
                spec.points = grid;
                spec.seed = g.seed;
                spec.tol = g.tol;
                GridResult r = grid_residual(sys, sol, spec);
                print(g, {{"status", to_string(r.status)}, {"max_abs", r.max_abs}, {"accepted", r.accepted}},
                      std::string(to_string(r.status)) + " max " + std::to_string(r.max_abs) + " over " +
                          std::to_string(r.accepted) + " points\n");
                return r.status == ZeroStatus::NumericZero ? 0 : 1;
            }
            SolutionCheck r = verify_solution(sys, sol, g.zero());
            json j = json::array();
            std::string t;
            for (auto& e : r.residuals) {
                j.push_back(render(e));
                t += render(e, RenderStyle::Compact) + "\n";
            }
            t += std::string(to_string(r.verdict.status)) + "\n";
            print(g, {{"residuals", j}, {"verdict", verdict_json(r.verdict)}}, t);
            return status_exit(r.verdict);
        };
    });

    // claims
    auto* claims = app.add_subcommand("claims", "claim corpus");
    claims->require_subcommand(1);
    auto* run = claims->add_subcommand("run", "verify every claim");
    run->add_option("--claims", claims_path)->required();
    run->add_option("--out", out_path, "report path");
    run->add_option("--jobs", jobs);
    run->add_option("--grid-points", grid);
    run->add_option("--only", only, "comma separated claim ids");
    run->add_flag("--times", times, "include wall times in the report");
    run->callback([&] {
        action = [&] {
            ClaimSet set = load_claims(claims_path);
            for (auto& w : set.warnings) std::cerr << "warning: " << w << "\n";
            RunOptions ro;
            ro.mode = parse_mode(g.mode);
            ro.seed = g.seed;
            ro.samples = g.samples;
            ro.tol = g.tol;
            ro.jobs = jobs;
            if (grid > 0) ro.grid_points = grid;
            ro.only = split(only);
            Report rep = run_claims(set, ro);
            json j = to_json(rep, times);
            if (!out_path.empty()) {
                std::ofstream o(out_path);
                if (!o) throw UsageError("cannot write " + out_path);
                o << j.dump(2) << "\n";
            }
            std::ostringstream t;
            for (auto& r : rep.results)
                t << (r.outcome == "met" ? "ok   " : r.outcome == "unknown" ? "?    " : "FAIL ") << r.id << "  "
                  << r.verdict << " (expect " << r.expect << ")\n";
            for (auto& c : rep.census) {
                t << "census " << (c.covered() ? "ok   " : "GAP  ") << c.claims << "  " << c.bullet;
                for (auto& m : c.missing) t << "  [missing " << m << "]";
                t << "\n";
            }
            t << rep.results.size() << " claims: " << rep.met << " met, " << rep.unexpected << " unexpected, "
              << rep.unknown << " unknown\n";
            if (g.json_out())
                std::cout << j.dump(2) << "\n";
            else
                std::cout << t.str();
            return rep.all_met() && rep.census_complete() ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        if (rc != 0) {
            std::cerr << kGrammar;
            return kUsage;
        }
        return 0;
    }
    try {
        return action ? action() : kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << kGrammar;
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error at offset " << e.offset() << ": " << e.what() << "\n" << kGrammar;
        return kUsage;
    } catch (const ClaimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed document: " << e.what() << "\n" << kGrammar;
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
