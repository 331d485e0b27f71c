#ifndef NLK_CLAIMS_HPP
#define NLK_CLAIMS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlk/chvar.hpp"
#include "nlk/jet.hpp"
#include "nlk/numeric.hpp"
#include "nlk/vfield.hpp"

namespace nlk {

using json = nlohmann::json;

class ClaimError : public std::runtime_error {
public:
    ClaimError(const std::string& id, const std::string& field, const std::string& msg)
        : std::runtime_error((id.empty() ? std::string("corpus") : "claim '" + id + "'") + ", field '" + field +
                             "': " + msg),
          id_(id), field_(field) {}
    const std::string& id() const { return id_; }
    const std::string& field() const { return field_; }

private:
    std::string id_, field_;
};

// Parameter bindings: symbols and opaque functions of symbols (derivatives of a
// bound function follow from its body).
class Binder {
public:
    Binder() = default;
    explicit Binder(const std::map<std::string, std::string>& params, const ParseContext& ctx = {});
    Expr operator()(const Expr& e) const;
    bool empty() const { return syms_.empty() && funcs_.empty(); }

private:
    ExprMap syms_;
    std::vector<std::pair<Expr, Expr>> funcs_;
};

// JSON documents shared by the corpus and the command line.
namespace doc {
JetSpace space(const json& j);
PdeSystem system(const json& j, const Binder& b = {}, const ParseContext& ctx = {});
VectorField field(const json& j, const Binder& b = {}, const ParseContext& ctx = {});
FluxVector flux(const json& j, const Binder& b = {}, const ParseContext& ctx = {});
PointTransform transform(const json& j, const Binder& b = {}, const ParseContext& ctx = {});
json to_json(const VectorField& v);
json to_json(const PdeSystem& s);
json to_json(const FluxVector& c);
}  // namespace doc

struct Claim {
    std::string id;
    std::string kind;
    std::string anchor;
    std::string expect;
    std::map<std::string, std::string> params;
    std::map<std::string, std::string> exprs;
    std::map<std::string, std::string> refs;
    json options = json::object();
    std::string note;
};

// A coverage row: every pattern must occur in the anchor of at least one claim.
struct CensusRow {
    std::string bullet;
    std::vector<std::string> require;
};

struct ClaimSet {
    int version = 1;
    json definitions = json::object();  // systems, fields, fluxes, transforms
    std::vector<Claim> claims;
    std::vector<CensusRow> census;
    std::vector<std::string> warnings;
};

const std::vector<std::string>& claim_kinds();
const std::vector<std::string>& expected_verdicts();

ClaimSet parse_claims(const json& j);
ClaimSet load_claims(const std::string& path);

struct RunOptions {
    ZeroMode mode = ZeroMode::Auto;
    std::uint64_t seed = 42;
    int samples = 16;
    double tol = 1e-9;
    int grid_points = 1000;
    int jobs = 1;
    std::vector<std::string> only;  // claim ids; empty runs all
};

// Verdicts beyond the zero-test ones: Error for a claim that could not run.
struct ClaimResult {
    std::string id, kind, anchor, expect;
    std::string verdict;   // SymbolicZero | NumericZero | NonZero | Unknown | Error
    std::string oracle;    // verdict of the independent oracle, when the claim has one
    std::string outcome;   // met | unexpected | unknown
    std::string detail;
    std::string residual_hash;
    double max_numeric = 0.0;
    double wall_ms = 0.0;
};

struct CensusResult {
    std::string bullet;
    int claims = 0;                    // claims matching any pattern of the row
    std::vector<std::string> missing;  // patterns no anchor contains
    bool covered() const { return claims > 0 && missing.empty(); }
};

std::vector<CensusResult> census(const ClaimSet& set);

struct Report {
    std::string toolkit_version;
    std::uint64_t seed = 42;
    std::string mode;
    double tol = 1e-9;
    std::vector<ClaimResult> results;  // sorted by id
    int met = 0, unexpected = 0, unknown = 0;
    std::vector<CensusResult> census;  // empty when the corpus has no census
    bool census_complete() const;
    bool all_met() const { return unexpected == 0; }
};

ClaimResult run_claim(const ClaimSet& set, const Claim& c, const RunOptions& opt);
Report run_claims(const ClaimSet& set, const RunOptions& opt);

json to_json(const Report& r, bool with_times = true);

// Stable 64-bit FNV-1a of the canonical rendering, as 16 hex digits.
std::string expr_hash(const Expr& e);

const char* toolkit_version();

}  // namespace nlk

#endif
