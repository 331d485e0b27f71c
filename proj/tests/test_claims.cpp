#include <gtest/gtest.h>

#include <cstdlib>

#include "nlk/claims.hpp"

using namespace nlk;

namespace {

std::string corpus_path() {
    const char* d = std::getenv("NLK_DATA");
    return std::string(d ? d : "data") + "/corpus.json";
}

const ClaimSet& corpus() {
    static const ClaimSet set = load_claims(corpus_path());
    return set;
}

json claim(const std::string& id, const std::string& kind = "commutator") {
    return {{"id", id},
            {"kind", kind},
            {"anchor", "unit"},
            {"expect", "SymbolicZero"},
            {"options", {{"fields", {"A", "A"}}}},
            {"exprs", {{"printed.x", "0"}}}};
}

json minimal(json claims) {
    return {{"version", 1},
            {"definitions", {{"fields", {{"A", {{"x", "1"}}}}}}},
            {"claims", std::move(claims)}};
}

const ClaimResult& find(const Report& r, const std::string& id) {
    for (auto& c : r.results)
        if (c.id == id) return c;
    throw std::runtime_error("no result " + id);
}

}  // namespace

TEST(Load, EmptyCorpusWarns) {
    ClaimSet s = parse_claims(minimal(json::array()));
    ASSERT_EQ(s.warnings.size(), 1u);
    EXPECT_TRUE(s.claims.empty());
    Report r = run_claims(s, {});
    EXPECT_TRUE(r.results.empty());
    EXPECT_TRUE(r.all_met());
}

TEST(Load, DuplicateIdIsAnError) {
    EXPECT_THROW(parse_claims(minimal({claim("a"), claim("a")})), ClaimError);
    try {
        parse_claims(minimal({claim("a"), claim("a")}));
    } catch (const ClaimError& e) {
        EXPECT_EQ(e.id(), "a");
    }
}

TEST(Load, StructuralErrors) {
    json v = minimal({claim("a")});
    v["version"] = 2;
    EXPECT_THROW(parse_claims(v), ClaimError);
    EXPECT_THROW(parse_claims(minimal({claim("a", "astrology")})), ClaimError);
    json e = claim("a");
    e["expect"] = "Maybe";
    EXPECT_THROW(parse_claims(minimal({e})), ClaimError);
    json c = minimal({claim("a")});
    c["census"] = json::array({{{"bullet", "b"}, {"require", json::array()}}});
    EXPECT_THROW(parse_claims(c), ClaimError);
    EXPECT_THROW(parse_claims(json::array()), ClaimError);
}

TEST(Run, ClaimErrorsBecomeErrorVerdicts) {
    json bad = claim("broken");
    bad["options"]["fields"] = {"A", "Missing"};
    Report r = run_claims(parse_claims(minimal({claim("fine"), bad})), {});
    EXPECT_EQ(find(r, "fine").outcome, "met");
    EXPECT_EQ(find(r, "broken").verdict, "Error");
    EXPECT_EQ(r.unexpected, 1);
    EXPECT_FALSE(r.all_met());
}

TEST(Corpus, SingleCommutatorMismatchIsMet) {
    RunOptions o;
    o.only = {"commutator.V2V5"};
    Report r = run_claims(corpus(), o);
    ASSERT_EQ(r.results.size(), 1u);
    EXPECT_EQ(r.results[0].expect, "PaperMismatch");
    EXPECT_EQ(r.results[0].verdict, "NonZero");
    EXPECT_EQ(r.results[0].outcome, "met");
    EXPECT_TRUE(r.census.empty());
}

TEST(Corpus, AllExpectedVerdictsAndCensus) {
    Report r = run_claims(corpus(), {});
    EXPECT_EQ(r.results.size(), corpus().claims.size());
    EXPECT_EQ(r.unexpected, 0);
    EXPECT_EQ(r.unknown, 0);
    EXPECT_TRUE(r.census_complete());
    EXPECT_FALSE(r.census.empty());
    for (auto& c : r.census) EXPECT_GE(c.claims, 1) << c.bullet;
}

TEST(Corpus, TightToleranceDegradesToUnknown) {
    RunOptions o;
    o.tol = 1e-15;
    Report r = run_claims(corpus(), o);
    EXPECT_EQ(r.unexpected, 0);
    EXPECT_GE(r.unknown, 1);
    EXPECT_EQ(find(r, "cole-hopf.forward.5.12.mu1").verdict, "Unknown");
    EXPECT_TRUE(r.all_met());
}

// ---- properties

TEST(ClaimsProperty, ReportDeterministicWithoutTimes) {
    RunOptions o;
    o.seed = 7;
    std::string a = to_json(run_claims(corpus(), o), false).dump();
    std::string b = to_json(run_claims(corpus(), o), false).dump();
    EXPECT_EQ(a, b);
    json j = json::parse(a);
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 7u);
    for (auto& c : j.at("claims")) EXPECT_FALSE(c.contains("wall_ms"));
}

TEST(ClaimsProperty, ResultsSortedById) {
    Report r = run_claims(corpus(), {});
    for (std::size_t i = 1; i < r.results.size(); ++i) EXPECT_LT(r.results[i - 1].id, r.results[i].id);
}

TEST(ClaimsProperty, CensusFlagsMissingPatterns) {
    ClaimSet s = corpus();
    s.census.push_back({"synthetic", {"no anchor has this text"}});
    auto rows = census(s);
    ASSERT_FALSE(rows.empty());
    EXPECT_FALSE(rows.back().covered());
    EXPECT_EQ(rows.back().missing.size(), 1u);
}

TEST(Hash, StableHex) {
    std::string h = expr_hash(parse("u_x + 1"));
    EXPECT_EQ(h.size(), 16u);
    EXPECT_EQ(h, expr_hash(parse("1 + u_x")));
    EXPECT_NE(h, expr_hash(parse("u_x + 2")));
}
