#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "diaglab/analysis.hpp"
#include "diaglab/diagonal.hpp"
#include "diaglab/enumerate.hpp"
#include "diaglab/error.hpp"
#include "diaglab/parse.hpp"
#include "gen.hpp"

using namespace diaglab;

namespace {

EnumTerm builder(BuilderName n) { return build_enumeration({n, 0, {}}); }

int form_at(const std::vector<uint8_t>& pre, const std::vector<uint8_t>& per,
            uint64_t i) {
    if (i < pre.size()) return pre[i];
    return per[(i - pre.size()) % per.size()];
}

// Brute-force reference normalization: smallest eventual period d, then the
// smallest preperiod p for that d.
EventuallyPeriodic naive_normalize(const std::vector<uint8_t>& pre,
                                   const std::vector<uint8_t>& per) {
    for (size_t d = 1; d <= per.size(); ++d) {
        for (size_t p = 0; p <= pre.size() + per.size(); ++p) {
            size_t limit = pre.size() + per.size() * d + d + p + 2;
            bool ok = true;
            for (size_t i = p; i + d < limit; ++i)
                if (form_at(pre, per, i) != form_at(pre, per, i + d)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            EventuallyPeriodic out;
            for (size_t i = 0; i < p; ++i)
                out.pre.push_back(static_cast<uint8_t>(form_at(pre, per, i)));
            for (size_t i = p; i < p + d; ++i)
                out.per.push_back(static_cast<uint8_t>(form_at(pre, per, i)));
            return out;
        }
    }
    return {pre, per};  // unreachable: d = per.size() always works
}

}  // namespace

TEST_CASE("ep_normalize: fixed cases") {
    CHECK(ep_normalize({}, {1, 1}) == EventuallyPeriodic{{}, {1}});
    CHECK(ep_normalize({1}, {1}) == EventuallyPeriodic{{}, {1}});
    CHECK(ep_normalize({0, 1}, {0, 1}) == EventuallyPeriodic{{}, {0, 1}});
    // pre can be absorbed into a rotation of the period
    CHECK(ep_normalize({1, 0, 1}, {0, 1}) == EventuallyPeriodic{{}, {1, 0}});
    CHECK(ep_normalize({0, 1}, {1, 0}) ==
          EventuallyPeriodic{{0, 1}, {1, 0}});
    CHECK(ep_normalize({}, {0, 1, 0, 1, 0, 1}) ==
          EventuallyPeriodic{{}, {0, 1}});
}

TEST_CASE("ep_normalize agrees with the brute-force reference") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 300; ++t) {
        std::vector<uint8_t> pre(rng() % 12), per(1 + rng() % 8);
        for (auto& b : pre) b = static_cast<uint8_t>(rng() % 2);
        for (auto& b : per) b = static_cast<uint8_t>(rng() % 2);
        EventuallyPeriodic got = ep_normalize(pre, per);
        EventuallyPeriodic want = naive_normalize(pre, per);
        REQUIRE(got == want);
        // same denoted sequence
        for (uint64_t i = 0; i < pre.size() + 3 * per.size() + 8; ++i)
            REQUIRE(got.at(i) == form_at(pre, per, i));
        // idempotent
        REQUIRE(ep_normalize(got.pre, got.per) == got);
    }
}

TEST_CASE("certificates are sound: cert.at == direct evaluation") {
    std::mt19937_64 rng(32);
    int certified = 0;
    for (int t = 0; t < 400; ++t) {
        SeqTerm s = testgen::gen_seq(rng, 3);
        auto cert = try_ep_of_term(s);
        if (!cert) continue;
        ++certified;
        uint64_t limit = cert->pre.size() + 4 * cert->per.size() + 128;
        for (uint64_t i = 0; i < limit; ++i)
            REQUIRE_MESSAGE(cert->at(i) == eval_seq(s, i), print_term(s));
        // certificates come out normalized
        REQUIRE(ep_normalize(cert->pre, cert->per) == *cert);
    }
    CHECK(certified >= 50);
}

TEST_CASE("ep_of_term refuses what it cannot certify") {
    CHECK_THROWS_AS(ep_of_term(row(builder(BuilderName::HashRows), 0)),
                    NotEventuallyPeriodicError);
    CHECK_THROWS_AS(ep_of_term(z_direct(builder(BuilderName::HashRows))),
                    NotEventuallyPeriodicError);
    // and certifies the easy ones
    EventuallyPeriodic alt = ep_of_term(parse_seq("(i + 1) mod 2"));
    CHECK(alt == EventuallyPeriodic{{}, {1, 0}});
    EventuallyPeriodic one = ep_of_term(parse_seq("1"));
    CHECK(one == EventuallyPeriodic{{}, {1}});
    EventuallyPeriodic idiag =
        ep_of_term(diag_classical(builder(BuilderName::Identity)));
    CHECK(idiag == EventuallyPeriodic{{}, {0}});
}

TEST_CASE("ep_equal agrees with pointwise comparison up to the bound") {
    std::mt19937_64 rng(33);
    int pairs = 0;
    while (pairs < 200) {
        auto a = try_ep_of_term(
            SeqTerm(testgen::gen_arith(rng, testgen::Ctx::Seq, 3)));
        auto b = try_ep_of_term(
            SeqTerm(testgen::gen_arith(rng, testgen::Ctx::Seq, 3)));
        if (!a || !b) continue;
        ++pairs;
        uint64_t bound = std::max(a->pre.size(), b->pre.size()) +
                         std::lcm(a->per.size(), b->per.size());
        bool pointwise = true;
        for (uint64_t i = 0; i < bound; ++i)
            if (a->at(i) != b->at(i)) {
                pointwise = false;
                break;
            }
        REQUIRE(ep_equal(*a, *b) == pointwise);
    }
}

TEST_CASE("find_disagreement") {
    SeqTerm zero = parse_seq("0");
    SeqTerm alt = parse_seq("i mod 2");
    auto d = find_disagreement(zero, alt, 64);
    REQUIRE(d.has_value());
    CHECK(*d == 1);
    CHECK(!find_disagreement(zero, zero, 64).has_value());
}

TEST_CASE("verify_escape yields disagreement witnesses for real diagonals") {
    EnumTerm e = builder(BuilderName::HashRows);
    SeqTerm d = diag_classical(e);
    auto ws = verify_escape(e, d, 32, 64);
    REQUIRE(ws.size() == 32);
    for (const Witness& w : ws) {
        CHECK(w.kind == WitnessKind::Disagreement);
        REQUIRE(w.position.has_value());
        CHECK(*w.position <= w.row);  // diagonal flips at the row index
        CHECK(eval_seq(d, *w.position) != eval_enum(e, w.row, *w.position));
    }
    // absence of a disagreement stays unknown, never "equal"
    auto ws0 = verify_escape(e, row(e, 0), 1, 64);
    CHECK(ws0[0].kind == WitnessKind::Unknown);
    CHECK(!ws0[0].position.has_value());
}

TEST_CASE("membership_scan: the three verdicts") {
    EnumTerm ce = builder(BuilderName::CounterExample);
    SeqTerm b = diag_perm_row(ce, transposition(0, 1));
    auto ws = membership_scan(b, ce, 8, 64);
    REQUIRE(ws.size() == 8);
    CHECK(ws[0].kind == WitnessKind::ProvenEqual);
    CHECK(ws[1].kind == WitnessKind::ProvenEqual);  // rows 0 and 1 coincide
    for (size_t k = 2; k < 8; ++k) {
        CHECK(ws[k].kind == WitnessKind::Disagreement);
        REQUIRE(ws[k].position.has_value());
        CHECK(eval_seq(b, *ws[k].position) !=
              eval_enum(ce, k, *ws[k].position));
    }

    EnumTerm h = builder(BuilderName::HashRows);
    for (const Witness& w : membership_scan(diag_classical(h), h, 16, 64))
        CHECK(w.kind == WitnessKind::Disagreement);

    // pseudorandom rows carry no certificate: agreement stays unknown
    auto unknown = membership_scan(row(h, 0), h, 1, 64);
    CHECK(unknown[0].kind == WitnessKind::Unknown);

    // z over hashrows: never proven equal, only disagreement or unknown
    for (const Witness& w : membership_scan(z_direct(h), h, 16, 64))
        CHECK(w.kind != WitnessKind::ProvenEqual);
}

TEST_CASE("membership_scan locates disagreements beyond the horizon") {
    // two certified sequences that first differ at index 100
    EnumTerm e = parse_enum("if(lt(k, 1), lt(i, 100), i mod 2)");
    SeqTerm ones = parse_seq("1");
    auto ws = membership_scan(ones, e, 1, 8);  // horizon far too small
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].kind == WitnessKind::Disagreement);
    REQUIRE(ws[0].position.has_value());
    CHECK(*ws[0].position == 100);
}

TEST_CASE("witness CSV rendering") {
    std::vector<Witness> ws;
    ws.push_back({WitnessKind::Disagreement, 0, 5, 64});
    ws.push_back({WitnessKind::Unknown, 1, std::nullopt, 64});
    ws.push_back({WitnessKind::ProvenEqual, 2, std::nullopt, 64});
    CHECK(witnesses_to_csv(ws, true) ==
          "row,kind,position,horizon\r\n"
          "0,disagreement,5,64\r\n"
          "1,unknown,,64\r\n"
          "2,proven_equal,,64\r\n");
    CHECK(witnesses_to_csv({}, false).empty());
    CHECK(witness_kind_name(WitnessKind::Disagreement) == "disagreement");
}
