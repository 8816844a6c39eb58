// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Timed criteria report elapsed wall time and enforce their budget.
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "diaglab/analysis.hpp"
#include "diaglab/codec.hpp"
#include "diaglab/diagonal.hpp"
#include "diaglab/enumerate.hpp"
#include "diaglab/parse.hpp"
#include "gen.hpp"

using namespace diaglab;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    const char* name;
    double budget_s;  // 0 = untimed
    Clock::time_point start = Clock::now();
    bool ok = true;

    void check(bool cond) {
        if (!cond) ok = false;
    }
    ~Criterion() {
        double s = std::chrono::duration<double>(Clock::now() - start).count();
        bool in_budget = budget_s == 0 || s < budget_s;
        bool pass = ok && in_budget;
        if (budget_s > 0)
            std::printf("%-4s %s (%.2fs, budget %.0fs)\n",
                        pass ? "PASS" : "FAIL", name, s, budget_s);
        else
            std::printf("%-4s %s (%.2fs)\n", pass ? "PASS" : "FAIL", name, s);
        if (!pass) ++g_failures;
    }
};

std::vector<EnumTerm> corpus() {
    std::vector<EnumTerm> out;
    out.push_back(build_enumeration({BuilderName::Zeros, 0, {}}));
    out.push_back(build_enumeration({BuilderName::Ones, 0, {}}));
    out.push_back(build_enumeration({BuilderName::Identity, 0, {}}));
    out.push_back(build_enumeration({BuilderName::BinaryNaturals, 0, {}}));
    out.push_back(build_enumeration({BuilderName::HashRows, 2026, {}}));
    out.push_back(build_enumeration(
        {BuilderName::DoublyPeriodic, 0, {{0, 1, 1}, {1, 0, 0}}}));
    return out;
}

}  // namespace

int main() {
    std::mt19937_64 rng(0xACCE'97);

    {  // 1: flip law over builders + 100 generated enumerations, 512-prefix
        Criterion c{"1 flip law, 512-prefix, builder corpus + 100 generated",
                    2.0};
        std::vector<EnumTerm> es = corpus();
        for (int t = 0; t < 100; ++t) es.push_back(testgen::gen_sdl_enum(rng));
        for (const EnumTerm& e : es) {
            SeqTerm d = diag_classical(e);
            for (uint64_t i = 0; i < 512; ++i)
                c.check(eval_seq(d, i) == 1 - eval_enum(e, i, i));
        }
    }

    {  // 2: identity-permutation variants reduce to the classical diagonal
        Criterion c{"2 reduction law, identity permutation, 512-prefix", 0};
        for (const EnumTerm& e : corpus()) {
            SeqTerm d = diag_classical(e);
            SeqTerm dr = diag_perm_row(e, FiniteSupportPerm());
            SeqTerm dt = diag_perm_transversal(e, FiniteSupportPerm());
            for (uint64_t i = 0; i < 512; ++i) {
                c.check(eval_seq(dr, i) == eval_seq(d, i));
                c.check(eval_seq(dt, i) == eval_seq(d, i));
            }
        }
    }

    {  // 3: transversal escape for unrank(0..63), rows k < 64
        Criterion c{"3 transversal escape, perms #0..#63, rows 0..63", 5.0};
        for (const EnumTerm& e : corpus()) {
            for (uint64_t pn = 0; pn < 64; ++pn) {
                FiniteSupportPerm p = unrank_perm(pn);
                SeqTerm d = diag_perm_transversal(e, p);
                for (uint64_t k = 0; k < 64; ++k) {
                    uint64_t pos = p.apply(k);
                    c.check(eval_seq(d, pos) != eval_enum(e, k, pos));
                }
            }
        }
    }

    {  // 4: row-variant failure on the counterexample enumeration
        Criterion c{"4 row variant lands on row 0 of the counterexample "
                    "(proven_equal)",
                    0};
        EnumTerm ce = build_enumeration({BuilderName::CounterExample, 0, {}});
        SeqTerm b = diag_perm_row(ce, transposition(0, 1));
        auto ws = membership_scan(b, ce, 64, 256);
        c.check(ws.size() == 64);
        c.check(ws[0].kind == WitnessKind::ProvenEqual);
        for (size_t k = 2; k < ws.size(); ++k)
            c.check(ws[k].kind == WitnessKind::Disagreement);
    }

    {  // 5: z coherence and escape from the Y family
        Criterion c{"5 z coherence (256-prefix) and escape from Y (k < 128)",
                    0};
        for (const EnumTerm& e : corpus()) {
            SeqTerm z = z_direct(e);
            EnumTerm y = build_y(e, DiagVariant::Row);
            SeqTerm dy = diag_classical(y);
            for (uint64_t i = 0; i < 256; ++i)
                c.check(eval_seq(z, i) == eval_seq(dy, i));
            for (uint64_t k = 0; k < 128; ++k)
                c.check(eval_seq(dy, k) != eval_enum(y, k, k));
        }
    }

    EnumTerm x = build_enumeration({BuilderName::HashRows, 2026, {}});
    EnumTerm yfam = build_y(x, DiagVariant::Row);

    {  // 6: tower escape and prepend linkage up to level 16
        Criterion c{"6 tower n<=16: escape k < 128, x_{n+1} row 0 = w_n",
                    10.0};
        for (uint64_t n = 1; n <= 16; ++n) {
            TowerLevel lvl = tower(x, yfam, n);
            for (uint64_t k = 0; k < 128; ++k)
                c.check(eval_seq(lvl.w_n, k) != eval_enum(lvl.x_n, k, k));
            TowerLevel next = tower(x, yfam, n + 1);
            for (uint64_t i = 0; i < 128; ++i)
                c.check(eval_enum(next.x_n, 0, i) == eval_seq(lvl.w_n, i));
        }
    }

    {  // 7: the dovetailed limit contains every w_n and is still escapable
        Criterion c{"7 x_infinity layout (w_n at row 2(n-1)) and diagonal "
                    "escape",
                    0};
        EnumTerm xi = x_infinity(x, yfam);
        for (uint64_t n = 1; n <= 16; ++n) {
            TowerLevel lvl = tower(x, yfam, n);
            for (uint64_t i = 0; i < 128; ++i)
                c.check(eval_enum(xi, 2 * (n - 1), i) ==
                        eval_seq(lvl.w_n, i));
        }
        SeqTerm d = diag_classical(xi);
        for (uint64_t k = 0; k < 128; ++k)
            c.check(eval_seq(d, k) != eval_enum(xi, k, k));
    }

    {  // 8: countability witnesses
        Criterion c{"8 pair/unpair (n < 1e5, a,b < 300), unrank/rank "
                    "(n < 500, distinct)",
                    0};
        for (uint64_t n = 0; n < 100'000; ++n) {
            auto [a, b] = unpair_index(n);
            c.check(pair_index(a, b) == n);
        }
        for (uint64_t a = 0; a < 300; ++a)
            for (uint64_t b = 0; b < 300; ++b) {
                auto [ra, rb] = unpair_index(pair_index(a, b));
                c.check(ra == a && rb == b);
            }
        std::set<std::vector<uint32_t>> seen;
        for (uint64_t n = 0; n < 500; ++n) {
            FiniteSupportPerm p = unrank_perm(n);
            c.check(rank_perm(p) == n);
            c.check(seen.insert(p.table()).second);
        }
    }

    {  // 9: codec roundtrip on a corpus including the deep engine objects
        Criterion c{"9 codec roundtrip, >= 100 terms incl. x_infinity and "
                    "w_16",
                    0};
        int count = 0;
        auto roundtrip_enum = [&](const EnumTerm& t) {
            DecodedTerm back = decode_term(encode_term(t));
            c.check(std::holds_alternative<EnumTerm>(back) &&
                    std::get<EnumTerm>(back) == t);
            ++count;
        };
        auto roundtrip_seq = [&](const SeqTerm& t) {
            DecodedTerm back = decode_term(encode_term(t));
            c.check(std::holds_alternative<SeqTerm>(back) &&
                    std::get<SeqTerm>(back) == t);
            ++count;
        };
        roundtrip_enum(x_infinity(x, yfam));
        roundtrip_seq(tower(x, yfam, 16).w_n);
        for (const EnumTerm& e : corpus()) roundtrip_enum(e);
        for (int t = 0; t < 60; ++t) roundtrip_seq(testgen::gen_seq(rng));
        for (int t = 0; t < 60; ++t) roundtrip_enum(testgen::gen_enum(rng));
        c.check(count >= 100);
    }

    {  // 10: EP normalization and decidable equality
        Criterion c{"10 EP normalization (200 inputs) and ep_equal vs "
                    "pointwise (200 pairs)",
                    0};
        for (int t = 0; t < 200; ++t) {
            std::vector<uint8_t> pre(rng() % 16), per(1 + rng() % 10);
            for (auto& b : pre) b = static_cast<uint8_t>(rng() % 2);
            for (auto& b : per) b = static_cast<uint8_t>(rng() % 2);
            EventuallyPeriodic n1 = ep_normalize(pre, per);
            // same sequence, idempotent, minimal
            auto at = [&](uint64_t i) {
                return i < pre.size()
                           ? pre[i]
                           : per[(i - pre.size()) % per.size()];
            };
            for (uint64_t i = 0; i < pre.size() + 3 * per.size() + 4; ++i)
                c.check(n1.at(i) == at(i));
            c.check(ep_normalize(n1.pre, n1.per) == n1);
            c.check(n1.per.size() <= per.size() && n1.pre.size() <= pre.size());
        }
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
                if (a->at(i) != b->at(i)) pointwise = false;
            c.check(ep_equal(*a, *b) == pointwise);
        }
    }

    if (g_failures) {
        std::printf("%d criteria FAILED\n", g_failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
