#include "diaglab/analysis.hpp"

#include <numeric>
#include <sstream>

#include "diaglab/enumerate.hpp"
#include "diaglab/error.hpp"
#include "diaglab/perm.hpp"

namespace diaglab {

// ---------------------------------------------------------------------------
// Eventually-periodic certificates.
//
// A small abstract interpreter assigns each subterm, viewed as a function of
// one index variable n, one of four shapes:
//   Const     value v for every n
//   Periodic  f(n) = f(n + per) for all n >= pre
//   Affine    f(n) = slope * n + off (and >= 0) for all n >= from
//   Unknown   no certificate; ep_of_term refuses
// Diagonals enter through affine environments: row k of an enumeration is
// analyzed with k |-> Const, the diagonal with k, i |-> Affine(1, d).
// Everything outside the certified subclass stays Unknown on purpose.
// ---------------------------------------------------------------------------

namespace {

constexpr uint64_t PRE_CAP = uint64_t{1} << 20;
constexpr uint64_t PER_CAP = uint64_t{1} << 16;
constexpr uint64_t SLOPE_CAP = uint64_t{1} << 32;
constexpr int64_t OFF_CAP = int64_t{1} << 40;

using i128 = __int128;

struct Abs {
    enum Kind { Unknown, Const, Periodic, Affine } kind = Unknown;
    uint64_t val = 0;               // Const
    uint64_t pre = 0, per = 1;      // Periodic
    uint64_t slope = 1;             // Affine
    int64_t off = 0;
    uint64_t from = 0;

    static Abs unknown() { return Abs{}; }
    static Abs constant(uint64_t v) {
        Abs a;
        a.kind = Const;
        a.val = v;
        return a;
    }
    static Abs periodic(uint64_t pre, uint64_t per) {
        if (pre > PRE_CAP || per == 0 || per > PER_CAP) return unknown();
        Abs a;
        a.kind = Periodic;
        a.pre = pre;
        a.per = per;
        return a;
    }
    static Abs affine(i128 slope, i128 off, uint64_t from) {
        if (slope <= 0) return unknown();
        if (slope > static_cast<i128>(SLOPE_CAP)) return unknown();
        if (off > OFF_CAP || off < -OFF_CAP) return unknown();
        // ensure nonnegativity from `from` on
        if (off < 0) {
            uint64_t need = static_cast<uint64_t>(
                (-off + slope - 1) / slope);
            if (need > from) from = need;
        }
        if (from > PRE_CAP) return unknown();
        Abs a;
        a.kind = Affine;
        a.slope = static_cast<uint64_t>(slope);
        a.off = static_cast<int64_t>(off);
        a.from = from;
        return a;
    }
    bool cp() const { return kind == Const || kind == Periodic; }
};

struct AbsEnv {
    Abs i, k, a, b;
};

uint64_t lcm_cap(uint64_t x, uint64_t y) {
    uint64_t g = std::gcd(x, y);
    i128 l = static_cast<i128>(x / g) * y;
    if (l > static_cast<i128>(PER_CAP)) return 0;
    return static_cast<uint64_t>(l);
}

// Pointwise function of const/periodic inputs is periodic.
Abs combine_cp(std::initializer_list<Abs> xs) {
    uint64_t pre = 0, per = 1;
    for (const Abs& x : xs) {
        if (x.kind == Abs::Const) continue;
        if (x.kind != Abs::Periodic) return Abs::unknown();
        pre = std::max(pre, x.pre);
        per = lcm_cap(per, x.per);
        if (per == 0) return Abs::unknown();
    }
    return Abs::periodic(pre, per);
}

// Smallest n >= a.from with slope*n + off >= v, capped.
std::optional<uint64_t> affine_reaches(const Abs& a, i128 v) {
    i128 n0 = a.from;
    if (static_cast<i128>(a.slope) * n0 + a.off < v) {
        i128 need = (v - a.off + static_cast<i128>(a.slope) - 1) /
                    static_cast<i128>(a.slope);
        n0 = need;
    }
    if (n0 < 0) n0 = 0;
    if (n0 > static_cast<i128>(PRE_CAP)) return std::nullopt;
    return static_cast<uint64_t>(n0);
}

Abs eventually_const(std::optional<uint64_t> thr) {
    if (!thr) return Abs::unknown();
    return Abs::periodic(*thr, 1);
}

Abs abs_add(const Abs& x, const Abs& y) {
    if (x.kind == Abs::Const && y.kind == Abs::Const)
        return Abs::constant(x.val + y.val);
    if (x.cp() && y.cp()) return combine_cp({x, y});
    if (x.kind == Abs::Affine && y.kind == Abs::Const)
        return Abs::affine(x.slope, static_cast<i128>(x.off) + y.val, x.from);
    if (x.kind == Abs::Const && y.kind == Abs::Affine)
        return abs_add(y, x);
    if (x.kind == Abs::Affine && y.kind == Abs::Affine)
        return Abs::affine(static_cast<i128>(x.slope) + y.slope,
                           static_cast<i128>(x.off) + y.off,
                           std::max(x.from, y.from));
    return Abs::unknown();
}

Abs abs_sub(const Abs& x, const Abs& y) {
    if (x.kind == Abs::Const && y.kind == Abs::Const)
        return Abs::constant(x.val > y.val ? x.val - y.val : 0);
    if (x.cp() && y.cp()) return combine_cp({x, y});
    if (x.kind == Abs::Affine && y.kind == Abs::Const)
        return Abs::affine(x.slope, static_cast<i128>(x.off) - y.val, x.from);
    if (x.kind == Abs::Const && y.kind == Abs::Affine)
        return eventually_const(affine_reaches(y, x.val));  // truncates to 0
    if (x.kind == Abs::Affine && y.kind == Abs::Affine) {
        uint64_t from = std::max(x.from, y.from);
        if (x.slope > y.slope) {
            Abs d = Abs::affine(static_cast<i128>(x.slope) - y.slope,
                                static_cast<i128>(x.off) - y.off, from);
            return d;
        }
        if (x.slope == y.slope)
            return Abs::periodic(from, 1);  // eventually constant
        // y outgrows x; eventually 0
        Abs diff = Abs::affine(static_cast<i128>(y.slope) - x.slope,
                               static_cast<i128>(y.off) - x.off, from);
        if (diff.kind != Abs::Affine) return Abs::unknown();
        return eventually_const(affine_reaches(diff, 0));
    }
    return Abs::unknown();
}

Abs abs_mul(const Abs& x, const Abs& y) {
    if (x.kind == Abs::Const && y.kind == Abs::Const)
        return Abs::constant(x.val * y.val);
    if (x.cp() && y.cp()) return combine_cp({x, y});
    if (x.kind == Abs::Const && y.kind == Abs::Affine) {
        if (x.val == 0) return Abs::constant(0);
        return Abs::affine(static_cast<i128>(y.slope) * x.val,
                           static_cast<i128>(y.off) * static_cast<i128>(x.val),
                           y.from);
    }
    if (x.kind == Abs::Affine && y.kind == Abs::Const) return abs_mul(y, x);
    return Abs::unknown();
}

Abs abs_div(const Abs& x, uint64_t d) {
    if (x.kind == Abs::Const) return Abs::constant(x.val / d);
    if (x.kind == Abs::Periodic) return x;
    if (x.kind == Abs::Affine && x.slope % d == 0) {
        // floor((d*s'*n + off) / d) = s'*n + floor(off / d)
        i128 off = x.off >= 0 ? x.off / static_cast<i128>(d)
                              : -((-static_cast<i128>(x.off) + d - 1) /
                                  static_cast<i128>(d));
        return Abs::affine(x.slope / d, off, x.from);
    }
    return Abs::unknown();
}

Abs abs_mod(const Abs& x, uint64_t d) {
    if (x.kind == Abs::Const) return Abs::constant(x.val % d);
    if (x.kind == Abs::Periodic) return x;
    if (x.kind == Abs::Affine) {
        uint64_t g = std::gcd(x.slope, d);
        return Abs::periodic(x.from, d / g);
    }
    return Abs::unknown();
}

Abs abs_eq(const Abs& x, const Abs& y) {
    if (x.kind == Abs::Const && y.kind == Abs::Const)
        return Abs::constant(x.val == y.val ? 1 : 0);
    if (x.cp() && y.cp()) return combine_cp({x, y});
    if (x.kind == Abs::Affine && y.kind == Abs::Const)
        return eventually_const(
            affine_reaches(x, static_cast<i128>(y.val) + 1));
    if (x.kind == Abs::Const && y.kind == Abs::Affine) return abs_eq(y, x);
    if (x.kind == Abs::Affine && y.kind == Abs::Affine) {
        uint64_t from = std::max(x.from, y.from);
        if (x.slope == y.slope) return Abs::periodic(from, 1);
        // equal at most once; constant beyond the crossing
        i128 ds = static_cast<i128>(x.slope) - y.slope;
        i128 doff = static_cast<i128>(y.off) - x.off;
        i128 cross = doff / ds;
        uint64_t thr = from;
        if (cross + 1 > static_cast<i128>(thr)) {
            if (cross + 1 > static_cast<i128>(PRE_CAP)) return Abs::unknown();
            thr = static_cast<uint64_t>(cross + 1);
        }
        return Abs::periodic(thr, 1);
    }
    return Abs::unknown();
}

Abs abs_lt(const Abs& x, const Abs& y) {
    if (x.kind == Abs::Const && y.kind == Abs::Const)
        return Abs::constant(x.val < y.val ? 1 : 0);
    if (x.cp() && y.cp()) return combine_cp({x, y});
    if (x.kind == Abs::Affine && y.kind == Abs::Const)
        return eventually_const(affine_reaches(x, y.val));
    if (x.kind == Abs::Const && y.kind == Abs::Affine)
        return eventually_const(
            affine_reaches(y, static_cast<i128>(x.val) + 1));
    if (x.kind == Abs::Affine && y.kind == Abs::Affine) {
        uint64_t from = std::max(x.from, y.from);
        if (x.slope == y.slope) return Abs::periodic(from, 1);
        i128 ds = static_cast<i128>(x.slope) - y.slope;
        i128 doff = static_cast<i128>(y.off) - x.off;
        i128 cross = doff / ds;
        uint64_t thr = from;
        if (cross >= 0 && cross + 1 > static_cast<i128>(thr)) {
            if (cross + 1 > static_cast<i128>(PRE_CAP)) return Abs::unknown();
            thr = static_cast<uint64_t>(cross + 1);
        }
        return Abs::periodic(thr, 1);
    }
    return Abs::unknown();
}

Abs abs_bit(const Abs& x, const Abs& j) {
    // once the bit index reaches 64 the result is 0 regardless of x
    if (j.kind == Abs::Affine) return eventually_const(affine_reaches(j, 64));
    if (x.cp() && j.cp()) return combine_cp({x, j});
    if (x.kind == Abs::Affine && j.kind == Abs::Const) {
        if (j.val >= 63) return Abs::constant(0);
        uint64_t m = uint64_t{1} << (j.val + 1);
        uint64_t g = std::gcd(x.slope, m);
        return Abs::periodic(x.from, m / g);
    }
    return Abs::unknown();
}

// Top-level bit coercion (& 1); flips never change the bounds.
Abs abs_and1(const Abs& x) {
    switch (x.kind) {
        case Abs::Const: return Abs::constant(x.val & 1);
        case Abs::Periodic: return x;
        case Abs::Affine: return abs_mod(x, 2);
        default: return Abs::unknown();
    }
}

Abs abs_flip_bit(const Abs& x) {
    Abs c = abs_and1(x);
    if (c.kind == Abs::Const) return Abs::constant(1 - c.val);
    return c;
}

Abs abs_eval(const Node* n, const AbsEnv& env);

// Abstract value of e(idx, p(idx)) / e(p^-1(idx), idx) style diagonals:
// beyond the permutation bound both reduce to the pure diagonal.
Abs abs_perm_diag(const Node* e, uint64_t perm_bound, const Abs& idx) {
    if (idx.kind != Abs::Affine) return Abs::unknown();
    auto start = affine_reaches(idx, perm_bound);
    if (!start) return Abs::unknown();
    Abs diag_idx = idx;
    diag_idx.from = std::max(idx.from, *start);
    AbsEnv sub;
    sub.k = diag_idx;
    sub.i = diag_idx;
    Abs rec = abs_eval(e, sub);
    rec = abs_and1(rec);
    if (rec.kind == Abs::Const)
        rec = Abs::periodic(diag_idx.from, 1);
    if (rec.kind != Abs::Periodic) return Abs::unknown();
    return Abs::periodic(std::max(rec.pre, diag_idx.from), rec.per);
}

// Used variables all Const: evaluate concretely.
bool try_const_eval(const Node* n, const AbsEnv& env, Abs& out) {
    unsigned use = var_usage(n);
    Env cenv;
    if (use & VarUse::I) {
        if (env.i.kind != Abs::Const) return false;
        cenv.i = env.i.val;
    }
    if (use & VarUse::K) {
        if (env.k.kind != Abs::Const) return false;
        cenv.k = env.k.val;
    }
    if (use & VarUse::A) {
        if (env.a.kind != Abs::Const) return false;
        cenv.a = env.a.val;
    }
    if (use & VarUse::B) {
        if (env.b.kind != Abs::Const) return false;
        cenv.b = env.b.val;
    }
    try {
        out = Abs::constant(eval_node(n, cenv));
        return true;
    } catch (const Error&) {
        return false;
    }
}

Abs abs_eval(const Node* n, const AbsEnv& env) {
    {
        Abs c;
        if (try_const_eval(n, env, c)) return c;
    }
    auto kid = [&](size_t j) { return abs_eval(n->kids[j].get(), env); };
    switch (n->kind) {
        case NodeKind::Lit: return Abs::constant(n->a);
        case NodeKind::VarI: return env.i;
        case NodeKind::VarK: return env.k;
        case NodeKind::VarA: return env.a;
        case NodeKind::VarB: return env.b;
        case NodeKind::Add: return abs_add(kid(0), kid(1));
        case NodeKind::Sub: return abs_sub(kid(0), kid(1));
        case NodeKind::Mul: return abs_mul(kid(0), kid(1));
        case NodeKind::Div: return abs_div(kid(0), n->a);
        case NodeKind::Mod: return abs_mod(kid(0), n->a);
        case NodeKind::Eq: return abs_eq(kid(0), kid(1));
        case NodeKind::Lt: return abs_lt(kid(0), kid(1));
        case NodeKind::Bit: return abs_bit(kid(0), kid(1));
        case NodeKind::Parity: return abs_and1(kid(0));
        case NodeKind::If: {
            Abs c = kid(0);
            if (c.kind == Abs::Const) return c.val ? kid(1) : kid(2);
            Abs t = kid(1), e = kid(2);
            if (c.cp() && t.cp() && e.cp()) return combine_cp({c, t, e});
            return Abs::unknown();
        }

        case NodeKind::Identity: return abs_eq(env.k, env.i);
        case NodeKind::BinaryNat: return abs_bit(env.k, env.i);
        case NodeKind::CounterExample: {
            Abs cond = abs_eq(env.k, Abs::constant(0));
            if (cond.kind == Abs::Const)
                return cond.val ? abs_eq(env.i, Abs::constant(1))
                                : abs_eq(env.k, env.i);
            Abs t = abs_eq(env.i, Abs::constant(1));
            Abs e = abs_eq(env.k, env.i);
            if (cond.cp() && t.cp() && e.cp()) return combine_cp({cond, t, e});
            return Abs::unknown();
        }
        case NodeKind::DoublyPeriodic: {
            Abs rk = abs_mod(env.k, n->a);
            Abs ri = abs_mod(env.i, n->b);
            if (rk.kind == Abs::Const && ri.kind == Abs::Const)
                return Abs::constant(n->bits[rk.val * n->b + ri.val]);
            if (rk.cp() && ri.cp()) return combine_cp({rk, ri});
            return Abs::unknown();
        }
        case NodeKind::HashRows: return Abs::unknown();

        case NodeKind::Diag: {
            Abs d = abs_perm_diag(n->kids[0].get(), 0, env.i);
            return abs_flip_bit(d);
        }
        case NodeKind::RowDiag:
        case NodeKind::TransDiag: {
            Abs d = abs_perm_diag(n->kids[0].get(), n->perm.bound(), env.i);
            return abs_flip_bit(d);
        }
        case NodeKind::RowOf: {
            AbsEnv sub;
            sub.k = Abs::constant(n->a);
            sub.i = env.i;
            return abs_eval(n->kids[0].get(), sub);
        }
        case NodeKind::ZOf: return Abs::unknown();

        case NodeKind::Interleave: {
            if (env.k.kind != Abs::Const) return Abs::unknown();
            AbsEnv sub;
            sub.k = Abs::constant(env.k.val >> 1);
            sub.i = env.i;
            return abs_eval(n->kids[env.k.val & 1].get(), sub);
        }
        case NodeKind::Prepend: {
            if (env.k.kind == Abs::Const) {
                AbsEnv sub;
                sub.i = env.i;
                if (env.k.val == 0)
                    return abs_and1(abs_eval(n->kids[0].get(), sub));
                sub.k = Abs::constant(env.k.val - 1);
                return abs_eval(n->kids[1].get(), sub);
            }
            if (env.k.kind == Abs::Affine && env.k.slope == 1) {
                // the head row is hit at a single index; beyond it the tail
                // is read with the row shifted down by one
                auto past = affine_reaches(env.k, 1);
                if (!past) return Abs::unknown();
                Abs shifted =
                    Abs::affine(1, static_cast<i128>(env.k.off) - 1, *past);
                if (shifted.kind != Abs::Affine) return Abs::unknown();
                AbsEnv sub;
                sub.k = shifted;
                sub.i = env.i;
                Abs rec = abs_and1(abs_eval(n->kids[1].get(), sub));
                if (rec.kind == Abs::Const) rec = Abs::periodic(*past, 1);
                if (rec.kind != Abs::Periodic) return Abs::unknown();
                return Abs::periodic(std::max(rec.pre, *past), rec.per);
            }
            return Abs::unknown();
        }
        case NodeKind::Dovetail: {
            if (env.k.kind != Abs::Const) return Abs::unknown();
            auto [a, b] = unpair_index(env.k.val);
            AbsEnv sub;
            sub.a = Abs::constant(a);
            sub.b = Abs::constant(b);
            sub.i = env.i;
            return abs_and1(abs_eval(n->kids[0].get(), sub));
        }
        case NodeKind::YRows: {
            if (env.k.kind != Abs::Const) return Abs::unknown();
            FiniteSupportPerm p = unrank_perm(env.k.val);
            Abs d = abs_perm_diag(n->kids[0].get(), p.bound(), env.i);
            return abs_flip_bit(d);
        }
        case NodeKind::TowerLevel: {
            if (env.k.kind != Abs::Const) return Abs::unknown();
            uint64_t lvl = n->a;
            uint64_t r = env.k.val;
            while (lvl >= 2) {
                if (r == 0) return Abs::unknown();  // a w-row; not certified
                --r;
                --lvl;
            }
            AbsEnv sub;
            sub.k = Abs::constant(r >> 1);
            sub.i = env.i;
            return abs_eval(n->kids[r & 1].get(), sub);
        }
        case NodeKind::XInfinity: {
            if (env.k.kind != Abs::Const) return Abs::unknown();
            if ((env.k.val & 1) == 0) return Abs::unknown();  // a w-row
            uint64_t t = env.k.val >> 1;
            AbsEnv sub;
            sub.k = Abs::constant(t >> 1);
            sub.i = env.i;
            return abs_eval(n->kids[t & 1].get(), sub);
        }
    }
    return Abs::unknown();
}

struct EpBound {
    uint64_t pre;
    uint64_t per;
};

std::optional<EpBound> seq_bound(const Node* root) {
    AbsEnv env;
    env.i = Abs::affine(1, 0, 0);
    Abs a = abs_and1(abs_eval(root, env));
    if (a.kind == Abs::Const) return EpBound{0, 1};
    if (a.kind == Abs::Periodic) return EpBound{a.pre, a.per};
    return std::nullopt;
}

}  // namespace

EventuallyPeriodic ep_normalize(std::vector<uint8_t> pre,
                                std::vector<uint8_t> per) {
    if (per.empty()) throw DomainError("period must be nonempty");
    for (uint8_t v : pre)
        if (v > 1) throw DomainError("bits must be 0 or 1");
    for (uint8_t v : per)
        if (v > 1) throw DomainError("bits must be 0 or 1");
    // minimal period via the border (failure function) of the period block
    size_t L = per.size();
    std::vector<size_t> border(L, 0);
    for (size_t j = 1; j < L; ++j) {
        size_t t = border[j - 1];
        while (t > 0 && per[j] != per[t]) t = border[t - 1];
        if (per[j] == per[t]) ++t;
        border[j] = t;
    }
    size_t d = L - border[L - 1];
    if (L % d == 0) per.resize(d);
    // absorb the preperiod maximally (rotating the period right)
    while (!pre.empty() && pre.back() == per.back()) {
        uint8_t last = per.back();
        per.pop_back();
        per.insert(per.begin(), last);
        pre.pop_back();
    }
    return EventuallyPeriodic{std::move(pre), std::move(per)};
}

std::optional<EventuallyPeriodic> try_ep_of_term(const SeqTerm& s) {
    auto bound = seq_bound(s.root().get());
    if (!bound) return std::nullopt;
    std::vector<uint8_t> pre(bound->pre), per(bound->per);
    for (uint64_t j = 0; j < bound->pre; ++j)
        pre[j] = static_cast<uint8_t>(eval_seq(s, j));
    for (uint64_t j = 0; j < bound->per; ++j)
        per[j] = static_cast<uint8_t>(eval_seq(s, bound->pre + j));
    return ep_normalize(std::move(pre), std::move(per));
}

EventuallyPeriodic ep_of_term(const SeqTerm& s) {
    auto ep = try_ep_of_term(s);
    if (!ep)
        throw NotEventuallyPeriodicError(
            "no eventually-periodic certificate for this term");
    return *ep;
}

bool ep_equal(const EventuallyPeriodic& a, const EventuallyPeriodic& b) {
    return a == b;
}

std::optional<uint64_t> find_disagreement(const SeqTerm& s, const SeqTerm& t,
                                          uint64_t horizon) {
    for (uint64_t j = 0; j < horizon; ++j)
        if (eval_seq(s, j) != eval_seq(t, j)) return j;
    return std::nullopt;
}

std::vector<Witness> verify_escape(const EnumTerm& e, const SeqTerm& y,
                                   uint64_t rows, uint64_t horizon) {
    std::vector<Witness> out;
    out.reserve(rows);
    for (uint64_t k = 0; k < rows; ++k) {
        Witness w;
        w.row = k;
        w.horizon = horizon;
        if (auto pos = find_disagreement(y, row(e, k), horizon)) {
            w.kind = WitnessKind::Disagreement;
            w.position = *pos;
        }
        out.push_back(w);
    }
    return out;
}

std::vector<Witness> membership_scan(const SeqTerm& s, const EnumTerm& e,
                                     uint64_t rows, uint64_t horizon) {
    std::vector<Witness> out;
    out.reserve(rows);
    auto ep_s = try_ep_of_term(s);
    for (uint64_t k = 0; k < rows; ++k) {
        Witness w;
        w.row = k;
        w.horizon = horizon;
        SeqTerm rk = row(e, k);
        if (auto pos = find_disagreement(s, rk, horizon)) {
            w.kind = WitnessKind::Disagreement;
            w.position = *pos;
        } else if (ep_s) {
            if (auto ep_r = try_ep_of_term(rk)) {
                if (ep_equal(*ep_s, *ep_r)) {
                    w.kind = WitnessKind::ProvenEqual;
                } else {
                    // unequal EP forms: locate the disagreement, which may
                    // lie beyond the requested horizon
                    uint64_t limit =
                        std::max(ep_s->pre.size(), ep_r->pre.size()) +
                        2 * std::lcm(ep_s->per.size(), ep_r->per.size());
                    for (uint64_t j = 0; j <= limit; ++j) {
                        if (ep_s->at(j) != ep_r->at(j)) {
                            w.kind = WitnessKind::Disagreement;
                            w.position = j;
                            break;
                        }
                    }
                }
            }
        }
        out.push_back(w);
    }
    return out;
}

std::string witness_kind_name(WitnessKind k) {
    switch (k) {
        case WitnessKind::Disagreement: return "disagreement";
        case WitnessKind::ProvenEqual: return "proven_equal";
        case WitnessKind::Unknown: return "unknown";
    }
    return "unknown";
}

std::string witnesses_to_csv(const std::vector<Witness>& ws, bool header) {
    std::ostringstream os;
    if (header) os << "row,kind,position,horizon\r\n";
    for (const Witness& w : ws) {
        os << w.row << "," << witness_kind_name(w.kind) << ",";
        if (w.position) os << *w.position;
        os << "," << w.horizon << "\r\n";
    }
    return os.str();
}

}  // namespace diaglab
