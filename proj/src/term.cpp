#include "diaglab/term.hpp"

#include <utility>

#include "diaglab/enumerate.hpp"
#include "diaglab/error.hpp"

namespace diaglab {

namespace detail {
NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }
}  // namespace detail

unsigned var_usage(const Node* n) {
    switch (n->kind) {
        case NodeKind::Lit: return 0;
        case NodeKind::VarI: return VarUse::I;
        case NodeKind::VarK: return VarUse::K;
        case NodeKind::VarA: return VarUse::A;
        case NodeKind::VarB: return VarUse::B;
        // builders read both matrix coordinates
        case NodeKind::Identity:
        case NodeKind::BinaryNat:
        case NodeKind::HashRows:
        case NodeKind::DoublyPeriodic:
        case NodeKind::CounterExample:
            return VarUse::K | VarUse::I;
        // sequence combinators bind their children and read only i
        case NodeKind::Diag:
        case NodeKind::RowDiag:
        case NodeKind::TransDiag:
        case NodeKind::RowOf:
        case NodeKind::ZOf:
            return VarUse::I;
        // enumeration combinators bind their children and read k, i
        case NodeKind::Interleave:
        case NodeKind::Prepend:
        case NodeKind::Dovetail:
        case NodeKind::YRows:
        case NodeKind::TowerLevel:
        case NodeKind::XInfinity:
            return VarUse::K | VarUse::I;
        default: {
            unsigned u = 0;
            for (const auto& kid : n->kids) u |= var_usage(kid.get());
            return u;
        }
    }
}

namespace {

size_t child_count(NodeKind k) {
    switch (k) {
        case NodeKind::Lit:
        case NodeKind::VarI:
        case NodeKind::VarK:
        case NodeKind::VarA:
        case NodeKind::VarB:
        case NodeKind::Identity:
        case NodeKind::BinaryNat:
        case NodeKind::HashRows:
        case NodeKind::DoublyPeriodic:
        case NodeKind::CounterExample:
            return 0;
        case NodeKind::Div:
        case NodeKind::Mod:
        case NodeKind::Parity:
        case NodeKind::Diag:
        case NodeKind::RowDiag:
        case NodeKind::TransDiag:
        case NodeKind::RowOf:
        case NodeKind::ZOf:
        case NodeKind::Dovetail:
        case NodeKind::YRows:
            return 1;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Eq:
        case NodeKind::Lt:
        case NodeKind::Bit:
        case NodeKind::Interleave:
        case NodeKind::Prepend:
        case NodeKind::TowerLevel:
        case NodeKind::XInfinity:
            return 2;
        case NodeKind::If:
            return 3;
    }
    return 0;
}

constexpr unsigned SEQ_VARS = VarUse::I;
constexpr unsigned ENUM_VARS = VarUse::K | VarUse::I;
constexpr unsigned FAMILY_VARS = VarUse::A | VarUse::B | VarUse::I;

void check_child_vars(const Node* n) {
    // Variable scope each child is evaluated under.
    auto require = [&](const NodePtr& kid, unsigned allowed) {
        if (var_usage(kid.get()) & ~allowed)
            throw DomainError("subterm uses a variable outside its scope");
    };
    switch (n->kind) {
        case NodeKind::Diag:
        case NodeKind::RowDiag:
        case NodeKind::TransDiag:
        case NodeKind::RowOf:
        case NodeKind::ZOf:
        case NodeKind::YRows:
            require(n->kids[0], ENUM_VARS);
            break;
        case NodeKind::Interleave:
        case NodeKind::TowerLevel:
        case NodeKind::XInfinity:
            require(n->kids[0], ENUM_VARS);
            require(n->kids[1], ENUM_VARS);
            break;
        case NodeKind::Prepend:
            require(n->kids[0], SEQ_VARS);
            require(n->kids[1], ENUM_VARS);
            break;
        case NodeKind::Dovetail:
            require(n->kids[0], FAMILY_VARS);
            break;
        default:
            break;
    }
}

}  // namespace

void validate_node(const NodePtr& n) {
    if (!n) throw DomainError("null term");
    if (n->kids.size() != child_count(n->kind))
        throw DomainError("wrong number of children");
    switch (n->kind) {
        case NodeKind::Div:
        case NodeKind::Mod:
            if (n->a == 0) throw DomainError("zero divisor");
            break;
        case NodeKind::DoublyPeriodic:
            if (n->a == 0 || n->b == 0)
                throw DomainError("doubly_periodic requires R >= 1 and C >= 1");
            if (n->bits.size() != n->a * n->b)
                throw DomainError("doubly_periodic matrix size mismatch");
            for (uint8_t v : n->bits)
                if (v > 1) throw DomainError("doubly_periodic entries must be bits");
            break;
        case NodeKind::YRows:
            if (n->a > 1) throw DomainError("invalid Y variant");
            break;
        case NodeKind::TowerLevel:
            if (n->a == 0) throw DomainError("tower level must be >= 1");
            if (!n->memo) throw DomainError("tower level missing memo");
            break;
        case NodeKind::XInfinity:
            if (!n->memo) throw DomainError("x_infinity missing memo");
            break;
        default:
            break;
    }
    check_child_vars(n.get());
    for (const auto& kid : n->kids) validate_node(kid);
}

bool nodes_equal(const Node* x, const Node* y) {
    if (x == y) return true;
    if (x->kind != y->kind || x->a != y->a || x->b != y->b ||
        x->bits != y->bits || !(x->perm == y->perm) ||
        x->kids.size() != y->kids.size())
        return false;
    for (size_t j = 0; j < x->kids.size(); ++j)
        if (!nodes_equal(x->kids[j].get(), y->kids[j].get())) return false;
    return true;
}

namespace {

uint64_t bit_of(uint64_t n, uint64_t j) {
    return j >= 64 ? 0 : (n >> j) & 1;
}

uint64_t hashrows_bit(uint64_t salt, uint64_t k, uint64_t i) {
    if (k >= (uint64_t{1} << 32) || i >= (uint64_t{1} << 32))
        throw DomainError("hashrows indices must be < 2^32");
    uint64_t z = salt ^ ((k << 32) | i);
    z += 0x9E3779B97F4A7C15ULL;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z & 1;
}

uint64_t eval_bit(const Node* n, uint64_t k, uint64_t i) {
    Env env;
    env.k = k;
    env.i = i;
    return eval_node(n, env) & 1;
}

// x_n(row, col) for the tower over base pair (x, y); level >= 1.
uint64_t tower_entry(const Node* x, const Node* y, WMemo* memo,
                     uint64_t level, uint64_t row, uint64_t col);

uint64_t tower_w(const Node* x, const Node* y, WMemo* memo, uint64_t level,
                 uint64_t i) {
    if (level >= (uint64_t{1} << 24) || i >= (uint64_t{1} << 40))
        throw DomainError("tower evaluation index out of supported range");
    // w_L(i) = 1 - x_L(i, i), and x_L(i, i) = w_{L-1-i}(i) while i <= L-2.
    // The chain only ever revisits the same column, so iterate and memoize.
    std::vector<uint64_t> chain;
    uint64_t lvl = level;
    uint64_t val;
    for (;;) {
        {
            std::lock_guard<std::mutex> lock(memo->mu);
            auto it = memo->bits.find((lvl << 40) | i);
            if (it != memo->bits.end()) {
                val = it->second;
                break;
            }
        }
        chain.push_back(lvl);
        if (lvl >= 2 && i <= lvl - 2) {
            lvl = lvl - 1 - i;
            continue;
        }
        uint64_t base_row = i - (lvl - 1);  // row index in x_1 = interleave(x, y)
        uint64_t entry = (base_row & 1) ? eval_bit(y, base_row >> 1, i)
                                        : eval_bit(x, base_row >> 1, i);
        val = 1 - entry;
        chain.pop_back();
        std::lock_guard<std::mutex> lock(memo->mu);
        memo->bits[(lvl << 40) | i] = static_cast<uint8_t>(val);
        break;
    }
    // Unwind: w_L(i) = 1 - w_successor(i) for every level left on the chain.
    while (!chain.empty()) {
        uint64_t L = chain.back();
        chain.pop_back();
        val = 1 - val;
        std::lock_guard<std::mutex> lock(memo->mu);
        memo->bits[(L << 40) | i] = static_cast<uint8_t>(val);
    }
    return val;
}

uint64_t tower_entry(const Node* x, const Node* y, WMemo* memo,
                     uint64_t level, uint64_t row, uint64_t col) {
    while (level >= 2) {
        if (row == 0) return tower_w(x, y, memo, level - 1, col);
        --row;
        --level;
    }
    return (row & 1) ? eval_bit(y, row >> 1, col)
                     : eval_bit(x, row >> 1, col);
}

}  // namespace

uint64_t eval_node(const Node* n, const Env& env) {
    switch (n->kind) {
        case NodeKind::Lit: return n->a;
        case NodeKind::VarI: return env.i;
        case NodeKind::VarK: return env.k;
        case NodeKind::VarA: return env.a;
        case NodeKind::VarB: return env.b;
        case NodeKind::Add:
            return eval_node(n->kids[0].get(), env) +
                   eval_node(n->kids[1].get(), env);
        case NodeKind::Sub: {
            uint64_t l = eval_node(n->kids[0].get(), env);
            uint64_t r = eval_node(n->kids[1].get(), env);
            return l > r ? l - r : 0;
        }
        case NodeKind::Mul:
            return eval_node(n->kids[0].get(), env) *
                   eval_node(n->kids[1].get(), env);
        case NodeKind::Div:
            return eval_node(n->kids[0].get(), env) / n->a;
        case NodeKind::Mod:
            return eval_node(n->kids[0].get(), env) % n->a;
        case NodeKind::Eq:
            return eval_node(n->kids[0].get(), env) ==
                           eval_node(n->kids[1].get(), env)
                       ? 1
                       : 0;
        case NodeKind::Lt:
            return eval_node(n->kids[0].get(), env) <
                           eval_node(n->kids[1].get(), env)
                       ? 1
                       : 0;
        case NodeKind::If:
            return eval_node(n->kids[0].get(), env)
                       ? eval_node(n->kids[1].get(), env)
                       : eval_node(n->kids[2].get(), env);
        case NodeKind::Bit:
            return bit_of(eval_node(n->kids[0].get(), env),
                          eval_node(n->kids[1].get(), env));
        case NodeKind::Parity:
            return eval_node(n->kids[0].get(), env) & 1;

        case NodeKind::Identity: return env.k == env.i ? 1 : 0;
        case NodeKind::BinaryNat: return bit_of(env.k, env.i);
        case NodeKind::HashRows: return hashrows_bit(n->a, env.k, env.i);
        case NodeKind::DoublyPeriodic:
            return n->bits[(env.k % n->a) * n->b + (env.i % n->b)];
        case NodeKind::CounterExample:
            if (env.k == 0) return env.i == 1 ? 1 : 0;
            return env.k == env.i ? 1 : 0;

        case NodeKind::Diag:
            return 1 - eval_bit(n->kids[0].get(), env.i, env.i);
        case NodeKind::RowDiag:
            return 1 - eval_bit(n->kids[0].get(), env.i, n->perm.apply(env.i));
        case NodeKind::TransDiag:
            return 1 -
                   eval_bit(n->kids[0].get(), n->perm.apply_inverse(env.i), env.i);
        case NodeKind::RowOf:
            return eval_bit(n->kids[0].get(), n->a, env.i);
        case NodeKind::ZOf: {
            FiniteSupportPerm p = unrank_perm(env.i);
            return eval_bit(n->kids[0].get(), env.i, p.apply(env.i));
        }

        case NodeKind::Interleave:
            return eval_bit(n->kids[env.k & 1].get(), env.k >> 1, env.i);
        case NodeKind::Prepend: {
            if (env.k == 0) {
                Env sub;
                sub.i = env.i;
                return eval_node(n->kids[0].get(), sub) & 1;
            }
            return eval_bit(n->kids[1].get(), env.k - 1, env.i);
        }
        case NodeKind::Dovetail: {
            auto [a, b] = unpair_index(env.k);
            Env sub;
            sub.a = a;
            sub.b = b;
            sub.i = env.i;
            return eval_node(n->kids[0].get(), sub) & 1;
        }
        case NodeKind::YRows: {
            FiniteSupportPerm p = unrank_perm(env.k);
            if (static_cast<DiagVariant>(n->a) == DiagVariant::Row)
                return 1 - eval_bit(n->kids[0].get(), env.i, p.apply(env.i));
            return 1 - eval_bit(n->kids[0].get(), p.apply_inverse(env.i), env.i);
        }
        case NodeKind::TowerLevel:
            return tower_entry(n->kids[0].get(), n->kids[1].get(),
                               n->memo.get(), n->a, env.k, env.i);
        case NodeKind::XInfinity: {
            if ((env.k & 1) == 0)
                return tower_w(n->kids[0].get(), n->kids[1].get(),
                               n->memo.get(), env.k / 2 + 1, env.i);
            uint64_t t = env.k >> 1;
            return (t & 1) ? eval_bit(n->kids[1].get(), t >> 1, env.i)
                           : eval_bit(n->kids[0].get(), t >> 1, env.i);
        }
    }
    throw DomainError("unreachable node kind");
}

SeqTerm::SeqTerm(NodePtr root) : root_(std::move(root)) {
    validate_node(root_);
    if (var_usage(root_.get()) & ~VarUse::I)
        throw DomainError("sequence term may only use variable i");
}

EnumTerm::EnumTerm(NodePtr root) : root_(std::move(root)) {
    validate_node(root_);
    if (var_usage(root_.get()) & ~(VarUse::K | VarUse::I))
        throw DomainError("enumeration term may only use variables k and i");
}

FamilyTerm::FamilyTerm(NodePtr root) : root_(std::move(root)) {
    validate_node(root_);
    if (var_usage(root_.get()) & ~(VarUse::A | VarUse::B | VarUse::I))
        throw DomainError("family term may only use variables a, b and i");
}

int eval_seq(const SeqTerm& t, uint64_t i) {
    Env env;
    env.i = i;
    return static_cast<int>(eval_node(t.root().get(), env) & 1);
}

int eval_enum(const EnumTerm& e, uint64_t k, uint64_t i) {
    Env env;
    env.k = k;
    env.i = i;
    return static_cast<int>(eval_node(e.root().get(), env) & 1);
}

SeqTerm row(const EnumTerm& e, uint64_t k) {
    Node n;
    n.kind = NodeKind::RowOf;
    n.a = k;
    n.kids = {e.root()};
    return SeqTerm(detail::make_node(std::move(n)));
}

}  // namespace diaglab
