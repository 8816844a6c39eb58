// Random term generators shared by the unit and acceptance suites.
// Deterministic: every generator takes an std::mt19937_64 by reference.
#pragma once

#include <memory>
#include <random>
#include <vector>

#include "diaglab/enumerate.hpp"
#include "diaglab/term.hpp"

namespace diaglab::testgen {

enum class Ctx { Seq, Enum, Family };

inline NodePtr mk(Node n) { return detail::make_node(std::move(n)); }

inline NodePtr leaf(std::mt19937_64& rng, Ctx ctx) {
    std::vector<NodeKind> choices = {NodeKind::Lit, NodeKind::VarI};
    if (ctx != Ctx::Seq) choices.push_back(NodeKind::VarK);
    if (ctx == Ctx::Family) {
        choices.push_back(NodeKind::VarA);
        choices.push_back(NodeKind::VarB);
    }
    Node n;
    n.kind = choices[rng() % choices.size()];
    if (n.kind == NodeKind::Lit) n.a = rng() % 5;
    if (n.kind == NodeKind::VarK && ctx == Ctx::Family) n.kind = NodeKind::VarI;
    return mk(std::move(n));
}

// Arithmetic-only subterm in the given variable context.
inline NodePtr gen_arith(std::mt19937_64& rng, Ctx ctx, int depth) {
    if (depth <= 0) return leaf(rng, ctx);
    switch (rng() % 10) {
        case 0: return leaf(rng, ctx);
        case 1: {
            Node n;
            n.kind = NodeKind::Parity;
            n.kids = {gen_arith(rng, ctx, depth - 1)};
            return mk(std::move(n));
        }
        case 2:
        case 3: {
            Node n;
            n.kind = rng() % 2 ? NodeKind::Div : NodeKind::Mod;
            n.a = 1 + rng() % 7;
            n.kids = {gen_arith(rng, ctx, depth - 1)};
            return mk(std::move(n));
        }
        case 4: {
            Node n;
            n.kind = NodeKind::If;
            n.kids = {gen_arith(rng, ctx, depth - 1),
                      gen_arith(rng, ctx, depth - 1),
                      gen_arith(rng, ctx, depth - 1)};
            return mk(std::move(n));
        }
        default: {
            static constexpr NodeKind bins[] = {NodeKind::Add, NodeKind::Sub,
                                                NodeKind::Mul, NodeKind::Eq,
                                                NodeKind::Lt,  NodeKind::Bit};
            Node n;
            n.kind = bins[rng() % 6];
            n.kids = {gen_arith(rng, ctx, depth - 1),
                      gen_arith(rng, ctx, depth - 1)};
            return mk(std::move(n));
        }
    }
}

inline NodePtr gen_builder(std::mt19937_64& rng) {
    switch (rng() % 6) {
        case 0: {
            Node n;
            n.kind = NodeKind::Lit;
            n.a = rng() % 2;
            return mk(std::move(n));
        }
        case 1: {
            Node n;
            n.kind = NodeKind::Identity;
            return mk(std::move(n));
        }
        case 2: {
            Node n;
            n.kind = NodeKind::BinaryNat;
            return mk(std::move(n));
        }
        case 3: {
            Node n;
            n.kind = NodeKind::HashRows;
            n.a = rng() % 1000;
            return mk(std::move(n));
        }
        case 4: {
            Node n;
            n.kind = NodeKind::DoublyPeriodic;
            n.a = 1 + rng() % 3;
            n.b = 1 + rng() % 3;
            for (uint64_t j = 0; j < n.a * n.b; ++j)
                n.bits.push_back(static_cast<uint8_t>(rng() % 2));
            return mk(std::move(n));
        }
        default: {
            Node n;
            n.kind = NodeKind::CounterExample;
            return mk(std::move(n));
        }
    }
}

NodePtr gen_enum_node(std::mt19937_64& rng, int depth);

inline NodePtr gen_seq_node(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || rng() % 2 == 0) return gen_arith(rng, Ctx::Seq, depth);
    Node n;
    switch (rng() % 5) {
        case 0: n.kind = NodeKind::Diag; break;
        case 1:
            n.kind = NodeKind::RowDiag;
            n.perm = unrank_perm(rng() % 30);
            break;
        case 2:
            n.kind = NodeKind::TransDiag;
            n.perm = unrank_perm(rng() % 30);
            break;
        case 3: n.kind = NodeKind::ZOf; break;
        default:
            n.kind = NodeKind::RowOf;
            n.a = rng() % 8;
            break;
    }
    n.kids = {gen_enum_node(rng, depth - 1)};
    return mk(std::move(n));
}

inline NodePtr gen_enum_node(std::mt19937_64& rng, int depth) {
    if (depth <= 0) return gen_builder(rng);
    switch (rng() % 8) {
        case 0: return gen_builder(rng);
        case 1: return gen_arith(rng, Ctx::Enum, depth);
        case 2: {
            Node n;
            n.kind = NodeKind::Interleave;
            n.kids = {gen_enum_node(rng, depth - 1),
                      gen_enum_node(rng, depth - 1)};
            return mk(std::move(n));
        }
        case 3: {
            Node n;
            n.kind = NodeKind::Prepend;
            n.kids = {gen_seq_node(rng, depth - 1),
                      gen_enum_node(rng, depth - 1)};
            return mk(std::move(n));
        }
        case 4: {
            Node n;
            n.kind = NodeKind::Dovetail;
            n.kids = {gen_arith(rng, Ctx::Family, depth - 1)};
            return mk(std::move(n));
        }
        case 5: {
            Node n;
            n.kind = NodeKind::YRows;
            n.a = rng() % 2;
            n.kids = {gen_enum_node(rng, depth - 1)};
            return mk(std::move(n));
        }
        case 6: {
            Node n;
            n.kind = NodeKind::TowerLevel;
            n.a = 1 + rng() % 4;
            n.kids = {gen_enum_node(rng, depth - 1),
                      gen_enum_node(rng, depth - 1)};
            n.memo = std::make_shared<WMemo>();
            return mk(std::move(n));
        }
        default: {
            Node n;
            n.kind = NodeKind::XInfinity;
            n.kids = {gen_enum_node(rng, depth - 1),
                      gen_enum_node(rng, depth - 1)};
            n.memo = std::make_shared<WMemo>();
            return mk(std::move(n));
        }
    }
}

inline SeqTerm gen_seq(std::mt19937_64& rng, int depth = 4) {
    return SeqTerm(gen_seq_node(rng, depth));
}

inline EnumTerm gen_enum(std::mt19937_64& rng, int depth = 4) {
    return EnumTerm(gen_enum_node(rng, depth));
}

// Pure-arithmetic enumeration (the "generated SDL enumerations" corpus).
inline EnumTerm gen_sdl_enum(std::mt19937_64& rng, int depth = 4) {
    return EnumTerm(gen_arith(rng, Ctx::Enum, depth));
}

}  // namespace diaglab::testgen
