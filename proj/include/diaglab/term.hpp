#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "diaglab/perm.hpp"

namespace diaglab {

enum class NodeKind : uint8_t {
    // SDL syntax
    Lit,
    VarI,
    VarK,
    VarA,
    VarB,
    Add,
    Sub,   // truncated at 0
    Mul,
    Div,   // divisor is the positive literal in `a`
    Mod,   // likewise
    Eq,
    Lt,
    If,
    Bit,   // bit(n, j) = j-th binary digit of n
    Parity,
    // builder enumerations
    Identity,
    BinaryNat,
    HashRows,        // salt in `a`; indices must be < 2^32
    DoublyPeriodic,  // rows in `a`, cols in `b`, matrix in `bits`
    CounterExample,  // a_{k,i} = 1 iff (k = i and k >= 1) or (k = 0 and i = 1)
    // engine-injected sequence combinators
    Diag,       // 1 - e(i, i)
    RowDiag,    // 1 - e(i, p(i))
    TransDiag,  // 1 - e(p^-1(i), i)
    RowOf,      // e(a, i)
    ZOf,        // e(i, unrank(i)(i))
    // engine-injected enumeration combinators
    Interleave,
    Prepend,
    Dovetail,    // child has free a, b, i; row n uses (a,b) = unpair(n)
    YRows,       // row k = permuted diagonal with unrank(k); variant in `a`
    TowerLevel,  // level in `a`; kids are the base pair (x, y)
    XInfinity,
};

enum class DiagVariant : uint8_t { Row = 0, Transversal = 1 };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Memo for tower diagonals, keyed by (level, index). Shared between nodes
// that were derived from the same base pair; synchronized for concurrent
// evaluation.
struct WMemo {
    std::mutex mu;
    std::unordered_map<uint64_t, uint8_t> bits;
};

struct Node {
    NodeKind kind = NodeKind::Lit;
    uint64_t a = 0;
    uint64_t b = 0;
    std::vector<uint8_t> bits;   // DoublyPeriodic matrix, row-major
    FiniteSupportPerm perm;      // RowDiag / TransDiag
    std::vector<NodePtr> kids;
    std::shared_ptr<WMemo> memo; // TowerLevel / XInfinity
};

// Bitmask of free variables a node may read from its environment.
struct VarUse {
    static constexpr unsigned I = 1;
    static constexpr unsigned K = 2;
    static constexpr unsigned A = 4;
    static constexpr unsigned B = 8;
};
unsigned var_usage(const Node* n);

// Structural well-formedness: child counts, payload ranges, and variable
// scoping (combinators rebind their children's variables). Throws
// DomainError on violation. Used by term constructors and the decoder.
void validate_node(const NodePtr& n);

bool nodes_equal(const Node* x, const Node* y);

struct Env {
    uint64_t i = 0;
    uint64_t k = 0;
    uint64_t a = 0;
    uint64_t b = 0;
};

// Raw evaluation; combinator and builder nodes yield bits, SDL arithmetic
// is uint64 with wraparound, subtraction truncated at zero.
uint64_t eval_node(const Node* n, const Env& env);

// Closed total program denoting one infinite binary sequence (free var: i).
class SeqTerm {
  public:
    explicit SeqTerm(NodePtr root);
    const NodePtr& root() const { return root_; }
    friend bool operator==(const SeqTerm& x, const SeqTerm& y) {
        return nodes_equal(x.root().get(), y.root().get());
    }

  private:
    NodePtr root_;
};

// Denotes a countable family, the matrix a_{k,i} (free vars: k, i).
class EnumTerm {
  public:
    explicit EnumTerm(NodePtr root);
    const NodePtr& root() const { return root_; }
    friend bool operator==(const EnumTerm& x, const EnumTerm& y) {
        return nodes_equal(x.root().get(), y.root().get());
    }

  private:
    NodePtr root_;
};

// Two-parameter family (a, b, i) -> bit, consumed by dovetail.
class FamilyTerm {
  public:
    explicit FamilyTerm(NodePtr root);
    const NodePtr& root() const { return root_; }

  private:
    NodePtr root_;
};

int eval_seq(const SeqTerm& t, uint64_t i);
int eval_enum(const EnumTerm& e, uint64_t k, uint64_t i);

// SeqTerm s with s(i) = e(k, i) for all i.
SeqTerm row(const EnumTerm& e, uint64_t k);

namespace detail {
NodePtr make_node(Node n);
}

}  // namespace diaglab
