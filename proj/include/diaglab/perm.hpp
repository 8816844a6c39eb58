#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diaglab {

// Bijection of N equal to the identity at and beyond `bound()`.
// Canonical form: bound 0 (identity) or table.back() != bound-1, so each
// permutation has exactly one representation.
class FiniteSupportPerm {
  public:
    FiniteSupportPerm() = default;  // identity

    // Validates that `table` is a permutation of {0..m-1} and canonicalizes
    // by dropping trailing fixed points. Throws DomainError otherwise.
    explicit FiniteSupportPerm(std::vector<uint32_t> table);

    uint64_t apply(uint64_t i) const {
        return i < table_.size() ? table_[i] : i;
    }
    uint64_t apply_inverse(uint64_t i) const {
        return i < inverse_.size() ? inverse_[i] : i;
    }

    uint64_t bound() const { return table_.size(); }
    const std::vector<uint32_t>& table() const { return table_; }
    bool is_identity() const { return table_.empty(); }

    friend bool operator==(const FiniteSupportPerm& a,
                           const FiniteSupportPerm& b) {
        return a.table_ == b.table_;
    }

  private:
    std::vector<uint32_t> table_;
    std::vector<uint32_t> inverse_;
};

FiniteSupportPerm transposition(uint64_t a, uint64_t b);

// (p o q)(i) = p(q(i)).
FiniteSupportPerm compose_perm(const FiniteSupportPerm& p,
                               const FiniteSupportPerm& q);

FiniteSupportPerm invert_perm(const FiniteSupportPerm& p);

// Canonical bijection N <-> finite-support permutations: index 0 is the
// identity; then blocks of increasing bound m = 2,3,..., each block listing
// the m! - (m-1)! tables with table[m-1] != m-1 in lexicographic order.
FiniteSupportPerm unrank_perm(uint64_t n);
uint64_t rank_perm(const FiniteSupportPerm& p);

// Text forms: "id", "#n", "t(a,b)", and products "t(a,b)*t(c,d)" applied
// left to right.
FiniteSupportPerm parse_perm(const std::string& text);
std::string print_perm(const FiniteSupportPerm& p);

}  // namespace diaglab
