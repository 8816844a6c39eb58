#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diaglab/term.hpp"

namespace diaglab {

// Cantor pairing (a+b)(a+b+1)/2 + b, bijective N x N -> N.
uint64_t pair_index(uint64_t a, uint64_t b);
std::pair<uint64_t, uint64_t> unpair_index(uint64_t n);

// result(2t, i) = e1(t, i); result(2t+1, i) = e2(t, i).
EnumTerm interleave(const EnumTerm& e1, const EnumTerm& e2);

// result(0, i) = s(i); result(j+1, i) = e(j, i).
EnumTerm prepend(const SeqTerm& s, const EnumTerm& e);

// result(n, i) = family(a, b, i) where (a, b) = unpair(n).
EnumTerm dovetail(const FamilyTerm& family);

enum class BuilderName {
    Zeros,
    Ones,
    Identity,
    BinaryNaturals,
    HashRows,
    DoublyPeriodic,
    CounterExample,
};

struct BuilderSpec {
    BuilderName name = BuilderName::Zeros;
    uint64_t salt = 0;                              // hashrows
    std::vector<std::vector<uint8_t>> matrix;       // doubly_periodic, R >= 1 rows of C >= 1 bits
};

EnumTerm build_enumeration(const BuilderSpec& spec);

// Builder name as used by the CLI ("zeros", "binary_naturals", ...).
std::optional<BuilderName> builder_from_string(const std::string& name);

}  // namespace diaglab
