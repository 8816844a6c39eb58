#include "diaglab/enumerate.hpp"

#include <cmath>

#include "diaglab/error.hpp"

namespace diaglab {

uint64_t pair_index(uint64_t a, uint64_t b) {
    unsigned __int128 s = static_cast<unsigned __int128>(a) + b;
    unsigned __int128 n = s * (s + 1) / 2 + b;
    if (n > ~uint64_t{0}) throw DomainError("pair index overflows 64 bits");
    return static_cast<uint64_t>(n);
}

std::pair<uint64_t, uint64_t> unpair_index(uint64_t n) {
    // w = floor((sqrt(8n+1) - 1) / 2), corrected for rounding.
    uint64_t w = static_cast<uint64_t>(
        (std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0);
    auto tri = [](uint64_t v) {
        return static_cast<unsigned __int128>(v) * (v + 1) / 2;
    };
    while (w > 0 && tri(w) > n) --w;
    while (tri(w + 1) <= n) ++w;
    uint64_t b = n - static_cast<uint64_t>(tri(w));
    return {w - b, b};
}

EnumTerm interleave(const EnumTerm& e1, const EnumTerm& e2) {
    Node n;
    n.kind = NodeKind::Interleave;
    n.kids = {e1.root(), e2.root()};
    return EnumTerm(detail::make_node(std::move(n)));
}

EnumTerm prepend(const SeqTerm& s, const EnumTerm& e) {
    Node n;
    n.kind = NodeKind::Prepend;
    n.kids = {s.root(), e.root()};
    return EnumTerm(detail::make_node(std::move(n)));
}

EnumTerm dovetail(const FamilyTerm& family) {
    Node n;
    n.kind = NodeKind::Dovetail;
    n.kids = {family.root()};
    return EnumTerm(detail::make_node(std::move(n)));
}

EnumTerm build_enumeration(const BuilderSpec& spec) {
    Node n;
    switch (spec.name) {
        case BuilderName::Zeros:
            n.kind = NodeKind::Lit;
            n.a = 0;
            break;
        case BuilderName::Ones:
            n.kind = NodeKind::Lit;
            n.a = 1;
            break;
        case BuilderName::Identity:
            n.kind = NodeKind::Identity;
            break;
        case BuilderName::BinaryNaturals:
            n.kind = NodeKind::BinaryNat;
            break;
        case BuilderName::HashRows:
            n.kind = NodeKind::HashRows;
            n.a = spec.salt;
            break;
        case BuilderName::DoublyPeriodic: {
            if (spec.matrix.empty() || spec.matrix[0].empty())
                throw DomainError("doubly_periodic requires a nonempty matrix");
            size_t cols = spec.matrix[0].size();
            n.kind = NodeKind::DoublyPeriodic;
            n.a = spec.matrix.size();
            n.b = cols;
            for (const auto& r : spec.matrix) {
                if (r.size() != cols)
                    throw DomainError("doubly_periodic rows must have equal length");
                for (uint8_t v : r) {
                    if (v > 1)
                        throw DomainError("doubly_periodic entries must be bits");
                    n.bits.push_back(v);
                }
            }
            break;
        }
        case BuilderName::CounterExample:
            n.kind = NodeKind::CounterExample;
            break;
    }
    return EnumTerm(detail::make_node(std::move(n)));
}

std::optional<BuilderName> builder_from_string(const std::string& name) {
    if (name == "zeros") return BuilderName::Zeros;
    if (name == "ones") return BuilderName::Ones;
    if (name == "identity") return BuilderName::Identity;
    if (name == "binary_naturals") return BuilderName::BinaryNaturals;
    if (name == "hashrows") return BuilderName::HashRows;
    if (name == "doubly_periodic") return BuilderName::DoublyPeriodic;
    if (name == "counterexample") return BuilderName::CounterExample;
    return std::nullopt;
}

}  // namespace diaglab
