#include "diaglab/codec.hpp"

#include <cstdint>
#include <vector>

#include "diaglab/error.hpp"

namespace diaglab {

namespace {

// Tag table; documented in docs/codec.md. Values are part of the wire
// format and must not be renumbered.
uint8_t tag_of(NodeKind k) {
    switch (k) {
        case NodeKind::Lit: return 0x00;
        case NodeKind::VarI: return 0x01;
        case NodeKind::VarK: return 0x02;
        case NodeKind::VarA: return 0x03;
        case NodeKind::VarB: return 0x04;
        case NodeKind::Add: return 0x05;
        case NodeKind::Sub: return 0x06;
        case NodeKind::Mul: return 0x07;
        case NodeKind::Div: return 0x08;
        case NodeKind::Mod: return 0x09;
        case NodeKind::Eq: return 0x0A;
        case NodeKind::Lt: return 0x0B;
        case NodeKind::If: return 0x0C;
        case NodeKind::Bit: return 0x0D;
        case NodeKind::Parity: return 0x0E;
        case NodeKind::Identity: return 0x10;
        case NodeKind::BinaryNat: return 0x11;
        case NodeKind::HashRows: return 0x12;
        case NodeKind::DoublyPeriodic: return 0x13;
        case NodeKind::CounterExample: return 0x14;
        case NodeKind::Diag: return 0x20;
        case NodeKind::RowDiag: return 0x21;
        case NodeKind::TransDiag: return 0x22;
        case NodeKind::RowOf: return 0x23;
        case NodeKind::ZOf: return 0x24;
        case NodeKind::Interleave: return 0x30;
        case NodeKind::Prepend: return 0x31;
        case NodeKind::Dovetail: return 0x32;
        case NodeKind::YRows: return 0x33;
        case NodeKind::TowerLevel: return 0x34;
        case NodeKind::XInfinity: return 0x35;
    }
    throw DomainError("unreachable node kind");
}

bool kind_of(uint8_t tag, NodeKind& out) {
    switch (tag) {
        case 0x00: out = NodeKind::Lit; return true;
        case 0x01: out = NodeKind::VarI; return true;
        case 0x02: out = NodeKind::VarK; return true;
        case 0x03: out = NodeKind::VarA; return true;
        case 0x04: out = NodeKind::VarB; return true;
        case 0x05: out = NodeKind::Add; return true;
        case 0x06: out = NodeKind::Sub; return true;
        case 0x07: out = NodeKind::Mul; return true;
        case 0x08: out = NodeKind::Div; return true;
        case 0x09: out = NodeKind::Mod; return true;
        case 0x0A: out = NodeKind::Eq; return true;
        case 0x0B: out = NodeKind::Lt; return true;
        case 0x0C: out = NodeKind::If; return true;
        case 0x0D: out = NodeKind::Bit; return true;
        case 0x0E: out = NodeKind::Parity; return true;
        case 0x10: out = NodeKind::Identity; return true;
        case 0x11: out = NodeKind::BinaryNat; return true;
        case 0x12: out = NodeKind::HashRows; return true;
        case 0x13: out = NodeKind::DoublyPeriodic; return true;
        case 0x14: out = NodeKind::CounterExample; return true;
        case 0x20: out = NodeKind::Diag; return true;
        case 0x21: out = NodeKind::RowDiag; return true;
        case 0x22: out = NodeKind::TransDiag; return true;
        case 0x23: out = NodeKind::RowOf; return true;
        case 0x24: out = NodeKind::ZOf; return true;
        case 0x30: out = NodeKind::Interleave; return true;
        case 0x31: out = NodeKind::Prepend; return true;
        case 0x32: out = NodeKind::Dovetail; return true;
        case 0x33: out = NodeKind::YRows; return true;
        case 0x34: out = NodeKind::TowerLevel; return true;
        case 0x35: out = NodeKind::XInfinity; return true;
        default: return false;
    }
}

void put_varint(std::vector<uint8_t>& out, uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<uint8_t>(v) | 0x80);
        v >>= 7;
    }
    out.push_back(static_cast<uint8_t>(v));
}

void encode_perm(std::vector<uint8_t>& out, const FiniteSupportPerm& p) {
    put_varint(out, p.bound());
    for (uint32_t v : p.table()) put_varint(out, v);
}

void encode_node(std::vector<uint8_t>& out, const Node* n) {
    out.push_back(tag_of(n->kind));
    switch (n->kind) {
        case NodeKind::Lit:
        case NodeKind::Div:
        case NodeKind::Mod:
        case NodeKind::HashRows:
        case NodeKind::RowOf:
        case NodeKind::YRows:
        case NodeKind::TowerLevel:
            put_varint(out, n->a);
            break;
        case NodeKind::DoublyPeriodic:
            put_varint(out, n->a);
            put_varint(out, n->b);
            for (uint8_t bit : n->bits) out.push_back(bit);
            break;
        case NodeKind::RowDiag:
        case NodeKind::TransDiag:
            encode_perm(out, n->perm);
            break;
        default:
            break;
    }
    for (const auto& kid : n->kids) encode_node(out, kid.get());
}

struct Reader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;

    uint8_t byte() {
        if (pos >= buf.size())
            throw InvalidCodeError("truncated term encoding");
        return buf[pos++];
    }

    // Canonical LEB128: minimal length, at most 10 groups, fits in 64 bits.
    uint64_t varint() {
        uint64_t v = 0;
        int shift = 0;
        for (;;) {
            uint8_t b = byte();
            if (shift == 63 && (b & 0x7F) > 1)
                throw InvalidCodeError("varint overflows 64 bits");
            v |= static_cast<uint64_t>(b & 0x7F) << shift;
            if (!(b & 0x80)) {
                if (b == 0 && shift != 0)
                    throw InvalidCodeError("non-canonical varint");
                return v;
            }
            shift += 7;
            if (shift > 63) throw InvalidCodeError("varint too long");
        }
    }
};

NodePtr decode_node(Reader& rd, int depth) {
    if (depth > 10000) throw InvalidCodeError("term nesting too deep");
    NodeKind kind;
    if (!kind_of(rd.byte(), kind))
        throw InvalidCodeError("unknown node tag");
    Node n;
    n.kind = kind;
    switch (kind) {
        case NodeKind::Lit:
        case NodeKind::HashRows:
        case NodeKind::RowOf:
            n.a = rd.varint();
            break;
        case NodeKind::Div:
        case NodeKind::Mod:
            n.a = rd.varint();
            if (n.a == 0) throw InvalidCodeError("zero divisor in encoding");
            break;
        case NodeKind::YRows:
            n.a = rd.varint();
            if (n.a > 1) throw InvalidCodeError("invalid Y variant");
            break;
        case NodeKind::TowerLevel:
            n.a = rd.varint();
            if (n.a == 0) throw InvalidCodeError("invalid tower level");
            n.memo = std::make_shared<WMemo>();
            break;
        case NodeKind::XInfinity:
            n.memo = std::make_shared<WMemo>();
            break;
        case NodeKind::DoublyPeriodic: {
            n.a = rd.varint();
            n.b = rd.varint();
            if (n.a == 0 || n.b == 0)
                throw InvalidCodeError("invalid matrix dimensions");
            if (n.a > (1u << 16) || n.b > (1u << 16))
                throw InvalidCodeError("matrix dimensions too large");
            n.bits.reserve(n.a * n.b);
            for (uint64_t j = 0; j < n.a * n.b; ++j) {
                uint8_t v = rd.byte();
                if (v > 1) throw InvalidCodeError("matrix entry is not a bit");
                n.bits.push_back(v);
            }
            break;
        }
        case NodeKind::RowDiag:
        case NodeKind::TransDiag: {
            uint64_t m = rd.varint();
            if (m > (1u << 30)) throw InvalidCodeError("permutation bound too large");
            std::vector<uint32_t> table;
            table.reserve(m);
            for (uint64_t j = 0; j < m; ++j) {
                uint64_t v = rd.varint();
                if (v >= m) throw InvalidCodeError("permutation entry out of range");
                table.push_back(static_cast<uint32_t>(v));
            }
            if (m > 0 && table.back() == m - 1)
                throw InvalidCodeError("non-canonical permutation");
            try {
                n.perm = FiniteSupportPerm(std::move(table));
            } catch (const Error&) {
                throw InvalidCodeError("invalid permutation table");
            }
            break;
        }
        default:
            break;
    }
    size_t kids;
    switch (kind) {
        case NodeKind::If: kids = 3; break;
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
            kids = 2;
            break;
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
            kids = 1;
            break;
        default:
            kids = 0;
            break;
    }
    for (size_t j = 0; j < kids; ++j)
        n.kids.push_back(decode_node(rd, depth + 1));
    return detail::make_node(std::move(n));
}

// Bijective base-256: empty string <-> 0; bytes b_0..b_{m-1} <->
// sum (b_j + 1) * 256^j.
GodelCode bytes_to_code(const std::vector<uint8_t>& bytes) {
    GodelCode n = 0;
    GodelCode place = 1;
    for (uint8_t b : bytes) {
        n += place * (static_cast<unsigned>(b) + 1);
        place *= 256;
    }
    return n;
}

std::vector<uint8_t> code_to_bytes(GodelCode n) {
    if (n < 0) throw InvalidCodeError("codes are naturals");
    std::vector<uint8_t> bytes;
    while (n > 0) {
        GodelCode d = (n - 1) % 256 + 1;
        bytes.push_back(static_cast<uint8_t>(d.convert_to<unsigned>() - 1));
        n = (n - d) / 256;
    }
    return bytes;
}

constexpr uint8_t SORT_SEQ = 0x00;
constexpr uint8_t SORT_ENUM = 0x01;

GodelCode encode_with_sort(uint8_t sort, const Node* root) {
    std::vector<uint8_t> bytes;
    bytes.push_back(sort);
    encode_node(bytes, root);
    return bytes_to_code(bytes);
}

}  // namespace

GodelCode encode_term(const SeqTerm& t) {
    return encode_with_sort(SORT_SEQ, t.root().get());
}

GodelCode encode_term(const EnumTerm& t) {
    return encode_with_sort(SORT_ENUM, t.root().get());
}

DecodedTerm decode_term(const GodelCode& code) {
    std::vector<uint8_t> bytes = code_to_bytes(code);
    if (bytes.empty()) throw InvalidCodeError("empty encoding");
    Reader rd{bytes, 1};
    uint8_t sort = bytes[0];
    if (sort != SORT_SEQ && sort != SORT_ENUM)
        throw InvalidCodeError("unknown term sort");
    NodePtr root = decode_node(rd, 0);
    if (rd.pos != bytes.size())
        throw InvalidCodeError("trailing bytes after term");
    try {
        if (sort == SORT_SEQ) return SeqTerm(root);
        return EnumTerm(root);
    } catch (const Error& e) {
        throw InvalidCodeError(std::string("malformed term: ") + e.what());
    }
}

}  // namespace diaglab
