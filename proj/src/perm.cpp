#include "diaglab/perm.hpp"

#include <algorithm>
#include <cctype>

#include "diaglab/error.hpp"

namespace diaglab {

namespace {

std::vector<uint32_t> invert_table(const std::vector<uint32_t>& table) {
    std::vector<uint32_t> inv(table.size());
    for (uint32_t i = 0; i < table.size(); ++i) inv[table[i]] = i;
    return inv;
}

// Drop trailing fixed points.
void canonicalize(std::vector<uint32_t>& table) {
    while (!table.empty() && table.back() == table.size() - 1)
        table.pop_back();
}

using u128 = unsigned __int128;

u128 factorial(uint64_t m) {
    u128 f = 1;
    for (uint64_t v = 2; v <= m; ++v) f *= v;
    return f;
}

// Orderings of the remaining `slots`-element set S into the final slots of
// a bound-m table, subject to table[m-1] != m-1.
u128 completions(uint64_t slots, bool last_value_available) {
    if (slots == 0) return 1;
    u128 total = factorial(slots);
    if (last_value_available) total -= factorial(slots - 1);
    return total;
}

}  // namespace

FiniteSupportPerm::FiniteSupportPerm(std::vector<uint32_t> table) {
    std::vector<bool> seen(table.size(), false);
    for (uint32_t v : table) {
        if (v >= table.size() || seen[v])
            throw DomainError("table is not a permutation of {0..m-1}");
        seen[v] = true;
    }
    canonicalize(table);
    table_ = std::move(table);
    inverse_ = invert_table(table_);
}

FiniteSupportPerm transposition(uint64_t a, uint64_t b) {
    if (a == b) throw DomainError("transposition requires distinct points");
    uint64_t m = std::max(a, b) + 1;
    if (m > (1u << 30)) throw DomainError("transposition point too large");
    std::vector<uint32_t> table(m);
    for (uint32_t i = 0; i < m; ++i) table[i] = i;
    std::swap(table[a], table[b]);
    return FiniteSupportPerm(std::move(table));
}

FiniteSupportPerm compose_perm(const FiniteSupportPerm& p,
                               const FiniteSupportPerm& q) {
    uint64_t m = std::max(p.bound(), q.bound());
    std::vector<uint32_t> table(m);
    for (uint64_t i = 0; i < m; ++i)
        table[i] = static_cast<uint32_t>(p.apply(q.apply(i)));
    return FiniteSupportPerm(std::move(table));
}

FiniteSupportPerm invert_perm(const FiniteSupportPerm& p) {
    std::vector<uint32_t> inv(p.bound());
    for (uint32_t i = 0; i < p.bound(); ++i) inv[p.table()[i]] = i;
    return FiniteSupportPerm(std::move(inv));
}

FiniteSupportPerm unrank_perm(uint64_t n) {
    if (n == 0) return FiniteSupportPerm();
    u128 rest = n - 1;
    uint64_t m = 2;
    for (;; ++m) {
        u128 block = factorial(m) - factorial(m - 1);
        if (rest < block) break;
        rest -= block;
    }
    // Lexicographically `rest`-th table of bound m with table[m-1] != m-1.
    std::vector<uint32_t> remaining(m);
    for (uint32_t i = 0; i < m; ++i) remaining[i] = i;
    std::vector<uint32_t> table;
    table.reserve(m);
    for (uint64_t pos = 0; pos < m; ++pos) {
        uint64_t slots = m - 1 - pos;
        for (size_t ci = 0; ci < remaining.size(); ++ci) {
            uint32_t v = remaining[ci];
            u128 cnt;
            if (slots == 0) {
                cnt = (v != m - 1) ? 1 : 0;
            } else {
                bool last_avail =
                    std::find(remaining.begin(), remaining.end(),
                              static_cast<uint32_t>(m - 1)) != remaining.end() &&
                    v != m - 1;
                // m-1 remains available for the last slot unless v consumes it
                cnt = completions(slots, last_avail);
            }
            if (rest < cnt) {
                table.push_back(v);
                remaining.erase(remaining.begin() + ci);
                break;
            }
            rest -= cnt;
        }
    }
    return FiniteSupportPerm(std::move(table));
}

uint64_t rank_perm(const FiniteSupportPerm& p) {
    if (p.is_identity()) return 0;
    uint64_t m = p.bound();
    u128 rank = 1;
    for (uint64_t v = 2; v < m; ++v) rank += factorial(v) - factorial(v - 1);
    std::vector<uint32_t> remaining(m);
    for (uint32_t i = 0; i < m; ++i) remaining[i] = i;
    for (uint64_t pos = 0; pos < m; ++pos) {
        uint32_t chosen = p.table()[pos];
        uint64_t slots = m - 1 - pos;
        for (size_t ci = 0; remaining[ci] != chosen; ++ci) {
            uint32_t v = remaining[ci];
            u128 cnt;
            if (slots == 0) {
                cnt = (v != m - 1) ? 1 : 0;
            } else {
                bool last_avail =
                    std::find(remaining.begin(), remaining.end(),
                              static_cast<uint32_t>(m - 1)) != remaining.end() &&
                    v != m - 1;
                cnt = completions(slots, last_avail);
            }
            rank += cnt;
        }
        remaining.erase(
            std::find(remaining.begin(), remaining.end(), chosen));
    }
    if (rank > u128(~uint64_t{0}))
        throw DomainError("rank does not fit in 64 bits");
    return static_cast<uint64_t>(rank);
}

namespace {

struct PermLexer {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw ParseError(std::string("expected '") + c +
                                 "' in permutation text: " + s,
                             1, static_cast<int>(pos) + 1);
    }
    uint64_t number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start)
            throw ParseError("expected number in permutation text: " + s,
                             1, static_cast<int>(pos) + 1);
        return std::stoull(s.substr(start, pos - start));
    }
};

}  // namespace

FiniteSupportPerm parse_perm(const std::string& text) {
    PermLexer lx{text};
    lx.skip_ws();
    if (text.compare(lx.pos, 2, "id") == 0) {
        lx.pos += 2;
        lx.skip_ws();
        if (lx.pos != text.size())
            throw ParseError("trailing characters in permutation text: " + text,
                             1, static_cast<int>(lx.pos) + 1);
        return FiniteSupportPerm();
    }
    if (lx.eat('#')) {
        uint64_t n = lx.number();
        lx.skip_ws();
        if (lx.pos != text.size())
            throw ParseError("trailing characters in permutation text: " + text,
                             1, static_cast<int>(lx.pos) + 1);
        return unrank_perm(n);
    }
    // product of transpositions, applied left to right
    FiniteSupportPerm acc;
    for (;;) {
        lx.skip_ws();
        if (lx.pos >= text.size() || text[lx.pos] != 't')
            throw ParseError("expected transposition t(a,b) in: " + text,
                             1, static_cast<int>(lx.pos) + 1);
        ++lx.pos;
        lx.expect('(');
        uint64_t a = lx.number();
        lx.expect(',');
        uint64_t b = lx.number();
        lx.expect(')');
        acc = compose_perm(transposition(a, b), acc);
        lx.skip_ws();
        if (lx.pos == text.size()) break;
        lx.expect('*');
    }
    return acc;
}

std::string print_perm(const FiniteSupportPerm& p) {
    if (p.is_identity()) return "id";
    return "#" + std::to_string(rank_perm(p));
}

}  // namespace diaglab
