#include "diaglab/parse.hpp"

#include <cctype>
#include <sstream>

#include "diaglab/error.hpp"
#include "diaglab/perm.hpp"

namespace diaglab {

namespace {

using detail::make_node;

constexpr unsigned SEQ_VARS = VarUse::I;
constexpr unsigned ENUM_VARS = VarUse::K | VarUse::I;
constexpr unsigned FAMILY_VARS = VarUse::A | VarUse::B | VarUse::I;

enum class Tok { Number, Ident, Sym, End };

struct Token {
    Tok kind = Tok::End;
    uint64_t number = 0;
    std::string text;  // ident name or symbol
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& cur() const { return cur_; }

    void advance() {
        skip_ws();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            cur_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            uint64_t v = 0;
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                uint64_t d = src_[pos_] - '0';
                if (v > (~uint64_t{0} - d) / 10)
                    fail("integer literal too large");
                v = v * 10 + d;
                step();
            }
            (void)start;
            cur_.kind = Tok::Number;
            cur_.number = v;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_')) {
                name.push_back(src_[pos_]);
                step();
            }
            cur_.kind = Tok::Ident;
            cur_.text = std::move(name);
            return;
        }
        static const std::string syms = "+-*(),[]#";
        if (syms.find(c) != std::string::npos) {
            cur_.kind = Tok::Sym;
            cur_.text = std::string(1, c);
            step();
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, col_);
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
        throw ParseError(msg, t.line, t.col);
    }

  private:
    void step() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            step();
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
};

class Parser {
  public:
    explicit Parser(const std::string& src) : lx_(src) {}

    NodePtr parse_all(unsigned allowed) {
        NodePtr n = expr(allowed);
        if (lx_.cur().kind != Tok::End)
            lx_.fail_at(lx_.cur(), "trailing input after expression");
        return n;
    }

  private:
    bool at_sym(const char* s) const {
        return lx_.cur().kind == Tok::Sym && lx_.cur().text == s;
    }
    bool at_ident(const char* s) const {
        return lx_.cur().kind == Tok::Ident && lx_.cur().text == s;
    }
    void expect_sym(const char* s) {
        if (!at_sym(s))
            lx_.fail_at(lx_.cur(), std::string("expected '") + s + "'");
        lx_.advance();
    }
    uint64_t expect_number() {
        if (lx_.cur().kind != Tok::Number)
            lx_.fail_at(lx_.cur(), "expected integer literal");
        uint64_t v = lx_.cur().number;
        lx_.advance();
        return v;
    }

    NodePtr expr(unsigned allowed) {
        NodePtr left = term(allowed);
        for (;;) {
            NodeKind op;
            if (at_sym("+")) op = NodeKind::Add;
            else if (at_sym("-")) op = NodeKind::Sub;
            else break;
            lx_.advance();
            NodePtr right = term(allowed);
            Node n;
            n.kind = op;
            n.kids = {std::move(left), std::move(right)};
            left = make_node(std::move(n));
        }
        return left;
    }

    NodePtr term(unsigned allowed) {
        NodePtr left = atom(allowed);
        for (;;) {
            if (at_sym("*")) {
                lx_.advance();
                NodePtr right = atom(allowed);
                Node n;
                n.kind = NodeKind::Mul;
                n.kids = {std::move(left), std::move(right)};
                left = make_node(std::move(n));
            } else if (at_ident("div") || at_ident("mod")) {
                bool is_div = lx_.cur().text == "div";
                Token op_tok = lx_.cur();
                lx_.advance();
                if (lx_.cur().kind != Tok::Number)
                    lx_.fail_at(lx_.cur(), "divisor must be an integer literal");
                uint64_t d = lx_.cur().number;
                if (d == 0)
                    throw ZeroDivisorError("divisor must be positive",
                                           op_tok.line, op_tok.col);
                lx_.advance();
                Node n;
                n.kind = is_div ? NodeKind::Div : NodeKind::Mod;
                n.a = d;
                n.kids = {std::move(left)};
                left = make_node(std::move(n));
            } else {
                break;
            }
        }
        return left;
    }

    NodePtr fun2(NodeKind kind, unsigned allowed) {
        expect_sym("(");
        NodePtr x = expr(allowed);
        expect_sym(",");
        NodePtr y = expr(allowed);
        expect_sym(")");
        Node n;
        n.kind = kind;
        n.kids = {std::move(x), std::move(y)};
        return make_node(std::move(n));
    }

    NodePtr enum_arg_open() {
        expect_sym("(");
        return expr(ENUM_VARS);
    }

    FiniteSupportPerm perm_arg() {
        // "id", "#n", or t(a,b)*t(c,d)... inline in the token stream
        if (at_ident("id")) {
            lx_.advance();
            return FiniteSupportPerm();
        }
        if (at_sym("#")) {
            lx_.advance();
            return unrank_perm(expect_number());
        }
        FiniteSupportPerm acc;
        for (;;) {
            if (!at_ident("t"))
                lx_.fail_at(lx_.cur(), "expected permutation (id, #n or t(a,b))");
            lx_.advance();
            expect_sym("(");
            uint64_t a = expect_number();
            expect_sym(",");
            uint64_t b = expect_number();
            expect_sym(")");
            acc = compose_perm(transposition(a, b), acc);
            if (!at_sym("*")) break;
            lx_.advance();
        }
        return acc;
    }

    NodePtr atom(unsigned allowed) {
        const Token tok = lx_.cur();
        if (tok.kind == Tok::Number) {
            lx_.advance();
            Node n;
            n.kind = NodeKind::Lit;
            n.a = tok.number;
            return make_node(std::move(n));
        }
        if (at_sym("(")) {
            lx_.advance();
            NodePtr inner = expr(allowed);
            expect_sym(")");
            return inner;
        }
        if (tok.kind != Tok::Ident)
            lx_.fail_at(tok, "expected expression");
        const std::string& name = tok.text;

        auto var = [&](NodeKind kind, unsigned use) {
            if (!(allowed & use))
                throw UnboundVariableError("unbound variable `" + name + "`",
                                           tok.line, tok.col);
            lx_.advance();
            Node n;
            n.kind = kind;
            return make_node(std::move(n));
        };
        if (name == "i") return var(NodeKind::VarI, VarUse::I);
        if (name == "k") return var(NodeKind::VarK, VarUse::K);
        if (name == "a") return var(NodeKind::VarA, VarUse::A);
        if (name == "b") return var(NodeKind::VarB, VarUse::B);

        lx_.advance();
        if (name == "eq") return fun2(NodeKind::Eq, allowed);
        if (name == "lt") return fun2(NodeKind::Lt, allowed);
        if (name == "bit") return fun2(NodeKind::Bit, allowed);
        if (name == "parity") {
            expect_sym("(");
            NodePtr x = expr(allowed);
            expect_sym(")");
            Node n;
            n.kind = NodeKind::Parity;
            n.kids = {std::move(x)};
            return make_node(std::move(n));
        }
        if (name == "if") {
            expect_sym("(");
            NodePtr c = expr(allowed);
            expect_sym(",");
            NodePtr t = expr(allowed);
            expect_sym(",");
            NodePtr e = expr(allowed);
            expect_sym(")");
            Node n;
            n.kind = NodeKind::If;
            n.kids = {std::move(c), std::move(t), std::move(e)};
            return make_node(std::move(n));
        }

        // builders
        if (name == "identity") {
            Node n;
            n.kind = NodeKind::Identity;
            return make_node(std::move(n));
        }
        if (name == "binary_naturals") {
            Node n;
            n.kind = NodeKind::BinaryNat;
            return make_node(std::move(n));
        }
        if (name == "counterexample") {
            Node n;
            n.kind = NodeKind::CounterExample;
            return make_node(std::move(n));
        }
        if (name == "hashrows") {
            expect_sym("(");
            uint64_t salt = expect_number();
            expect_sym(")");
            Node n;
            n.kind = NodeKind::HashRows;
            n.a = salt;
            return make_node(std::move(n));
        }
        if (name == "doubly_periodic") {
            expect_sym("(");
            Node n;
            n.kind = NodeKind::DoublyPeriodic;
            uint64_t cols = 0;
            uint64_t rows = 0;
            for (;;) {
                expect_sym("[");
                uint64_t c = 0;
                for (;;) {
                    uint64_t v = expect_number();
                    if (v > 1)
                        lx_.fail_at(lx_.cur(), "matrix entries must be bits");
                    n.bits.push_back(static_cast<uint8_t>(v));
                    ++c;
                    if (at_sym(",")) {
                        lx_.advance();
                        continue;
                    }
                    break;
                }
                expect_sym("]");
                ++rows;
                if (cols == 0) cols = c;
                else if (c != cols)
                    lx_.fail_at(lx_.cur(), "matrix rows must have equal length");
                if (at_sym(",")) {
                    lx_.advance();
                    continue;
                }
                break;
            }
            expect_sym(")");
            n.a = rows;
            n.b = cols;
            return make_node(std::move(n));
        }

        // sequence combinators
        if (name == "diag" || name == "zof") {
            NodePtr e = enum_arg_open();
            expect_sym(")");
            Node n;
            n.kind = name == "diag" ? NodeKind::Diag : NodeKind::ZOf;
            n.kids = {std::move(e)};
            return make_node(std::move(n));
        }
        if (name == "rowdiag" || name == "transdiag") {
            NodePtr e = enum_arg_open();
            expect_sym(",");
            FiniteSupportPerm p = perm_arg();
            expect_sym(")");
            Node n;
            n.kind =
                name == "rowdiag" ? NodeKind::RowDiag : NodeKind::TransDiag;
            n.perm = std::move(p);
            n.kids = {std::move(e)};
            return make_node(std::move(n));
        }
        if (name == "row") {
            NodePtr e = enum_arg_open();
            expect_sym(",");
            uint64_t k = expect_number();
            expect_sym(")");
            Node n;
            n.kind = NodeKind::RowOf;
            n.a = k;
            n.kids = {std::move(e)};
            return make_node(std::move(n));
        }

        // enumeration combinators
        if (name == "interleave" || name == "xinf") {
            NodePtr e1 = enum_arg_open();
            expect_sym(",");
            NodePtr e2 = expr(ENUM_VARS);
            expect_sym(")");
            Node n;
            n.kind = name == "interleave" ? NodeKind::Interleave
                                          : NodeKind::XInfinity;
            n.kids = {std::move(e1), std::move(e2)};
            if (n.kind == NodeKind::XInfinity)
                n.memo = std::make_shared<WMemo>();
            return make_node(std::move(n));
        }
        if (name == "prepend") {
            expect_sym("(");
            NodePtr s = expr(SEQ_VARS);
            expect_sym(",");
            NodePtr e = expr(ENUM_VARS);
            expect_sym(")");
            Node n;
            n.kind = NodeKind::Prepend;
            n.kids = {std::move(s), std::move(e)};
            return make_node(std::move(n));
        }
        if (name == "dovetail") {
            expect_sym("(");
            NodePtr f = expr(FAMILY_VARS);
            expect_sym(")");
            Node n;
            n.kind = NodeKind::Dovetail;
            n.kids = {std::move(f)};
            return make_node(std::move(n));
        }
        if (name == "yrows") {
            NodePtr e = enum_arg_open();
            expect_sym(",");
            DiagVariant v;
            if (at_ident("row")) v = DiagVariant::Row;
            else if (at_ident("transversal")) v = DiagVariant::Transversal;
            else lx_.fail_at(lx_.cur(), "expected variant `row` or `transversal`");
            lx_.advance();
            expect_sym(")");
            Node n;
            n.kind = NodeKind::YRows;
            n.a = static_cast<uint64_t>(v);
            n.kids = {std::move(e)};
            return make_node(std::move(n));
        }
        if (name == "tower") {
            NodePtr x = enum_arg_open();
            expect_sym(",");
            NodePtr y = expr(ENUM_VARS);
            expect_sym(",");
            uint64_t lvl = expect_number();
            if (lvl == 0)
                lx_.fail_at(tok, "tower level must be >= 1");
            expect_sym(")");
            Node n;
            n.kind = NodeKind::TowerLevel;
            n.a = lvl;
            n.kids = {std::move(x), std::move(y)};
            n.memo = std::make_shared<WMemo>();
            return make_node(std::move(n));
        }

        lx_.fail_at(tok, "unknown identifier `" + name + "`");
    }

    Lexer lx_;
};

// ---- canonical printer ----

// precedence levels: 0 additive, 1 multiplicative, 2 atom
int node_level(const Node* n) {
    switch (n->kind) {
        case NodeKind::Add:
        case NodeKind::Sub:
            return 0;
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Mod:
            return 1;
        default:
            return 2;
    }
}

void print_node(std::ostream& os, const Node* n, int min_level);

void print_call(std::ostream& os, const char* name,
                std::initializer_list<const Node*> args) {
    os << name << "(";
    bool first = true;
    for (const Node* a : args) {
        if (!first) os << ", ";
        first = false;
        print_node(os, a, 0);
    }
    os << ")";
}

void print_node(std::ostream& os, const Node* n, int min_level) {
    int lvl = node_level(n);
    if (lvl < min_level) {
        os << "(";
        print_node(os, n, 0);
        os << ")";
        return;
    }
    switch (n->kind) {
        case NodeKind::Lit: os << n->a; break;
        case NodeKind::VarI: os << "i"; break;
        case NodeKind::VarK: os << "k"; break;
        case NodeKind::VarA: os << "a"; break;
        case NodeKind::VarB: os << "b"; break;
        case NodeKind::Add:
        case NodeKind::Sub:
            print_node(os, n->kids[0].get(), 0);
            os << (n->kind == NodeKind::Add ? " + " : " - ");
            print_node(os, n->kids[1].get(), 1);
            break;
        case NodeKind::Mul:
            print_node(os, n->kids[0].get(), 1);
            os << " * ";
            print_node(os, n->kids[1].get(), 2);
            break;
        case NodeKind::Div:
        case NodeKind::Mod:
            print_node(os, n->kids[0].get(), 1);
            os << (n->kind == NodeKind::Div ? " div " : " mod ") << n->a;
            break;
        case NodeKind::Eq:
            print_call(os, "eq", {n->kids[0].get(), n->kids[1].get()});
            break;
        case NodeKind::Lt:
            print_call(os, "lt", {n->kids[0].get(), n->kids[1].get()});
            break;
        case NodeKind::Bit:
            print_call(os, "bit", {n->kids[0].get(), n->kids[1].get()});
            break;
        case NodeKind::Parity:
            print_call(os, "parity", {n->kids[0].get()});
            break;
        case NodeKind::If:
            print_call(os, "if",
                       {n->kids[0].get(), n->kids[1].get(), n->kids[2].get()});
            break;
        case NodeKind::Identity: os << "identity"; break;
        case NodeKind::BinaryNat: os << "binary_naturals"; break;
        case NodeKind::CounterExample: os << "counterexample"; break;
        case NodeKind::HashRows: os << "hashrows(" << n->a << ")"; break;
        case NodeKind::DoublyPeriodic: {
            os << "doubly_periodic(";
            for (uint64_t r = 0; r < n->a; ++r) {
                if (r) os << ", ";
                os << "[";
                for (uint64_t c = 0; c < n->b; ++c) {
                    if (c) os << ", ";
                    os << static_cast<int>(n->bits[r * n->b + c]);
                }
                os << "]";
            }
            os << ")";
            break;
        }
        case NodeKind::Diag:
            print_call(os, "diag", {n->kids[0].get()});
            break;
        case NodeKind::ZOf:
            print_call(os, "zof", {n->kids[0].get()});
            break;
        case NodeKind::RowDiag:
        case NodeKind::TransDiag:
            os << (n->kind == NodeKind::RowDiag ? "rowdiag(" : "transdiag(");
            print_node(os, n->kids[0].get(), 0);
            os << ", " << print_perm(n->perm) << ")";
            break;
        case NodeKind::RowOf:
            os << "row(";
            print_node(os, n->kids[0].get(), 0);
            os << ", " << n->a << ")";
            break;
        case NodeKind::Interleave:
            print_call(os, "interleave", {n->kids[0].get(), n->kids[1].get()});
            break;
        case NodeKind::Prepend:
            print_call(os, "prepend", {n->kids[0].get(), n->kids[1].get()});
            break;
        case NodeKind::Dovetail:
            print_call(os, "dovetail", {n->kids[0].get()});
            break;
        case NodeKind::YRows:
            os << "yrows(";
            print_node(os, n->kids[0].get(), 0);
            os << ", "
               << (static_cast<DiagVariant>(n->a) == DiagVariant::Row
                       ? "row"
                       : "transversal")
               << ")";
            break;
        case NodeKind::TowerLevel:
            os << "tower(";
            print_node(os, n->kids[0].get(), 0);
            os << ", ";
            print_node(os, n->kids[1].get(), 0);
            os << ", " << n->a << ")";
            break;
        case NodeKind::XInfinity:
            print_call(os, "xinf", {n->kids[0].get(), n->kids[1].get()});
            break;
    }
}

std::string print_root(const Node* n) {
    std::ostringstream os;
    print_node(os, n, 0);
    return os.str();
}

}  // namespace

SeqTerm parse_seq(const std::string& text) {
    return SeqTerm(Parser(text).parse_all(SEQ_VARS));
}

EnumTerm parse_enum(const std::string& text) {
    return EnumTerm(Parser(text).parse_all(ENUM_VARS));
}

FamilyTerm parse_family(const std::string& text) {
    return FamilyTerm(Parser(text).parse_all(FAMILY_VARS));
}

std::string print_term(const SeqTerm& t) { return print_root(t.root().get()); }
std::string print_term(const EnumTerm& t) { return print_root(t.root().get()); }
std::string print_term(const FamilyTerm& t) { return print_root(t.root().get()); }

}  // namespace diaglab
