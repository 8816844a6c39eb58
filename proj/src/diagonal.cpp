#include "diaglab/diagonal.hpp"

#include "diaglab/error.hpp"

namespace diaglab {

namespace {
using detail::make_node;
}

SeqTerm diag_classical(const EnumTerm& e) {
    Node n;
    n.kind = NodeKind::Diag;
    n.kids = {e.root()};
    return SeqTerm(make_node(std::move(n)));
}

SeqTerm diag_perm_row(const EnumTerm& e, const FiniteSupportPerm& p) {
    Node n;
    n.kind = NodeKind::RowDiag;
    n.perm = p;
    n.kids = {e.root()};
    return SeqTerm(make_node(std::move(n)));
}

SeqTerm diag_perm_transversal(const EnumTerm& e, const FiniteSupportPerm& p) {
    Node n;
    n.kind = NodeKind::TransDiag;
    n.perm = p;
    n.kids = {e.root()};
    return SeqTerm(make_node(std::move(n)));
}

EnumTerm build_y(const EnumTerm& e, DiagVariant variant) {
    Node n;
    n.kind = NodeKind::YRows;
    n.a = static_cast<uint64_t>(variant);
    n.kids = {e.root()};
    return EnumTerm(make_node(std::move(n)));
}

SeqTerm z_direct(const EnumTerm& e) {
    Node n;
    n.kind = NodeKind::ZOf;
    n.kids = {e.root()};
    return SeqTerm(make_node(std::move(n)));
}

namespace {

EnumTerm tower_level_term(const EnumTerm& x, const EnumTerm& y, uint64_t n,
                          std::shared_ptr<WMemo> memo) {
    Node node;
    node.kind = NodeKind::TowerLevel;
    node.a = n;
    node.kids = {x.root(), y.root()};
    node.memo = std::move(memo);
    return EnumTerm(make_node(std::move(node)));
}

}  // namespace

TowerLevel tower(const EnumTerm& x, const EnumTerm& y, uint64_t n) {
    if (n == 0) throw DomainError("tower level must be >= 1");
    auto memo = std::make_shared<WMemo>();
    EnumTerm x_n = tower_level_term(x, y, n, memo);
    return TowerLevel{n, x_n, diag_classical(x_n)};
}

EnumTerm x_infinity(const EnumTerm& x, const EnumTerm& y) {
    Node node;
    node.kind = NodeKind::XInfinity;
    node.kids = {x.root(), y.root()};
    node.memo = std::make_shared<WMemo>();
    return EnumTerm(make_node(std::move(node)));
}

}  // namespace diaglab
