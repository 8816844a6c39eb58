#pragma once

#include "diaglab/enumerate.hpp"
#include "diaglab/perm.hpp"
#include "diaglab/term.hpp"

namespace diaglab {

// result(i) = 1 - e(i, i).
SeqTerm diag_classical(const EnumTerm& e);

// result(i) = 1 - e(i, p(i)). Escape from the rows of e is NOT guaranteed
// for this variant; see diag_perm_transversal.
SeqTerm diag_perm_row(const EnumTerm& e, const FiniteSupportPerm& p);

// result(p(i)) = 1 - e(i, p(i)), i.e. result(j) = 1 - e(p^-1(j), j).
// Differs from row i at position p(i), for every i.
SeqTerm diag_perm_transversal(const EnumTerm& e, const FiniteSupportPerm& p);

// result(k, i) = diag_perm_<variant>(e, unrank_perm(k))(i).
EnumTerm build_y(const EnumTerm& e, DiagVariant variant);

// result(i) = e(i, unrank_perm(i)(i)); pointwise equal to
// diag_classical(build_y(e, Row)).
SeqTerm z_direct(const EnumTerm& e);

struct TowerLevel {
    uint64_t n;     // level index >= 1
    EnumTerm x_n;   // level 1: interleave(x, y); level n+1: prepend(w_n, x_n)
    SeqTerm w_n;    // diag_classical(x_n)
};

TowerLevel tower(const EnumTerm& x, const EnumTerm& y, uint64_t n);

// result(2t, i) = w_{t+1}(i); result(2t+1, i) = x_1(t, i).
EnumTerm x_infinity(const EnumTerm& x, const EnumTerm& y);

}  // namespace diaglab
