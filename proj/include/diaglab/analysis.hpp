#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diaglab/term.hpp"

namespace diaglab {

// Normal form of an eventually periodic sequence: per has minimal length
// and pre is shortest (its last bit differs from the periodic continuation).
struct EventuallyPeriodic {
    std::vector<uint8_t> pre;
    std::vector<uint8_t> per;  // nonempty

    int at(uint64_t i) const {
        if (i < pre.size()) return pre[i];
        return per[(i - pre.size()) % per.size()];
    }
    friend bool operator==(const EventuallyPeriodic&,
                           const EventuallyPeriodic&) = default;
};

// Unique normal form: minimal period via the border (failure function)
// method, then maximal preperiod absorption.
EventuallyPeriodic ep_normalize(std::vector<uint8_t> pre,
                                std::vector<uint8_t> per);

// Exact normal form for terms in the certified eventually-periodic
// subclass; refuses (conservatively) everything else.
EventuallyPeriodic ep_of_term(const SeqTerm& s);
std::optional<EventuallyPeriodic> try_ep_of_term(const SeqTerm& s);

// Decidable equality of the denoted infinite sequences.
bool ep_equal(const EventuallyPeriodic& a, const EventuallyPeriodic& b);

enum class WitnessKind { Disagreement, ProvenEqual, Unknown };

// Finite-prefix evidence about one row. proven_equal only ever comes from
// an EP certificate, never from prefix agreement.
struct Witness {
    WitnessKind kind = WitnessKind::Unknown;
    uint64_t row = 0;
    std::optional<uint64_t> position;
    uint64_t horizon = 0;
};

// Least i < horizon with s(i) != t(i). Absence means unknown, not equality.
std::optional<uint64_t> find_disagreement(const SeqTerm& s, const SeqTerm& t,
                                          uint64_t horizon);

// One witness per row k < rows: Disagreement when found within the horizon,
// Unknown otherwise.
std::vector<Witness> verify_escape(const EnumTerm& e, const SeqTerm& y,
                                   uint64_t rows, uint64_t horizon);

// Three-valued scan for the coincidence s = row(e, k). Rows where both
// sides have EP certificates get a definite verdict.
std::vector<Witness> membership_scan(const SeqTerm& s, const EnumTerm& e,
                                     uint64_t rows, uint64_t horizon);

std::string witness_kind_name(WitnessKind k);

// CSV lines "row,kind,position,horizon"; position empty when absent.
std::string witnesses_to_csv(const std::vector<Witness>& ws,
                             bool header = false);

}  // namespace diaglab
