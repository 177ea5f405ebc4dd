#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mitl/configuration.hpp"
#include "mitl/ta.hpp"

namespace mitl {

// ============================================================================
// Marked product states
// ============================================================================

struct MarkedOState {
    LocationId loc;
    TimePoint lo;
    TimePoint hi;
    bool marked;  // Miyano-Hayashi marker

    bool operator==(const MarkedOState&) const = default;
    bool operator<(const MarkedOState& o) const {
        if (loc != o.loc) return loc < o.loc;
        if (lo != o.lo) return lo < o.lo;
        if (hi != o.hi) return hi < o.hi;
        return marked < o.marked;
    }
};

// A state of the product transition system: a marked OCATA configuration
// plus the TA state and its marker.
struct MarkedState {
    std::vector<MarkedOState> ocata;  // sorted canonically
    TAState ta;
    bool ta_marked = true;

    bool operator==(const MarkedState&) const = default;
    bool operator<(const MarkedState& o) const {
        if (ocata != o.ocata) return ocata < o.ocata;
        if (!(ta == o.ta)) return ta < o.ta;
        return ta_marked < o.ta_marked;
    }

    Configuration configuration() const;
    std::string text(const Ocata& a, const BuchiTA& b) const;
};

// Reduced-configuration mode: clock data of these locations is dropped
// (their interval is pinned to [0,0] as a presence marker).
struct Reduction {
    bool enabled = false;
    std::vector<bool> is_ltl;  // per OCATA location

    static Reduction none() { return {}; }
    static Reduction over(const Ocata& a);
    bool ltl(LocationId l) const { return enabled && is_ltl[l]; }
};

// ============================================================================
// Product operations
// ============================================================================

MarkedState initial_marked(const Ocata& a, const BuchiTA& b);

MarkedState elapse_marked(const MarkedState& s, const TimePoint& t);

// All markers T, including the TA one.
bool is_alpha(const MarkedState& s);

// Per-successor bookkeeping for branch-level tests: ocata_edges lists
// (source index in the pre-step state, successor index) pairs of the run
// DAG.
struct MarkedSucc {
    MarkedState state;
    std::vector<std::pair<int, int>> ocata_edges;
};

// The discrete successors of s under `letter`, applying the F^K
// approximation (restricted to the timed part when reduced).  Markers follow
// the breakpoint rules: an accepting state first flips every marker, targets
// in F are forced marked, and an unmarked source propagates to each
// successor its models reach.
std::vector<MarkedSucc> discrete_marked_traced(const Ocata& a, const BuchiTA& b,
                                               const MarkedState& s, int letter, std::size_t K,
                                               const Reduction& red = Reduction::none());

std::vector<MarkedState> discrete_marked(const Ocata& a, const BuchiTA& b, const MarkedState& s,
                                         int letter, std::size_t K,
                                         const Reduction& red = Reduction::none());

// Normalizes the intervals of reduced locations to [0,0].
MarkedState reduce_state(const MarkedState& s, const Reduction& red);

}  // namespace mitl
