#pragma once

#include <set>
#include <string>
#include <vector>

#include "mitl/ocata.hpp"
#include "mitl/timepoint.hpp"

namespace mitl {

// ============================================================================
// Interval-valued states and configurations
// ============================================================================

// A state (l, [lo,hi]).  Configuration intervals are always closed;
// lo == hi encodes the punctual value.
struct IState {
    LocationId loc;
    TimePoint lo;
    TimePoint hi;

    bool singular() const { return lo == hi; }
    bool operator==(const IState& o) const { return loc == o.loc && lo == o.lo && hi == o.hi; }
    bool operator<(const IState& o) const {
        if (loc != o.loc) return loc < o.loc;
        if (lo != o.lo) return lo < o.lo;
        return hi < o.hi;
    }
};

// Sorted set of states; intervals attached to a same location are pairwise
// disjoint (canonicalized on construction by fusing overlaps into hulls).
struct Configuration {
    std::vector<IState> states;

    Configuration() = default;
    // Sorts, deduplicates and fuses overlapping same-location intervals.
    static Configuration normalize(std::vector<IState> sts);

    bool empty() const { return states.empty(); }
    bool operator==(const Configuration& o) const { return states == o.states; }
    bool operator<(const Configuration& o) const { return states < o.states; }
    std::string text(const Ocata& a) const;
};

struct ReducedConfiguration {
    std::vector<LocationId> ltl_set;  // sorted
    Configuration timed;
};

// ============================================================================
// Operations
// ============================================================================

// Clocks needed: 1 per singular interval, 2 per non-singular one.
std::size_t nbclocks(const Configuration& c);

Configuration elapse(const Configuration& c, const TimePoint& t);

// Whether every value of [lo,hi] satisfies the (convex) guard.
bool guard_holds(const std::vector<ClockConstraint>& guard, const TimePoint& lo,
                 const TimePoint& hi);

// Minimal models of delta(s.loc, letter) wrt s's interval: one candidate per
// firable arc, filtered to the subset-minimal ones.  Empty result = the
// state blocks.
std::vector<Configuration> minimal_models(const Ocata& a, const IState& s, int letter);

// One minimal-model choice per state of c; `models[i]` is the model chosen
// for c.states[i].
struct SuccChoice {
    Configuration result;                // union of the models, normalized
    std::vector<Configuration> models;   // parallel to c.states
};

// All ways to fire one arc per state.  Empty when some state blocks.
std::vector<SuccChoice> succ_choices(const Ocata& a, const Configuration& c, int letter);

// The configurations reachable by a discrete step, canonically sorted.
std::vector<Configuration> succ(const Ocata& a, const Configuration& c, int letter);

// Merge on one location's sorted interval list: groups a leading [0,0] with
// the following interval; identity otherwise (including the lone-[0,0]
// case).
std::vector<IState> merge(const std::vector<IState>& states);

// F^k: all configurations with <= k clocks obtained by applying-or-not
// Merge per location; falls back to the single hull-per-location
// configuration when no combination fits.
std::vector<Configuration> approx_fk(const Configuration& c, std::size_t k);

// K = max(2 * |L|, M(phi)) for the automaton compiled from to_nnf(f).
std::size_t fstar_k(const Formula& f);

// Locations of a compiled automaton whose clock value never matters: the
// initial location plus U/R modalities over [0,inf).
std::vector<LocationId> sub_ltl(const Ocata& a);

ReducedConfiguration reduce(const Configuration& c, const std::vector<LocationId>& ltl);

}  // namespace mitl
