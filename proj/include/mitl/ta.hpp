#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mitl/ocata.hpp"
#include "mitl/timepoint.hpp"

namespace mitl {

struct TaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ============================================================================
// Büchi timed automata
// ============================================================================

struct TaConstraint {
    int clock;  // index into BuchiTA::clocks
    ClockConstraint::Op op;
    std::uint64_t bound;

    bool operator==(const TaConstraint&) const = default;
};

struct TaEdge {
    int from;
    int to;
    int letter;
    std::vector<TaConstraint> guard;  // conjunction
    std::vector<int> resets;          // sorted clock indices

    bool operator==(const TaEdge&) const = default;
};

struct BuchiTA {
    std::vector<std::string> alphabet;  // sorted
    std::vector<std::string> clocks;
    std::vector<std::string> locations;
    int initial = 0;
    std::vector<bool> accepting;
    std::vector<TaEdge> edges;
    std::uint64_t cmax = 0;

    int letter_index(const std::string& s) const;
    int location_index(const std::string& s) const;
    int clock_index(const std::string& s) const;
    // Edges leaving `loc` labelled `letter`, in declaration order.
    std::vector<const TaEdge*> edges_from(int loc, int letter) const;
    std::size_t num_locations() const { return locations.size(); }
};

// A concrete TA state in the explicit semantics.
struct TAState {
    int loc = 0;
    std::vector<TimePoint> vals;  // one per clock

    bool operator==(const TAState&) const = default;
    bool operator<(const TAState& o) const {
        if (loc != o.loc) return loc < o.loc;
        return vals < o.vals;
    }
};

bool ta_guard_holds(const std::vector<TaConstraint>& guard, const std::vector<TimePoint>& vals);

// ============================================================================
// File format (JSON)
// ============================================================================
//
// { "alphabet": [...], "clocks": [...],
//   "locations": [{"name":..., "accepting":...}, ...],
//   "initial": "...",
//   "edges": [{"from":..., "to":..., "letter":...,
//              "guard": ["x>=1","x<=2"], "reset": ["x"]}, ...] }
//
// Guard atoms use <, <=, >, >=, =; "=" expands to the two weak inequalities.

BuchiTA parse_ta(const std::string& json_text);
BuchiTA load_ta_file(const std::string& path);
std::string ta_to_json(const BuchiTA& b);

// ============================================================================
// Model generators
// ============================================================================

// One accepting location, no clocks, a self-loop per letter.  Used to turn
// satisfiability into the same product emptiness as model checking.
BuchiTA universal_ta(const std::vector<std::string>& alphabet);

// The k-floor lift model.  Letters per floor i: l_i (called at the floor),
// b_i (cabin button), o_i (doors open), c_i (doors close), p_i (passes
// without stopping).  k = 2 reproduces the reference automaton exactly;
// larger k extrapolates the same rules (see tools/lift_model.md).
BuchiTA lift_model(int floors);

}  // namespace mitl
