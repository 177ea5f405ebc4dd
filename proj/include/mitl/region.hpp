#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mitl/product.hpp"

namespace mitl {

// ============================================================================
// Regions and region words
// ============================================================================
//
// Region codes for a maximal constant c: 2k encodes the point {k}
// (0 <= k <= c), 2k+1 the open interval (k,k+1) (k < c), and 2c+1 the
// unbounded region (c,inf).

int region_of(const TimePoint& v, std::uint64_t cmax);
std::string region_text(int code, std::uint64_t cmax);

struct RegionTuple {
    bool is_ta;  // TA-clock tuple vs OCATA interval-endpoint tuple
    int loc;     // OCATA location or TA location
    int region;
    bool marked;
    int index;  // interval index within the location / TA clock index (1-based)

    bool operator==(const RegionTuple&) const = default;
    bool operator<(const RegionTuple& o) const {
        return std::tie(is_ta, loc, index, region, marked) <
               std::tie(o.is_ta, o.loc, o.index, o.region, o.marked);
    }
};

using RegionLetter = std::vector<RegionTuple>;  // sorted, deduplicated

struct RegionWord {
    std::vector<RegionLetter> letters;  // ascending fractional parts

    bool operator==(const RegionWord&) const = default;
    bool operator<(const RegionWord& o) const { return letters < o.letters; }
};

// A quotient state of the product: the word plus the clock-free components
// (the TA location/marker is also carried by its clock tuples when the TA
// has clocks, but not otherwise).
struct RegionState {
    RegionWord word;
    int ta_loc = 0;
    bool ta_marked = true;
    std::vector<std::pair<LocationId, bool>> ltl;  // reduced presence bits, sorted

    bool operator==(const RegionState&) const = default;
    bool operator<(const RegionState& o) const {
        return std::tie(word, ta_loc, ta_marked, ltl) <
               std::tie(o.word, o.ta_loc, o.ta_marked, o.ltl);
    }
};

// ============================================================================
// Encode / decode
// ============================================================================

// The canonical word of a state: interval endpoints and TA clocks become
// tuples, grouped by fractional part (values above cmax count as fractional
// part 0), each value replaced by its region.
RegionState encode(const MarkedState& s, std::uint64_t cmax,
                   const Reduction& red = Reduction::none());

// A canonical representative: integral letters take fractional part 0, the
// remaining letters strictly increasing fractions j/(m+1).
// Throws FormulaError on malformed words.
MarkedState decode(const RegionState& s, const BuchiTA& b, std::uint64_t cmax,
                   const Reduction& red = Reduction::none());

// The proper time-successor chain of w, up to the all-(cmax,inf) word
// (w itself excluded).
std::vector<RegionWord> time_successors(const RegionWord& w, std::uint64_t cmax);

// Debug dump mirroring the set-of-tuples notation.
std::string region_word_text(const RegionWord& w, const Ocata& a, const BuchiTA& b,
                             std::uint64_t cmax);

// ============================================================================
// The region engine
// ============================================================================

class RegionEngine {
public:
    RegionEngine(const Ocata& a, const BuchiTA& b, std::size_t K, Reduction red);

    using State = RegionState;
    State initial() const;
    // Discrete successors over every letter from the time-successor closure.
    std::vector<State> post(const State& s) const;
    bool accepting(const State& s) const;
    std::string key(const State& s) const;
    std::string disc_key(const State& s) const { return key(s); }
    bool subsumes(const State&, const State&) const { return false; }
    bool use_subsumption() const { return false; }

    std::uint64_t cmax() const { return cmax_; }
    const Reduction& reduction() const { return red_; }
    // Largest clock-copy count of any timed configuration this engine
    // decoded while exploring.
    std::size_t max_clocks_seen() const { return max_clocks_; }

private:
    mutable std::size_t max_clocks_ = 0;
    const Ocata& a_;
    const BuchiTA& b_;
    std::size_t K_;
    Reduction red_;
    std::uint64_t cmax_;
};

// Per-letter discrete post over a set of words, per the quotient definition;
// the engine's post() composes this with the time closure internally.
std::vector<RegionState> region_post(const RegionEngine& engine, const Ocata& a,
                                     const BuchiTA& b, const std::vector<RegionState>& states);

}  // namespace mitl
