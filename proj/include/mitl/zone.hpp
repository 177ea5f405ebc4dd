#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mitl/dbm.hpp"
#include "mitl/product.hpp"

namespace mitl {

// ============================================================================
// Zones
// ============================================================================
//
// A zone holds an assignment of clock-copy pairs to OCATA locations (with
// Miyano-Hayashi markers), the TA location and marker, and a DBM over
// x0, the TA clocks, and the active copy pairs.  Pair i owns the clocks at
// indices 1+n_ta+2i (infimum) and 1+n_ta+2i+1 (supremum).  The flat pair
// list is canonical: grouped by location id, newest (smallest interval)
// first within a location.

struct Zone {
    std::vector<std::pair<LocationId, bool>> pairs;  // (location, marker)
    std::vector<std::pair<LocationId, bool>> ltl;    // reduced presence bits, sorted
    int ta_loc = 0;
    bool ta_marked = true;
    Dbm dbm;
};

class ZoneEngine {
public:
    // Validates that every arc keeps at most its own source location (the
    // shape the translation produces); other OCATA are not supported here.
    ZoneEngine(const Ocata& a, const BuchiTA& b, std::size_t K, Reduction red,
               bool subsumption = true);

    using State = Zone;

    Zone initial() const;

    // The classical up operation: future closure of the zone.
    Zone post_time(const Zone& z) const;

    // All discrete successors over every letter: per-member arc choices, a
    // TA edge, and per-target-location fresh-pair / merge reset choices.
    std::vector<Zone> post_discrete(const Zone& z) const;

    // Max-constant extrapolation.
    Zone extrapolate(Zone z) const;

    // Space interface.
    std::vector<Zone> post(const Zone& z) const;
    bool accepting(const Zone& z) const;
    std::string key(const Zone& z) const;
    std::string disc_key(const Zone& z) const;
    // z1 covers z2: identical discrete parts and dbm(z2) included in dbm(z1).
    bool subsumes(const Zone& z1, const Zone& z2) const;
    bool use_subsumption() const { return subsumption_; }

    std::string dump(const Zone& z) const;
    std::uint64_t cmax() const { return cmax_; }
    int pair_capacity() const { return capacity_; }
    std::size_t max_clocks_seen() const { return max_clocks_; }
    std::vector<int> active_clocks(const Zone& z) const;

    // Builds the point zone of a marked state (used by differential tests);
    // the inverse direction requires every active clock to be pinned.
    Zone zone_of_marked(const MarkedState& s) const;
    std::optional<MarkedState> marked_of_point_zone(const Zone& z) const;

private:
    struct Member {
        bool is_pair;
        int pair_idx;  // -1 for presence members
        LocationId loc;
        bool marked;  // post-flip marker
    };

    void emit_successors(const Zone& z, const Dbm& base, const std::vector<Member>& members,
                         const std::vector<bool>& loops,
                         const std::map<LocationId, bool>& reset_unmarked,
                         const std::vector<const TaEdge*>& ta_edges, bool ta_marked0,
                         std::vector<Zone>& out) const;

    int xclock(int pair) const { return 1 + nta_ + 2 * pair; }
    int yclock(int pair) const { return xclock(pair) + 1; }

    mutable std::size_t max_clocks_ = 0;

    const Ocata& a_;
    const BuchiTA& b_;
    std::size_t K_;
    Reduction red_;
    bool subsumption_;
    std::uint64_t cmax_;
    int nta_;
    int capacity_;  // max simultaneous pairs, floor(K/2)
    int nclocks_;   // 1 + nta + 2*capacity
};

}  // namespace mitl
