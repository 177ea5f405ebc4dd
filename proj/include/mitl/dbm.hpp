#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mitl/ocata.hpp"

namespace mitl {

// ============================================================================
// Difference bound matrices
// ============================================================================

// Bound of x_i - x_j: a value with strictness, or infinity.
struct DbmEntry {
    std::int64_t bound;
    bool strict;

    static DbmEntry inf() { return {kInf, true}; }
    static DbmEntry le(std::int64_t b) { return {b, false}; }
    static DbmEntry lt(std::int64_t b) { return {b, true}; }
    bool is_inf() const { return bound == kInf; }

    bool operator==(const DbmEntry&) const = default;
    static constexpr std::int64_t kInf = INT64_MAX;
};

inline bool entry_lt(const DbmEntry& a, const DbmEntry& b) {
    if (a.is_inf()) return false;
    if (b.is_inf()) return true;
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.strict && !b.strict;
}

inline DbmEntry entry_add(const DbmEntry& a, const DbmEntry& b) {
    if (a.is_inf() || b.is_inf()) return DbmEntry::inf();
    return {a.bound + b.bound, a.strict || b.strict};
}

// Canonical-form DBM over clocks 0..n-1, clock 0 being the constant-zero
// reference.  at(i,j) bounds x_i - x_j.
class Dbm {
public:
    Dbm() = default;
    explicit Dbm(int n);

    // All clocks equal to zero.
    static Dbm zero(int n);

    int size() const { return n_; }
    DbmEntry& at(int i, int j) { return m_[static_cast<std::size_t>(i) * n_ + j]; }
    const DbmEntry& at(int i, int j) const { return m_[static_cast<std::size_t>(i) * n_ + j]; }

    // Floyd-Warshall closure over the given clocks (plus 0); returns false
    // if the constraint set is empty.
    bool canonicalize(const std::vector<int>& active);
    bool canonicalize();

    // x_i ~ c for a clock constraint; call canonicalize afterwards.
    void constrain(int i, ClockConstraint::Op op, std::uint64_t bound);
    // x_i - x_j <= / < c
    void constrain_diff(int i, int j, DbmEntry e);

    // Remove the upper bounds x_i < c (time elapse); stays canonical.
    void up(const std::vector<int>& active);

    // x_i := 0 on a canonical DBM; stays canonical.
    void reset(int i, const std::vector<int>& active);

    // Forget every constraint on clock i.
    void free(int i);

    // Classical max-constant extrapolation; re-canonicalize afterwards.
    void extrapolate(std::uint64_t cmax, const std::vector<int>& active);

    // Inclusion over the given clocks (both canonical).
    bool subset_of(const Dbm& other, const std::vector<int>& active) const;

    bool equal_on(const Dbm& other, const std::vector<int>& active) const;

    std::string text(const std::vector<std::string>& names) const;

private:
    int n_ = 0;
    std::vector<DbmEntry> m_;
};

}  // namespace mitl
