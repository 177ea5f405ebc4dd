// ============================================================================
// dbm.cpp — canonical difference bound matrices
// ============================================================================

#include "mitl/dbm.hpp"

#include <numeric>
#include <sstream>

namespace mitl {

Dbm::Dbm(int n) : n_(n), m_(static_cast<std::size_t>(n) * n, DbmEntry::inf()) {
    for (int i = 0; i < n; ++i) at(i, i) = DbmEntry::le(0);
    // clocks are nonnegative: x0 - xi <= 0
    for (int i = 1; i < n; ++i) at(0, i) = DbmEntry::le(0);
}

Dbm Dbm::zero(int n) {
    Dbm d(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.at(i, j) = DbmEntry::le(0);
    return d;
}

bool Dbm::canonicalize(const std::vector<int>& active) {
    std::vector<int> cs;
    cs.push_back(0);
    cs.insert(cs.end(), active.begin(), active.end());
    for (int k : cs) {
        for (int i : cs) {
            if (at(i, k).is_inf()) continue;
            for (int j : cs) {
                DbmEntry via = entry_add(at(i, k), at(k, j));
                if (entry_lt(via, at(i, j))) at(i, j) = via;
            }
        }
    }
    for (int i : cs)
        if (entry_lt(at(i, i), DbmEntry::le(0))) return false;
    return true;
}

bool Dbm::canonicalize() {
    std::vector<int> all(n_ > 0 ? n_ - 1 : 0);
    std::iota(all.begin(), all.end(), 1);
    return canonicalize(all);
}

void Dbm::constrain(int i, ClockConstraint::Op op, std::uint64_t bound) {
    auto b = static_cast<std::int64_t>(bound);
    switch (op) {
        case ClockConstraint::LT: constrain_diff(i, 0, DbmEntry::lt(b)); break;
        case ClockConstraint::LE: constrain_diff(i, 0, DbmEntry::le(b)); break;
        case ClockConstraint::GT: constrain_diff(0, i, DbmEntry::lt(-b)); break;
        case ClockConstraint::GE: constrain_diff(0, i, DbmEntry::le(-b)); break;
    }
}

void Dbm::constrain_diff(int i, int j, DbmEntry e) {
    if (entry_lt(e, at(i, j))) at(i, j) = e;
}

void Dbm::up(const std::vector<int>& active) {
    for (int i : active) at(i, 0) = DbmEntry::inf();
}

void Dbm::reset(int i, const std::vector<int>& active) {
    at(i, 0) = DbmEntry::le(0);
    at(0, i) = DbmEntry::le(0);
    for (int j : active) {
        if (j == i) continue;
        at(i, j) = at(0, j);
        at(j, i) = at(j, 0);
    }
}

void Dbm::free(int i) {
    for (int j = 0; j < n_; ++j) {
        at(i, j) = DbmEntry::inf();
        at(j, i) = DbmEntry::inf();
    }
    at(i, i) = DbmEntry::le(0);
}

void Dbm::extrapolate(std::uint64_t cmax, const std::vector<int>& active) {
    auto c = static_cast<std::int64_t>(cmax);
    std::vector<int> cs;
    cs.push_back(0);
    cs.insert(cs.end(), active.begin(), active.end());
    for (int i : cs) {
        for (int j : cs) {
            if (i == j) continue;
            DbmEntry& e = at(i, j);
            if (e.is_inf()) continue;
            if (e.bound > c)
                e = DbmEntry::inf();
            else if (e.bound < -c)
                e = DbmEntry::lt(-c);
        }
    }
    canonicalize(active);
}

bool Dbm::subset_of(const Dbm& other, const std::vector<int>& active) const {
    std::vector<int> cs;
    cs.push_back(0);
    cs.insert(cs.end(), active.begin(), active.end());
    for (int i : cs)
        for (int j : cs)
            if (entry_lt(other.at(i, j), at(i, j))) return false;
    return true;
}

bool Dbm::equal_on(const Dbm& other, const std::vector<int>& active) const {
    std::vector<int> cs;
    cs.push_back(0);
    cs.insert(cs.end(), active.begin(), active.end());
    for (int i : cs)
        for (int j : cs)
            if (!(at(i, j) == other.at(i, j))) return false;
    return true;
}

std::string Dbm::text(const std::vector<std::string>& names) const {
    std::ostringstream out;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            const DbmEntry& e = at(i, j);
            if (e.is_inf()) continue;
            out << names[i] << " - " << names[j] << (e.strict ? " < " : " <= ") << e.bound
                << "\n";
        }
    }
    return out.str();
}

}  // namespace mitl
