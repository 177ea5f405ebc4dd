// ============================================================================
// configuration.cpp — interval semantics: minimal models, Succ, Merge, F^k
// ============================================================================

#include "mitl/configuration.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mitl {

// ============================================================================
// Configuration
// ============================================================================

Configuration Configuration::normalize(std::vector<IState> sts) {
    std::sort(sts.begin(), sts.end());
    sts.erase(std::unique(sts.begin(), sts.end()), sts.end());
    // Fuse overlapping (or touching) same-location intervals into their
    // convex hull; sorted order makes one left-to-right pass enough.
    std::vector<IState> out;
    for (const IState& s : sts) {
        if (!out.empty() && out.back().loc == s.loc && s.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, s.hi);
        } else {
            out.push_back(s);
        }
    }
    Configuration c;
    c.states = std::move(out);
    return c;
}

std::string Configuration::text(const Ocata& a) const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const IState& s : states) {
        if (!first) out << ", ";
        first = false;
        out << '(' << a.location_names[s.loc] << ",[" << tp_text(s.lo) << ',' << tp_text(s.hi)
            << "])";
    }
    out << '}';
    return out.str();
}

std::size_t nbclocks(const Configuration& c) {
    std::size_t n = 0;
    for (const IState& s : c.states) n += s.singular() ? 1 : 2;
    return n;
}

Configuration elapse(const Configuration& c, const TimePoint& t) {
    Configuration out = c;
    for (IState& s : out.states) {
        s.lo += t;
        s.hi += t;
    }
    return out;
}

// ============================================================================
// Minimal models
// ============================================================================

bool guard_holds(const std::vector<ClockConstraint>& guard, const TimePoint& lo,
                 const TimePoint& hi) {
    auto sat = [](const ClockConstraint& c, const TimePoint& v) {
        TimePoint b(static_cast<long long>(c.bound));
        switch (c.op) {
            case ClockConstraint::LT: return v < b;
            case ClockConstraint::LE: return v <= b;
            case ClockConstraint::GT: return v > b;
            case ClockConstraint::GE: return v >= b;
        }
        return false;
    };
    // Guards are convex, so the endpoint check covers the whole interval.
    for (const auto& c : guard)
        if (!sat(c, lo) || !sat(c, hi)) return false;
    return true;
}

std::vector<Configuration> minimal_models(const Ocata& a, const IState& s, int letter) {
    std::vector<Configuration> candidates;
    for (const Arc& arc : a.arcs(s.loc, letter)) {
        if (arc.verdict == Arc::Reject) continue;
        if (!guard_holds(arc.guard, s.lo, s.hi)) continue;
        std::vector<IState> sts;
        for (LocationId l : arc.targets_keep) sts.push_back({l, s.lo, s.hi});
        for (LocationId l : arc.targets_reset) sts.push_back({l, TimePoint(0), TimePoint(0)});
        candidates.push_back(Configuration::normalize(std::move(sts)));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Keep the subset-minimal ones ("no M' strictly inside M").
    auto contains = [](const Configuration& big, const Configuration& small) {
        return std::includes(big.states.begin(), big.states.end(), small.states.begin(),
                             small.states.end());
    };
    std::vector<Configuration> out;
    for (const auto& m : candidates) {
        bool minimal = true;
        for (const auto& m2 : candidates) {
            if (m2 == m) continue;
            if (contains(m, m2)) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(m);
    }
    return out;
}

// ============================================================================
// Succ
// ============================================================================

std::vector<SuccChoice> succ_choices(const Ocata& a, const Configuration& c, int letter) {
    std::vector<std::vector<Configuration>> options;
    for (const IState& s : c.states) {
        options.push_back(minimal_models(a, s, letter));
        if (options.back().empty()) return {};  // blocked state
    }

    std::vector<SuccChoice> out;
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
        SuccChoice ch;
        std::vector<IState> all;
        for (std::size_t i = 0; i < options.size(); ++i) {
            const Configuration& m = options[i][pick[i]];
            ch.models.push_back(m);
            all.insert(all.end(), m.states.begin(), m.states.end());
        }
        ch.result = Configuration::normalize(std::move(all));
        out.push_back(std::move(ch));

        std::size_t i = 0;
        for (; i < options.size(); ++i) {
            if (++pick[i] < options[i].size()) break;
            pick[i] = 0;
        }
        if (i == options.size()) break;
    }
    return out;
}

std::vector<Configuration> succ(const Ocata& a, const Configuration& c, int letter) {
    std::vector<Configuration> out;
    for (const SuccChoice& ch : succ_choices(a, c, letter)) out.push_back(ch.result);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ============================================================================
// Merge and F^k
// ============================================================================

std::vector<IState> merge(const std::vector<IState>& states) {
    if (states.size() < 2) return states;
    const IState& first = states[0];
    if (!(first.lo == TimePoint(0) && first.hi == TimePoint(0))) return states;
    std::vector<IState> out;
    out.push_back({first.loc, TimePoint(0), states[1].hi});
    out.insert(out.end(), states.begin() + 2, states.end());
    return out;
}

std::vector<Configuration> approx_fk(const Configuration& c, std::size_t k) {
    // Group states per location, in canonical location order.
    std::map<LocationId, std::vector<IState>> per_loc;
    for (const IState& s : c.states) per_loc[s.loc].push_back(s);

    std::vector<std::vector<std::vector<IState>>> choices;  // per loc: 1 or 2 variants
    for (const auto& [loc, sts] : per_loc) {
        std::vector<std::vector<IState>> v{sts};
        std::vector<IState> merged = merge(sts);
        if (merged != sts) v.push_back(std::move(merged));
        choices.push_back(std::move(v));
    }

    std::vector<Configuration> out;
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
        std::vector<IState> all;
        for (std::size_t i = 0; i < choices.size(); ++i)
            all.insert(all.end(), choices[i][pick[i]].begin(), choices[i][pick[i]].end());
        Configuration cand = Configuration::normalize(std::move(all));
        if (nbclocks(cand) <= k) out.push_back(std::move(cand));

        if (choices.empty()) break;
        std::size_t i = 0;
        for (; i < choices.size(); ++i) {
            if (++pick[i] < choices[i].size()) break;
            pick[i] = 0;
        }
        if (i == choices.size()) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());

    if (out.empty()) {
        // Fallback: one hull interval per location.
        std::vector<IState> all;
        for (const auto& [loc, sts] : per_loc)
            all.push_back({loc, sts.front().lo, sts.back().hi});
        out.push_back(Configuration::normalize(std::move(all)));
    }
    return out;
}

std::size_t fstar_k(const Formula& f) {
    Formula n = to_nnf(f);
    Ocata a = compile(n);
    return std::max<std::size_t>(2 * a.num_locations(), m_bounds(n).m);
}

std::vector<LocationId> sub_ltl(const Ocata& a) {
    std::vector<LocationId> out;
    for (std::size_t l = 0; l < a.num_locations(); ++l) {
        if (a.location_is_init[l]) {
            out.push_back(static_cast<LocationId>(l));
            continue;
        }
        if (!a.location_formula[l].has_value()) continue;
        const Formula& f = *a.location_formula[l];
        if (f.kind() != FKind::Until && f.kind() != FKind::Release) continue;
        const FormulaInterval& I = f.interval();
        if (I.lo() == 0 && I.lo_closed() && I.hi().is_infinite())
            out.push_back(static_cast<LocationId>(l));
    }
    return out;
}

ReducedConfiguration reduce(const Configuration& c, const std::vector<LocationId>& ltl) {
    ReducedConfiguration out;
    std::vector<IState> timed;
    for (const IState& s : c.states) {
        if (std::binary_search(ltl.begin(), ltl.end(), s.loc))
            out.ltl_set.push_back(s.loc);
        else
            timed.push_back(s);
    }
    std::sort(out.ltl_set.begin(), out.ltl_set.end());
    out.ltl_set.erase(std::unique(out.ltl_set.begin(), out.ltl_set.end()), out.ltl_set.end());
    out.timed = Configuration::normalize(std::move(timed));
    return out;
}

}  // namespace mitl
