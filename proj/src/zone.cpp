// ============================================================================
// zone.cpp — zone engine: DBMs over clock copies, Post_T / Post_D, markers
// ============================================================================

#include "mitl/zone.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mitl {

// ============================================================================
// Construction
// ============================================================================

ZoneEngine::ZoneEngine(const Ocata& a, const BuchiTA& b, std::size_t K, Reduction red,
                       bool subsumption)
    : a_(a),
      b_(b),
      K_(K),
      red_(std::move(red)),
      subsumption_(subsumption),
      cmax_(std::max(a.cmax, b.cmax)),
      nta_(static_cast<int>(b.clocks.size())),
      capacity_(std::max<int>(1, static_cast<int>(K / 2))),
      nclocks_(1 + nta_ + 2 * capacity_) {
    if (a.alphabet != b.alphabet) throw FormulaError("product requires identical alphabets");
    for (std::size_t l = 0; l < a.num_locations(); ++l) {
        for (const auto& per_letter : a.delta) (void)per_letter;
        for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
            for (const Arc& arc : a.delta[l][s]) {
                for (LocationId k : arc.targets_keep)
                    if (k != static_cast<LocationId>(l))
                        throw FormulaError(
                            "zone engine requires arcs that keep at most their own location");
                if (red_.enabled && red_.is_ltl[l] && !arc.guard.empty())
                    throw FormulaError("reduced locations must have guard-free arcs");
            }
        }
    }
}

std::vector<int> ZoneEngine::active_clocks(const Zone& z) const {
    std::vector<int> out;
    for (int c = 1; c <= nta_; ++c) out.push_back(c);
    for (int i = 0; i < static_cast<int>(z.pairs.size()); ++i) {
        out.push_back(xclock(i));
        out.push_back(yclock(i));
    }
    return out;
}

Zone ZoneEngine::initial() const {
    Zone z;
    z.ta_loc = b_.initial;
    z.ta_marked = b_.accepting[b_.initial];
    if (red_.ltl(a_.initial))
        z.ltl.push_back({a_.initial, false});
    else
        z.pairs.push_back({a_.initial, false});
    z.dbm = Dbm(nclocks_);
    for (int c : active_clocks(z)) {
        z.dbm.at(c, 0) = DbmEntry::le(0);
        z.dbm.at(0, c) = DbmEntry::le(0);
    }
    z.dbm.canonicalize(active_clocks(z));
    return z;
}

// ============================================================================
// Time and extrapolation
// ============================================================================

Zone ZoneEngine::post_time(const Zone& z) const {
    Zone out = z;
    out.dbm.up(active_clocks(z));
    return out;
}

Zone ZoneEngine::extrapolate(Zone z) const {
    z.dbm.extrapolate(cmax_, active_clocks(z));
    return z;
}

// ============================================================================
// Discrete successors
// ============================================================================

std::vector<Zone> ZoneEngine::post_discrete(const Zone& z) const {
    const bool flip = accepting(z);
    const bool ta_marked0 = flip ? false : z.ta_marked;

    std::vector<Member> members;
    for (int i = 0; i < static_cast<int>(z.pairs.size()); ++i)
        members.push_back({true, i, z.pairs[i].first, flip ? false : z.pairs[i].second});
    for (const auto& [loc, marked] : z.ltl)
        members.push_back({false, -1, loc, flip ? false : marked});

    std::vector<Zone> out;
    const std::vector<int> active = active_clocks(z);

    for (std::size_t sigma = 0; sigma < a_.alphabet.size(); ++sigma) {
        std::vector<const TaEdge*> ta_edges;
        for (const TaEdge* e : b_.edges_from(z.ta_loc, static_cast<int>(sigma)))
            ta_edges.push_back(e);
        if (ta_edges.empty()) continue;

        // arc options per member (reject arcs are unfirable)
        std::vector<std::vector<const Arc*>> options;
        bool blocked = false;
        for (const Member& m : members) {
            std::vector<const Arc*> opts;
            for (const Arc& arc : a_.arcs(m.loc, static_cast<int>(sigma)))
                if (arc.verdict != Arc::Reject) opts.push_back(&arc);
            if (opts.empty()) {
                blocked = true;
                break;
            }
            options.push_back(std::move(opts));
        }
        if (blocked) continue;

        std::vector<std::size_t> pick(members.size(), 0);
        while (true) {
            // --- one arc combination ---
            Dbm base = z.dbm;
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (!members[i].is_pair) continue;
                const Arc* arc = options[i][pick[i]];
                for (const ClockConstraint& cc : arc->guard) {
                    base.constrain(xclock(members[i].pair_idx), cc.op, cc.bound);
                    base.constrain(yclock(members[i].pair_idx), cc.op, cc.bound);
                }
            }
            if (base.canonicalize(active)) {
                // loops, reset targets and their unmarked contributors
                std::vector<bool> loops(members.size());
                std::map<LocationId, bool> reset_unmarked;  // loc -> some unmarked source
                for (std::size_t i = 0; i < members.size(); ++i) {
                    const Arc* arc = options[i][pick[i]];
                    loops[i] = std::binary_search(arc->targets_keep.begin(),
                                                  arc->targets_keep.end(), members[i].loc);
                    for (LocationId t : arc->targets_reset) {
                        auto [it, fresh] = reset_unmarked.emplace(t, !members[i].marked);
                        if (!fresh) it->second = it->second || !members[i].marked;
                    }
                }

                emit_successors(z, base, members, loops, reset_unmarked, ta_edges, ta_marked0,
                                out);
            }

            std::size_t i = 0;
            for (; i < members.size(); ++i) {
                if (++pick[i] < options[i].size()) break;
                pick[i] = 0;
            }
            if (i == members.size()) break;
            if (members.empty()) break;
        }
    }

    std::map<std::string, Zone> dedup;
    for (Zone& s : out) dedup.emplace(key(s), std::move(s));
    std::vector<Zone> res;
    for (auto& [k, s] : dedup) res.push_back(std::move(s));
    return res;
}

// Builds every successor zone for one arc combination: per reset-target
// location a fresh pair or a merge with the smallest surviving interval,
// then the TA edge.
void ZoneEngine::emit_successors(const Zone& z, const Dbm& base,
                                 const std::vector<Member>& members,
                                 const std::vector<bool>& loops,
                                 const std::map<LocationId, bool>& reset_unmarked,
                                 const std::vector<const TaEdge*>& ta_edges, bool ta_marked0,
                                 std::vector<Zone>& out) const {
    // surviving pairs, in flat order
    struct Survivor {
        int old_idx;
        LocationId loc;
        bool marked;  // post-flip, pre-forcing
    };
    std::vector<Survivor> survivors;
    std::vector<std::pair<LocationId, bool>> ltl_live;  // loc -> post-flip marker
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (!loops[i]) continue;
        if (members[i].is_pair)
            survivors.push_back({members[i].pair_idx, members[i].loc, members[i].marked});
        else
            ltl_live.push_back({members[i].loc, members[i].marked});
    }

    // split reset targets into presence bits and timed locations
    std::vector<std::pair<LocationId, bool>> timed_targets;  // (loc, has unmarked source)
    std::map<LocationId, bool> ltl_targets;
    for (const auto& [loc, unmarked] : reset_unmarked) {
        if (red_.ltl(loc))
            ltl_targets[loc] = unmarked;
        else
            timed_targets.push_back({loc, unmarked});
    }

    // presence bits of the successor
    std::vector<std::pair<LocationId, bool>> ltl_out;
    {
        std::map<LocationId, bool> next;
        for (const auto& [loc, marked] : ltl_live)
            next[loc] = a_.accepting[loc] ? true : marked;
        for (const auto& [loc, unmarked] : ltl_targets) {
            bool live_ok = true;
            auto it = std::find_if(ltl_live.begin(), ltl_live.end(),
                                   [&, l = loc](const auto& p) { return p.first == l; });
            if (it != ltl_live.end()) live_ok = it->second;
            next[loc] = a_.accepting[loc] ? true : (live_ok && !unmarked);
        }
        ltl_out.assign(next.begin(), next.end());
    }

    // per timed target: fresh pair and/or merge with the first survivor of
    // the location ("smallest interval"); a target with neither option
    // blocks the whole combination
    struct TargetChoice {
        LocationId loc;
        bool unmarked_src;
        bool can_fresh;
        int merge_survivor;  // index into survivors, -1 if unavailable
    };
    std::vector<TargetChoice> targets;
    for (const auto& [loc, unmarked] : timed_targets) {
        TargetChoice tc{loc, unmarked, true, -1};
        for (std::size_t s = 0; s < survivors.size(); ++s) {
            if (survivors[s].loc == loc) {
                tc.merge_survivor = static_cast<int>(s);
                break;
            }
        }
        targets.push_back(tc);
    }

    // enumerate fresh/merge decisions; filter by pair capacity
    std::vector<int> decision(targets.size(), 0);  // 0 = fresh, 1 = merge
    while (true) {
        bool feasible = true;
        int fresh_count = 0;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (decision[t] == 0) {
                ++fresh_count;
            } else if (targets[t].merge_survivor < 0) {
                feasible = false;
            }
        }
        if (static_cast<int>(survivors.size()) + fresh_count > capacity_) feasible = false;

        if (feasible) {
            // --- assemble the successor skeleton ---
            Dbm d = base;
            // drop non-surviving pairs
            std::vector<bool> surviving_pair(z.pairs.size(), false);
            for (const Survivor& s : survivors) surviving_pair[s.old_idx] = true;
            for (int i = 0; i < static_cast<int>(z.pairs.size()); ++i) {
                if (!surviving_pair[i]) {
                    d.free(xclock(i));
                    d.free(yclock(i));
                }
            }
            std::vector<int> alive;
            for (int c = 1; c <= nta_; ++c) alive.push_back(c);
            for (const Survivor& s : survivors) {
                alive.push_back(xclock(s.old_idx));
                alive.push_back(yclock(s.old_idx));
            }

            // merges: reset the x copy of the chosen survivor
            std::vector<int> merged_marker_override(survivors.size(), -1);
            for (std::size_t t = 0; t < targets.size(); ++t) {
                if (decision[t] != 1) continue;
                const Survivor& s = survivors[targets[t].merge_survivor];
                d.reset(xclock(s.old_idx), alive);
                bool m = a_.accepting[targets[t].loc]
                             ? true
                             : (s.marked && !targets[t].unmarked_src);
                merged_marker_override[targets[t].merge_survivor] = m ? 1 : 0;
            }

            // fresh pairs take the lowest free slots
            std::vector<int> fresh_slot(targets.size(), -1);
            {
                std::set<int> used;
                for (const Survivor& s : survivors) used.insert(s.old_idx);
                int slot = 0;
                for (std::size_t t = 0; t < targets.size(); ++t) {
                    if (decision[t] != 0) continue;
                    while (used.count(slot)) ++slot;
                    used.insert(slot);
                    fresh_slot[t] = slot;
                    d.reset(xclock(slot), alive);
                    alive.push_back(xclock(slot));
                    d.reset(yclock(slot), alive);
                    alive.push_back(yclock(slot));
                }
            }

            // canonical flat order: locations ascending, fresh pair first,
            // then survivors in their old relative order
            struct NewPair {
                LocationId loc;
                bool marked;
                int old_slot;
            };
            std::vector<NewPair> flat;
            std::set<LocationId> locs;
            for (const Survivor& s : survivors) locs.insert(s.loc);
            for (const auto& t : targets) locs.insert(t.loc);
            for (LocationId loc : locs) {
                for (std::size_t t = 0; t < targets.size(); ++t) {
                    if (targets[t].loc != loc || decision[t] != 0) continue;
                    bool m = a_.accepting[loc] ? true : !targets[t].unmarked_src;
                    flat.push_back({loc, m, fresh_slot[t]});
                }
                for (std::size_t s = 0; s < survivors.size(); ++s) {
                    if (survivors[s].loc != loc) continue;
                    bool m = merged_marker_override[s] >= 0
                                 ? merged_marker_override[s] == 1
                                 : (a_.accepting[loc] ? true : survivors[s].marked);
                    flat.push_back({loc, m, survivors[s].old_idx});
                }
            }

            // permute the DBM into the canonical slot assignment
            Dbm nd(nclocks_);
            auto old_clock = [&](int new_idx, bool y) {
                return y ? yclock(flat[new_idx].old_slot) : xclock(flat[new_idx].old_slot);
            };
            std::vector<std::pair<int, int>> mapping;  // (new clock, old clock)
            mapping.push_back({0, 0});
            for (int c = 1; c <= nta_; ++c) mapping.push_back({c, c});
            for (int i = 0; i < static_cast<int>(flat.size()); ++i) {
                mapping.push_back({xclock(i), old_clock(i, false)});
                mapping.push_back({yclock(i), old_clock(i, true)});
            }
            for (const auto& [ni, oi] : mapping)
                for (const auto& [nj, oj] : mapping) nd.at(ni, nj) = d.at(oi, oj);

            Zone skel;
            for (const NewPair& p : flat) skel.pairs.push_back({p.loc, p.marked});
            skel.ltl = ltl_out;
            skel.dbm = std::move(nd);

            // one successor per firable TA edge
            for (const TaEdge* e : ta_edges) {
                Zone s2 = skel;
                std::vector<int> act = active_clocks(s2);
                for (const TaConstraint& cc : e->guard)
                    s2.dbm.constrain(1 + cc.clock, cc.op, cc.bound);
                if (!s2.dbm.canonicalize(act)) continue;
                for (int r : e->resets) s2.dbm.reset(1 + r, act);
                s2.ta_loc = e->to;
                s2.ta_marked = ta_marked0 || b_.accepting[e->to];
                out.push_back(std::move(s2));
            }
        }

        std::size_t t = 0;
        for (; t < targets.size(); ++t) {
            if (++decision[t] < 2) break;
            decision[t] = 0;
        }
        if (t == targets.size()) break;
        if (targets.empty()) break;
    }
}

// ============================================================================
// Space interface
// ============================================================================

std::vector<Zone> ZoneEngine::post(const Zone& z) const {
    max_clocks_ = std::max(max_clocks_, 2 * z.pairs.size());
    std::vector<Zone> out;
    for (Zone& s : post_discrete(post_time(z))) out.push_back(extrapolate(std::move(s)));
    std::map<std::string, Zone> dedup;
    for (Zone& s : out) dedup.emplace(key(s), std::move(s));
    std::vector<Zone> res;
    for (auto& [k, s] : dedup) res.push_back(std::move(s));
    return res;
}

bool ZoneEngine::accepting(const Zone& z) const {
    for (const auto& [loc, marked] : z.pairs)
        if (!marked) return false;
    for (const auto& [loc, marked] : z.ltl)
        if (!marked) return false;
    return z.ta_marked;
}

std::string ZoneEngine::disc_key(const Zone& z) const {
    std::ostringstream out;
    for (const auto& [loc, marked] : z.pairs) out << loc << (marked ? 'T' : 'F') << ';';
    out << '#';
    for (const auto& [loc, marked] : z.ltl) out << loc << (marked ? 'T' : 'F') << ';';
    out << '#' << z.ta_loc << (z.ta_marked ? 'T' : 'F');
    return out.str();
}

std::string ZoneEngine::key(const Zone& z) const {
    std::ostringstream out;
    out << disc_key(z) << '|';
    std::vector<int> act = active_clocks(z);
    act.insert(act.begin(), 0);
    for (int i : act) {
        for (int j : act) {
            const DbmEntry& e = z.dbm.at(i, j);
            if (e.is_inf())
                out << "inf,";
            else
                out << e.bound << (e.strict ? '<' : '=') << ',';
        }
    }
    return out.str();
}

bool ZoneEngine::subsumes(const Zone& z1, const Zone& z2) const {
    if (z1.pairs != z2.pairs || z1.ltl != z2.ltl || z1.ta_loc != z2.ta_loc ||
        z1.ta_marked != z2.ta_marked)
        return false;
    return z2.dbm.subset_of(z1.dbm, active_clocks(z1));
}

std::string ZoneEngine::dump(const Zone& z) const {
    std::ostringstream out;
    out << "zone ta=" << b_.locations[z.ta_loc] << (z.ta_marked ? "[T]" : "[F]") << "\n";
    std::vector<std::string> names(static_cast<std::size_t>(nclocks_));
    names[0] = "x0";
    for (int c = 0; c < nta_; ++c) names[1 + c] = b_.clocks[c];
    for (int i = 0; i < static_cast<int>(z.pairs.size()); ++i) {
        out << "  pair " << i << ": " << a_.location_names[z.pairs[i].first]
            << (z.pairs[i].second ? "[T]" : "[F]") << "\n";
        names[xclock(i)] = "x" + std::to_string(i + 1);
        names[yclock(i)] = "y" + std::to_string(i + 1);
    }
    for (const auto& [loc, marked] : z.ltl)
        out << "  ltl " << a_.location_names[loc] << (marked ? "[T]" : "[F]") << "\n";
    out << z.dbm.text(names);
    return out.str();
}

// ============================================================================
// Point-zone conversions (differential testing)
// ============================================================================

Zone ZoneEngine::zone_of_marked(const MarkedState& input) const {
    MarkedState s = reduce_state(input, red_);
    Zone z;
    z.ta_loc = s.ta.loc;
    z.ta_marked = s.ta_marked;
    std::vector<std::pair<MarkedOState, int>> timed;
    for (const MarkedOState& o : s.ocata) {
        if (red_.ltl(o.loc))
            z.ltl.push_back({o.loc, o.marked});
        else
            timed.push_back({o, 0});
    }
    std::sort(z.ltl.begin(), z.ltl.end());
    // flat order: location ascending, then interval ascending (the marked
    // state is already sorted that way)
    if (static_cast<int>(timed.size()) > capacity_)
        throw FormulaError("state exceeds the zone pair capacity");
    z.dbm = Dbm(nclocks_);
    for (int i = 0; i < static_cast<int>(timed.size()); ++i) {
        const MarkedOState& o = timed[i].first;
        z.pairs.push_back({o.loc, o.marked});
        if (!tp_is_integer(o.lo) || !tp_is_integer(o.hi))
            throw FormulaError("point zones need integer values");
        z.dbm.at(xclock(i), 0) = DbmEntry::le(tp_floor(o.lo));
        z.dbm.at(0, xclock(i)) = DbmEntry::le(-tp_floor(o.lo));
        z.dbm.at(yclock(i), 0) = DbmEntry::le(tp_floor(o.hi));
        z.dbm.at(0, yclock(i)) = DbmEntry::le(-tp_floor(o.hi));
    }
    for (int c = 0; c < nta_; ++c) {
        if (!tp_is_integer(s.ta.vals[c]))
            throw FormulaError("point zones need integer values");
        z.dbm.at(1 + c, 0) = DbmEntry::le(tp_floor(s.ta.vals[c]));
        z.dbm.at(0, 1 + c) = DbmEntry::le(-tp_floor(s.ta.vals[c]));
    }
    if (!z.dbm.canonicalize(active_clocks(z))) throw FormulaError("empty point zone");
    return z;
}

std::optional<MarkedState> ZoneEngine::marked_of_point_zone(const Zone& z) const {
    auto pinned = [&](int c) -> std::optional<long long> {
        const DbmEntry& up = z.dbm.at(c, 0);
        const DbmEntry& lo = z.dbm.at(0, c);
        if (up.is_inf() || lo.is_inf() || up.strict || lo.strict) return std::nullopt;
        if (up.bound != -lo.bound) return std::nullopt;
        return up.bound;
    };
    MarkedState s;
    s.ta.loc = z.ta_loc;
    s.ta_marked = z.ta_marked;
    for (int c = 0; c < nta_; ++c) {
        auto v = pinned(1 + c);
        if (!v) return std::nullopt;
        s.ta.vals.push_back(TimePoint(*v));
    }
    for (int i = 0; i < static_cast<int>(z.pairs.size()); ++i) {
        auto lo = pinned(xclock(i)), hi = pinned(yclock(i));
        if (!lo || !hi) return std::nullopt;
        s.ocata.push_back({z.pairs[i].first, TimePoint(*lo), TimePoint(*hi), z.pairs[i].second});
    }
    for (const auto& [loc, marked] : z.ltl)
        s.ocata.push_back({loc, TimePoint(0), TimePoint(0), marked});
    std::sort(s.ocata.begin(), s.ocata.end());
    return s;
}

}  // namespace mitl
