// ============================================================================
// product.cpp — marked product transition system (Miyano-Hayashi rules)
// ============================================================================

#include "mitl/product.hpp"

#include <algorithm>
#include <sstream>

namespace mitl {

Configuration MarkedState::configuration() const {
    std::vector<IState> sts;
    for (const MarkedOState& s : ocata) sts.push_back({s.loc, s.lo, s.hi});
    return Configuration::normalize(std::move(sts));
}

std::string MarkedState::text(const Ocata& a, const BuchiTA& b) const {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < ocata.size(); ++i) {
        if (i) out << ", ";
        out << '(' << a.location_names[ocata[i].loc] << ",[" << tp_text(ocata[i].lo) << ','
            << tp_text(ocata[i].hi) << "]," << (ocata[i].marked ? 'T' : 'F') << ')';
    }
    out << "} (" << b.locations[ta.loc];
    for (const TimePoint& v : ta.vals) out << ' ' << tp_text(v);
    out << ',' << (ta_marked ? 'T' : 'F') << ')';
    return out.str();
}

Reduction Reduction::over(const Ocata& a) {
    Reduction r;
    r.enabled = true;
    r.is_ltl.assign(a.num_locations(), false);
    for (LocationId l : sub_ltl(a)) r.is_ltl[l] = true;
    return r;
}

MarkedState initial_marked(const Ocata& a, const BuchiTA& b) {
    MarkedState s;
    s.ocata.push_back({a.initial, TimePoint(0), TimePoint(0), false});
    s.ta.loc = b.initial;
    s.ta.vals.assign(b.clocks.size(), TimePoint(0));
    s.ta_marked = b.accepting[b.initial];
    return s;
}

MarkedState elapse_marked(const MarkedState& s, const TimePoint& t) {
    MarkedState out = s;
    for (MarkedOState& o : out.ocata) {
        o.lo += t;
        o.hi += t;
    }
    for (TimePoint& v : out.ta.vals) v += t;
    return out;
}

bool is_alpha(const MarkedState& s) {
    for (const MarkedOState& o : s.ocata)
        if (!o.marked) return false;
    return s.ta_marked;
}

MarkedState reduce_state(const MarkedState& s, const Reduction& red) {
    if (!red.enabled) return s;
    MarkedState out = s;
    for (MarkedOState& o : out.ocata) {
        if (red.is_ltl[o.loc]) {
            o.lo = TimePoint(0);
            o.hi = TimePoint(0);
        }
    }
    std::sort(out.ocata.begin(), out.ocata.end());
    out.ocata.erase(std::unique(out.ocata.begin(), out.ocata.end()), out.ocata.end());
    return out;
}

// ============================================================================
// Discrete successors
// ============================================================================

std::vector<MarkedSucc> discrete_marked_traced(const Ocata& a, const BuchiTA& b,
                                               const MarkedState& input, int letter,
                                               std::size_t K, const Reduction& red) {
    MarkedState s = reduce_state(input, red);

    // Breakpoint: an accepting state restarts the marking.
    if (is_alpha(s)) {
        for (MarkedOState& o : s.ocata) o.marked = false;
        s.ta_marked = false;
    }

    Configuration c;
    for (const MarkedOState& o : s.ocata) c.states.push_back({o.loc, o.lo, o.hi});

    std::vector<SuccChoice> choices = succ_choices(a, c, letter);
    if (choices.empty() && !s.ocata.empty()) return {};

    std::vector<const TaEdge*> ta_edges;
    for (const TaEdge* e : b.edges_from(s.ta.loc, letter))
        if (ta_guard_holds(e->guard, s.ta.vals)) ta_edges.push_back(e);
    if (ta_edges.empty()) return {};

    std::vector<MarkedSucc> out;
    for (const SuccChoice& ch : choices) {
        // Approximate; in reduced mode the clock budget is spent on the
        // timed part only, presence states pass through unchanged.
        std::vector<Configuration> approxed;
        if (red.enabled) {
            std::vector<IState> ltl_states, timed;
            for (const IState& st : ch.result.states)
                (red.is_ltl[st.loc] ? ltl_states : timed).push_back(st);
            for (Configuration& t : approx_fk(Configuration::normalize(std::move(timed)), K)) {
                std::vector<IState> all = t.states;
                all.insert(all.end(), ltl_states.begin(), ltl_states.end());
                approxed.push_back(Configuration::normalize(std::move(all)));
            }
        } else {
            approxed = approx_fk(ch.result, K);
        }

        for (const Configuration& cp : approxed) {
            // dest: successor j of source i iff a model interval of i lies
            // inside j's interval
            std::vector<std::pair<int, int>> edges;
            std::vector<bool> has_unmarked_src(cp.states.size(), false);
            for (std::size_t i = 0; i < ch.models.size(); ++i) {
                for (const IState& m : ch.models[i].states) {
                    for (std::size_t j = 0; j < cp.states.size(); ++j) {
                        const IState& t = cp.states[j];
                        if (t.loc == m.loc && t.lo <= m.lo && m.hi <= t.hi) {
                            edges.push_back({static_cast<int>(i), static_cast<int>(j)});
                            if (!s.ocata[i].marked) has_unmarked_src[j] = true;
                        }
                    }
                }
            }
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

            std::vector<MarkedOState> marked;
            for (std::size_t j = 0; j < cp.states.size(); ++j) {
                const IState& t = cp.states[j];
                bool m = a.accepting[t.loc] ? true : !has_unmarked_src[j];
                marked.push_back({t.loc, t.lo, t.hi, m});
            }

            for (const TaEdge* e : ta_edges) {
                MarkedSucc succ;
                succ.state.ocata = marked;
                succ.state.ta.loc = e->to;
                succ.state.ta.vals = s.ta.vals;
                for (int r : e->resets) succ.state.ta.vals[r] = TimePoint(0);
                succ.state.ta_marked = s.ta_marked || b.accepting[e->to];
                succ.ocata_edges = edges;
                out.push_back(std::move(succ));
            }
        }
    }
    return out;
}

std::vector<MarkedState> discrete_marked(const Ocata& a, const BuchiTA& b, const MarkedState& s,
                                         int letter, std::size_t K, const Reduction& red) {
    std::vector<MarkedState> out;
    for (MarkedSucc& ms : discrete_marked_traced(a, b, s, letter, K, red))
        out.push_back(std::move(ms.state));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace mitl
