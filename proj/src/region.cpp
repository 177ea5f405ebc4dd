// ============================================================================
// region.cpp — region words: the canonical encoding H, time successors, post
// ============================================================================

#include "mitl/region.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mitl {

// ============================================================================
// Regions
// ============================================================================

int region_of(const TimePoint& v, std::uint64_t cmax) {
    TimePoint c(static_cast<long long>(cmax));
    if (v > c) return 2 * static_cast<int>(cmax) + 1;
    if (tp_is_integer(v)) return 2 * static_cast<int>(tp_floor(v));
    return 2 * static_cast<int>(tp_floor(v)) + 1;
}

std::string region_text(int code, std::uint64_t cmax) {
    int above = 2 * static_cast<int>(cmax) + 1;
    if (code == above) return "(" + std::to_string(cmax) + ",inf)";
    if (code % 2 == 0) return "{" + std::to_string(code / 2) + "}";
    return "(" + std::to_string(code / 2) + "," + std::to_string(code / 2 + 1) + ")";
}

// ============================================================================
// encode
// ============================================================================

RegionState encode(const MarkedState& input, std::uint64_t cmax, const Reduction& red) {
    MarkedState s = reduce_state(input, red);

    RegionState out;
    out.ta_loc = s.ta.loc;
    out.ta_marked = s.ta_marked;

    // (value, tuple) pool; values above cmax group under fractional part 0
    std::vector<std::pair<TimePoint, RegionTuple>> pool;
    std::map<LocationId, int> per_loc_count;
    for (const MarkedOState& o : s.ocata) {
        if (red.enabled && red.is_ltl[o.loc]) {
            out.ltl.push_back({o.loc, o.marked});
            continue;
        }
        int idx = ++per_loc_count[o.loc];
        pool.push_back({o.lo, {false, o.loc, 0, o.marked, idx}});
        pool.push_back({o.hi, {false, o.loc, 0, o.marked, idx}});
    }
    for (std::size_t p = 0; p < s.ta.vals.size(); ++p)
        pool.push_back({s.ta.vals[p], {true, s.ta.loc, 0, s.ta_marked, static_cast<int>(p) + 1}});
    std::sort(out.ltl.begin(), out.ltl.end());

    TimePoint c(static_cast<long long>(cmax));
    std::map<TimePoint, RegionLetter> groups;
    for (auto& [v, t] : pool) {
        TimePoint frac = v > c ? TimePoint(0) : tp_frac(v);
        RegionTuple tup = t;
        tup.region = region_of(v, cmax);
        groups[frac].push_back(tup);
    }
    for (auto& [frac, letter] : groups) {
        std::sort(letter.begin(), letter.end());
        letter.erase(std::unique(letter.begin(), letter.end()), letter.end());
        out.word.letters.push_back(std::move(letter));
    }
    return out;
}

// ============================================================================
// decode
// ============================================================================

namespace {

bool letter_is_integral(const RegionLetter& l, std::uint64_t cmax) {
    int above = 2 * static_cast<int>(cmax) + 1;
    for (const RegionTuple& t : l)
        if (t.region % 2 == 0 || t.region == above) return true;
    return false;
}

TimePoint tuple_value(const RegionTuple& t, const TimePoint& frac, std::uint64_t cmax) {
    int above = 2 * static_cast<int>(cmax) + 1;
    if (t.region == above) {
        // Stagger unbounded-region endpoints by interval index so that
        // same-location intervals stay disjoint in the representative.
        long long bump = t.is_ta ? 0 : 2 * (t.index - 1);
        return TimePoint(static_cast<long long>(cmax) + 1 + bump) + frac;
    }
    if (t.region % 2 == 0) {
        if (frac != TimePoint(0)) throw FormulaError("malformed region word: point off-grid");
        return TimePoint(t.region / 2);
    }
    if (frac == TimePoint(0)) throw FormulaError("malformed region word: open region at 0");
    return TimePoint(t.region / 2) + frac;
}

}  // namespace

MarkedState decode(const RegionState& s, const BuchiTA& b, std::uint64_t cmax,
                   const Reduction& red) {
    const auto m = static_cast<long long>(s.word.letters.size());
    MarkedState out;
    out.ta.loc = s.ta_loc;
    out.ta_marked = s.ta_marked;
    out.ta.vals.assign(b.clocks.size(), TimePoint(0));
    std::vector<bool> clock_seen(b.clocks.size(), false);

    // (loc, index) -> collected endpoint values and markers
    std::map<std::pair<int, int>, std::vector<std::pair<TimePoint, bool>>> intervals;

    for (long long p = 0; p < m; ++p) {
        const RegionLetter& letter = s.word.letters[p];
        bool integral = letter_is_integral(letter, cmax);
        if (integral && p != 0)
            throw FormulaError("malformed region word: integral letter not first");
        TimePoint frac;
        if (letter_is_integral(s.word.letters[0], cmax))
            frac = p == 0 ? TimePoint(0) : TimePoint(p, m + 1);
        else
            frac = TimePoint(p + 1, m + 1);

        for (const RegionTuple& t : letter) {
            TimePoint v = tuple_value(t, frac, cmax);
            if (t.is_ta) {
                if (t.loc != s.ta_loc)
                    throw FormulaError("malformed region word: TA location mismatch");
                int ci = t.index - 1;
                if (ci < 0 || ci >= static_cast<int>(b.clocks.size()) || clock_seen[ci])
                    throw FormulaError("malformed region word: bad TA clock tuple");
                clock_seen[ci] = true;
                out.ta.vals[ci] = v;
            } else {
                intervals[{t.loc, t.index}].push_back({v, t.marked});
            }
        }
    }
    for (bool seen : clock_seen)
        if (!seen) throw FormulaError("malformed region word: missing TA clock tuple");

    for (auto& [key, vals] : intervals) {
        if (vals.size() > 2) throw FormulaError("malformed region word: >2 endpoints");
        TimePoint lo = vals[0].first, hi = vals.back().first;
        if (vals.size() == 2 && vals[0].second != vals[1].second)
            throw FormulaError("malformed region word: marker mismatch");
        if (hi < lo) std::swap(lo, hi);
        out.ocata.push_back({key.first, lo, hi, vals[0].second});
    }
    for (const auto& [loc, marked] : s.ltl) {
        if (!red.enabled || !red.is_ltl[loc])
            throw FormulaError("malformed region word: unexpected presence bit");
        out.ocata.push_back({loc, TimePoint(0), TimePoint(0), marked});
    }
    std::sort(out.ocata.begin(), out.ocata.end());
    return out;
}

// ============================================================================
// time successors
// ============================================================================

std::vector<RegionWord> time_successors(const RegionWord& w, std::uint64_t cmax) {
    const int above = 2 * static_cast<int>(cmax) + 1;
    const int top_point = 2 * static_cast<int>(cmax);

    auto terminal = [&](const RegionWord& x) {
        if (x.letters.empty()) return true;
        if (x.letters.size() != 1) return false;
        for (const RegionTuple& t : x.letters[0])
            if (t.region != above) return false;
        return true;
    };
    auto sort_letter = [](RegionLetter& l) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    };

    std::size_t tuples = 0;
    for (const auto& l : w.letters) tuples += l.size();
    std::size_t cap = tuples * (2 * cmax + 2) + 4;

    std::vector<RegionWord> chain;
    RegionWord cur = w;
    while (!terminal(cur)) {
        if (chain.size() > cap) throw std::logic_error("time-successor chain overran its bound");
        RegionWord nxt;
        bool first_has_point = false;
        for (const RegionTuple& t : cur.letters[0])
            if (t.region % 2 == 0) first_has_point = true;

        if (first_has_point) {
            // points promote: {cmax} joins the unbounded region in place,
            // the others move to a fresh letter right after
            RegionLetter stay, moved;
            for (RegionTuple t : cur.letters[0]) {
                if (t.region == top_point) {
                    t.region = above;
                    stay.push_back(t);
                } else if (t.region % 2 == 0) {
                    t.region += 1;
                    moved.push_back(t);
                } else if (t.region == above) {
                    stay.push_back(t);
                } else {
                    throw std::logic_error("open region in an integral letter");
                }
            }
            sort_letter(stay);
            sort_letter(moved);
            if (!stay.empty()) nxt.letters.push_back(std::move(stay));
            if (!moved.empty()) nxt.letters.push_back(std::move(moved));
            nxt.letters.insert(nxt.letters.end(), cur.letters.begin() + 1, cur.letters.end());
        } else {
            // the largest fractional part reaches the next integer
            RegionLetter promoted;
            for (RegionTuple t : cur.letters.back()) {
                if (t.region % 2 == 0 || t.region == above)
                    throw std::logic_error("non-open region in the last letter");
                t.region += 1;
                promoted.push_back(t);
            }
            sort_letter(promoted);
            std::vector<RegionLetter> rest(cur.letters.begin(), cur.letters.end() - 1);
            if (!rest.empty() && letter_is_integral(rest.front(), cmax)) {
                rest.front().insert(rest.front().end(), promoted.begin(), promoted.end());
                sort_letter(rest.front());
            } else {
                rest.insert(rest.begin(), std::move(promoted));
            }
            nxt.letters = std::move(rest);
        }
        chain.push_back(nxt);
        cur = std::move(nxt);
    }
    return chain;
}

// ============================================================================
// dump
// ============================================================================

std::string region_word_text(const RegionWord& w, const Ocata& a, const BuchiTA& b,
                             std::uint64_t cmax) {
    std::ostringstream out;
    for (const RegionLetter& letter : w.letters) {
        out << '{';
        for (std::size_t i = 0; i < letter.size(); ++i) {
            const RegionTuple& t = letter[i];
            if (i) out << ',';
            out << '(' << (t.is_ta ? b.locations[t.loc] : a.location_names[t.loc]) << ','
                << region_text(t.region, cmax) << ',' << (t.marked ? 'T' : 'F') << ','
                << t.index << ')';
        }
        out << '}';
    }
    return out.str();
}

// ============================================================================
// RegionEngine
// ============================================================================

RegionEngine::RegionEngine(const Ocata& a, const BuchiTA& b, std::size_t K, Reduction red)
    : a_(a), b_(b), K_(K), red_(std::move(red)), cmax_(std::max(a.cmax, b.cmax)) {
    if (a.alphabet != b.alphabet)
        throw FormulaError("product requires identical alphabets");
}

RegionState RegionEngine::initial() const {
    return encode(initial_marked(a_, b_), cmax_, red_);
}

std::vector<RegionState> RegionEngine::post(const RegionState& s) const {
    std::vector<RegionWord> words{s.word};
    for (RegionWord& w : time_successors(s.word, cmax_)) words.push_back(std::move(w));

    std::vector<RegionState> out;
    for (const RegionWord& w : words) {
        RegionState shifted = s;
        shifted.word = w;
        MarkedState ms = decode(shifted, b_, cmax_, red_);
        {
            std::size_t clocks = 0;
            for (const MarkedOState& o : ms.ocata) {
                if (red_.enabled && red_.is_ltl[o.loc]) continue;
                clocks += o.lo == o.hi ? 1 : 2;
            }
            max_clocks_ = std::max(max_clocks_, clocks);
        }
        for (std::size_t letter = 0; letter < a_.alphabet.size(); ++letter) {
            for (const MarkedState& t :
                 discrete_marked(a_, b_, ms, static_cast<int>(letter), K_, red_))
                out.push_back(encode(t, cmax_, red_));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool RegionEngine::accepting(const RegionState& s) const {
    for (const RegionLetter& l : s.word.letters)
        for (const RegionTuple& t : l)
            if (!t.marked) return false;
    for (const auto& [loc, marked] : s.ltl)
        if (!marked) return false;
    return s.ta_marked;
}

std::string RegionEngine::key(const RegionState& s) const {
    std::ostringstream out;
    for (const RegionLetter& l : s.word.letters) {
        out << '|';
        for (const RegionTuple& t : l)
            out << t.is_ta << ',' << t.loc << ',' << t.region << ',' << t.marked << ','
                << t.index << ';';
    }
    out << '#' << s.ta_loc << ',' << s.ta_marked;
    for (const auto& [loc, marked] : s.ltl) out << '+' << loc << ',' << marked;
    return out.str();
}

std::vector<RegionState> region_post(const RegionEngine& engine, const Ocata&, const BuchiTA&,
                                     const std::vector<RegionState>& states) {
    std::vector<RegionState> out;
    for (const RegionState& s : states)
        for (RegionState& t : engine.post(s)) out.push_back(std::move(t));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace mitl
