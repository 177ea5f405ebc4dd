#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "mitl/region.hpp"
#include "test_util.hpp"

using namespace mitl;

namespace {

// --------------------------------------------------------------------------
// Direct implementation of the state equivalence (the oracle for encode):
// same locations/markers, endpoints and clocks in the same regions, and the
// same ordering of all fractional parts (values above cmax count as
// fractional part 0).
// --------------------------------------------------------------------------

std::vector<TimePoint> state_values(const MarkedState& s) {
    std::vector<TimePoint> v;
    for (const MarkedOState& o : s.ocata) {
        v.push_back(o.lo);
        v.push_back(o.hi);
    }
    for (const TimePoint& t : s.ta.vals) v.push_back(t);
    return v;
}

bool equiv_states(const MarkedState& s1, const MarkedState& s2, std::uint64_t cmax) {
    if (s1.ocata.size() != s2.ocata.size()) return false;
    if (s1.ta.loc != s2.ta.loc || s1.ta_marked != s2.ta_marked) return false;
    if (s1.ta.vals.size() != s2.ta.vals.size()) return false;
    for (std::size_t i = 0; i < s1.ocata.size(); ++i) {
        if (s1.ocata[i].loc != s2.ocata[i].loc) return false;
        if (s1.ocata[i].marked != s2.ocata[i].marked) return false;
    }
    std::vector<TimePoint> v1 = state_values(s1), v2 = state_values(s2);
    TimePoint c(static_cast<long long>(cmax));
    auto frac = [&](const TimePoint& v) { return v > c ? TimePoint(0) : tp_frac(v); };
    for (std::size_t i = 0; i < v1.size(); ++i)
        if (region_of(v1[i], cmax) != region_of(v2[i], cmax)) return false;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        for (std::size_t j = 0; j < v1.size(); ++j) {
            auto cmp1 = frac(v1[i]) < frac(v1[j]) ? -1 : (frac(v1[i]) == frac(v1[j]) ? 0 : 1);
            auto cmp2 = frac(v2[i]) < frac(v2[j]) ? -1 : (frac(v2[i]) == frac(v2[j]) ? 0 : 1);
            if (cmp1 != cmp2) return false;
        }
    }
    return true;
}

// Random product state over the given location/TA shape; denominators 4.
MarkedState random_state(std::mt19937& rng, int nlocs, int ta_locs, int ta_clocks,
                         std::uint64_t cmax) {
    auto coin = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    MarkedState s;
    int n = coin(3) + 1;
    std::vector<IState> sts;
    for (int i = 0; i < n; ++i) {
        LocationId loc = coin(nlocs);
        TimePoint lo(coin(static_cast<int>(4 * (cmax + 2))), 4);
        TimePoint len(coin(6), 4);
        sts.push_back({loc, lo, lo + len});
    }
    Configuration c = Configuration::normalize(std::move(sts));
    for (const IState& st : c.states) s.ocata.push_back({st.loc, st.lo, st.hi, coin(2) == 0});
    s.ta.loc = coin(ta_locs);
    for (int i = 0; i < ta_clocks; ++i)
        s.ta.vals.push_back(TimePoint(coin(static_cast<int>(4 * (cmax + 2))), 4));
    s.ta_marked = coin(2) == 0;
    return s;
}

// An equivalent sibling: same integer parts and frac order, different values.
MarkedState remap_state(std::mt19937& rng, const MarkedState& s, std::uint64_t cmax) {
    TimePoint c(static_cast<long long>(cmax));
    std::set<TimePoint> fracs, aboves;
    for (const TimePoint& v : state_values(s)) {
        if (v > c)
            aboves.insert(v);
        else if (tp_frac(v) != TimePoint(0))
            fracs.insert(tp_frac(v));
    }
    // order-preserving new fractional parts in (0,1)
    std::map<TimePoint, TimePoint> fmap;
    long long m = static_cast<long long>(fracs.size());
    long long denom = 2 * m + 3 + std::uniform_int_distribution<int>(0, 3)(rng);
    long long pos = 1;
    for (const TimePoint& f : fracs) fmap[f] = TimePoint(pos++, denom);
    std::map<TimePoint, TimePoint> amap;
    long long shift = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
    long long i = 0;
    for (const TimePoint& v : aboves) amap[v] = c + TimePoint(shift + i++);

    auto remap = [&](const TimePoint& v) {
        if (v > c) return amap[v];
        if (tp_frac(v) == TimePoint(0)) return v;
        return TimePoint(tp_floor(v)) + fmap[tp_frac(v)];
    };
    MarkedState out = s;
    for (MarkedOState& o : out.ocata) {
        o.lo = remap(o.lo);
        o.hi = remap(o.hi);
    }
    for (TimePoint& v : out.ta.vals) v = remap(v);
    return out;
}

Ocata two_loc_ocata() { return testutil::fig1_hand(); }

BuchiTA hand_ta() {
    return parse_ta(R"({
      "alphabet": ["a", "b"],
      "clocks": ["x"],
      "locations": [{"name": "sA", "accepting": true}, {"name": "sB", "accepting": false}],
      "initial": "sA",
      "edges": [
        {"from": "sA", "to": "sA", "letter": "a", "guard": ["x<=2"], "reset": []},
        {"from": "sA", "to": "sB", "letter": "b", "guard": ["x>=1"], "reset": ["x"]},
        {"from": "sB", "to": "sA", "letter": "a", "guard": [], "reset": ["x"]},
        {"from": "sB", "to": "sB", "letter": "b", "guard": [], "reset": []}
      ]
    })");
}

}  // namespace

TEST_CASE("encode: the worked three-letter example") {
    // two intervals in l1 plus one TA clock at 1.3, cmax 2
    Ocata a = two_loc_ocata();  // location 0 named l_box; rename for the dump
    a.location_names[0] = "l1";
    BuchiTA b = hand_ta();
    b.locations[0] = "lB";

    MarkedState s;
    s.ocata = {{0, TimePoint(0), TimePoint(13, 10), false},
               {0, TimePoint(18, 10), TimePoint(27, 10), true}};
    s.ta.loc = 0;
    s.ta.vals = {TimePoint(13, 10)};
    s.ta_marked = false;

    RegionState rs = encode(s, 2);
    REQUIRE(rs.word.letters.size() == 3);
    CHECK(region_word_text(rs.word, a, b, 2) ==
          "{(l1,{0},F,1),(l1,(2,inf),T,2)}"
          "{(l1,(1,2),F,1),(lB,(1,2),F,1)}"
          "{(l1,(1,2),T,2)}");
}

TEST_CASE("encode: punctual states collapse to one tuple") {
    MarkedState s;
    s.ocata = {{0, TimePoint(0), TimePoint(0), false}};
    s.ta.loc = 0;
    s.ta_marked = true;
    RegionState rs = encode(s, 2);
    REQUIRE(rs.word.letters.size() == 1);
    REQUIRE(rs.word.letters[0].size() == 1);
    CHECK(rs.word.letters[0][0] == RegionTuple{false, 0, 0, false, 1});
}

TEST_CASE("encode: region- and order-preserving shifts encode identically") {
    MarkedState s1;
    s1.ocata = {{0, TimePoint(1, 10), TimePoint(12, 10), true},
                {1, TimePoint(7, 10), TimePoint(7, 10), false}};
    s1.ta.loc = 1;
    s1.ta.vals = {TimePoint(19, 10)};
    s1.ta_marked = true;
    MarkedState s2 = s1;
    for (MarkedOState& o : s2.ocata) {
        o.lo += TimePoint(1, 100);
        o.hi += TimePoint(1, 100);
    }
    s2.ta.vals[0] += TimePoint(1, 100);
    CHECK(encode(s1, 2) == encode(s2, 2));
}

TEST_CASE("encode matches the direct equivalence oracle") {
    std::mt19937 rng(83);
    const std::uint64_t cmax = 2;
    int pairs = 0;
    while (pairs < 600) {
        MarkedState s = random_state(rng, 2, 2, 1, cmax);
        MarkedState t;
        int mode = std::uniform_int_distribution<int>(0, 3)(rng);
        if (mode == 0) {
            t = remap_state(rng, s, cmax);
        } else if (mode == 1 && !s.ocata.empty()) {
            t = s;  // marker flip (condition 1)
            t.ocata[0].marked = !t.ocata[0].marked;
        } else if (mode == 2) {
            t = s;  // TA marker flip
            t.ta_marked = !t.ta_marked;
        } else {
            t = random_state(rng, 2, 2, 1, cmax);
        }
        bool eq = equiv_states(s, t, cmax);
        CHECK((encode(s, cmax) == encode(t, cmax)) == eq);
        ++pairs;
    }
}

TEST_CASE("decode: round trip on sampled words") {
    std::mt19937 rng(97);
    BuchiTA b = hand_ta();
    for (int i = 0; i < 400; ++i) {
        MarkedState s = random_state(rng, 2, 2, 1, 2);
        RegionState rs = encode(s, 2);
        MarkedState rep = decode(rs, b, 2);
        CHECK(encode(rep, 2) == rs);
    }
    // all-point word decodes to integer values
    MarkedState s;
    s.ocata = {{0, TimePoint(1), TimePoint(2), true}};
    s.ta.loc = 0;
    s.ta.vals = {TimePoint(0)};
    s.ta_marked = true;
    MarkedState rep = decode(encode(s, 2), b, 2);
    CHECK(rep == s);
}

TEST_CASE("decode: TA-only states survive") {
    BuchiTA b = hand_ta();
    MarkedState s;
    s.ta.loc = 1;
    s.ta.vals = {TimePoint(3, 2)};
    s.ta_marked = false;
    MarkedState rep = decode(encode(s, 2), b, 2);
    CHECK(rep.ocata.empty());
    CHECK(rep.ta.loc == 1);
    CHECK(encode(rep, 2) == encode(s, 2));
}

TEST_CASE("time_successors: the singleton chain") {
    RegionWord w;
    w.letters = {{RegionTuple{false, 0, 0, false, 1}}};  // {(l,{0})} with cmax 1
    auto chain = time_successors(w, 1);
    REQUIRE(chain.size() == 3);
    CHECK(chain[0].letters == std::vector<RegionLetter>{{RegionTuple{false, 0, 1, false, 1}}});
    CHECK(chain[1].letters == std::vector<RegionLetter>{{RegionTuple{false, 0, 2, false, 1}}});
    CHECK(chain[2].letters == std::vector<RegionLetter>{{RegionTuple{false, 0, 3, false, 1}}});
}

TEST_CASE("time_successors: all-unbounded word is a fixed point") {
    RegionWord w;
    w.letters = {{RegionTuple{false, 0, 5, false, 1}}};  // (2,inf) for cmax 2
    CHECK(time_successors(w, 2).empty());
    RegionWord empty;
    CHECK(time_successors(empty, 2).empty());
}

TEST_CASE("time_successors: a cmax point moves straight to the unbounded region") {
    RegionWord w;
    w.letters = {{RegionTuple{false, 0, 4, true, 1}}};  // {2} with cmax 2
    auto chain = time_successors(w, 2);
    REQUIRE(!chain.empty());
    CHECK(chain[0].letters ==
          std::vector<RegionLetter>{{RegionTuple{false, 0, 5, true, 1}}});
    CHECK(chain.size() == 1);
}

TEST_CASE("time_successors terminate within the tuple bound") {
    std::mt19937 rng(3);
    for (int i = 0; i < 300; ++i) {
        MarkedState s = random_state(rng, 2, 2, 1, 2);
        RegionState rs = encode(s, 2);
        std::size_t tuples = 0;
        for (const auto& l : rs.word.letters) tuples += l.size();
        auto chain = time_successors(rs.word, 2);
        CHECK(chain.size() <= tuples * (2 * 2 + 2));
    }
}

TEST_CASE("time chain equals the concrete elapse quotient") {
    std::mt19937 rng(51);
    for (int i = 0; i < 60; ++i) {
        MarkedState s = random_state(rng, 2, 2, 1, 2);
        RegionState rs = encode(s, 2);
        std::set<RegionWord> chain{rs.word};
        for (const RegionWord& w : time_successors(rs.word, 2)) chain.insert(w);

        std::set<RegionWord> seen;
        for (long long j = 0; j <= 8 * 4; ++j) {
            MarkedState sh = elapse_marked(s, TimePoint(j, 8));
            seen.insert(encode(sh, 2).word);
        }
        CHECK(seen == chain);
    }
}

TEST_CASE("region post: figure automaton with the universal TA") {
    Ocata a = testutil::fig1_hand();
    BuchiTA u = universal_ta({"a", "b"});
    RegionEngine eng(a, u, 8, Reduction::none());
    RegionState init = eng.initial();
    auto succs = eng.post(init);
    CHECK(!succs.empty());
    // reading b keeps the box copy looping; at some delay its region has
    // advanced and the marker is forced true (box is accepting)
    bool found = false;
    for (const RegionState& s : succs) {
        if (s.word.letters.size() == 1 && s.word.letters[0].size() == 1) {
            const RegionTuple& t = s.word.letters[0][0];
            if (!t.is_ta && t.loc == 0 && t.marked && t.region > 0) found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("region post is representative-independent") {
    std::mt19937 rng(67);
    Ocata a = testutil::fig1_hand();
    BuchiTA b = hand_ta();
    RegionEngine eng(a, b, 8, Reduction::none());
    int tried = 0;
    while (tried < 20) {
        MarkedState s = random_state(rng, 2, 2, 1, 2);
        MarkedState s2 = remap_state(rng, s, 2);
        REQUIRE(encode(s, 2) == encode(s2, 2));
        std::set<RegionState> r1, r2;
        for (int letter = 0; letter < 2; ++letter) {
            for (const MarkedState& t : discrete_marked(a, b, s, letter, 8))
                r1.insert(encode(t, 2));
            for (const MarkedState& t : discrete_marked(a, b, s2, letter, 8))
                r2.insert(encode(t, 2));
        }
        CHECK(r1 == r2);
        ++tried;
    }
}

TEST_CASE("time-abstract bisimulation on sampled equivalent pairs") {
    std::mt19937 rng(71);
    Ocata a = testutil::fig1_hand();
    BuchiTA b = hand_ta();
    int pairs = 0;
    while (pairs < 120) {
        MarkedState s1 = random_state(rng, 2, 2, 1, 2);
        MarkedState s2 = remap_state(rng, s1, 2);
        REQUIRE(equiv_states(s1, s2, 2));

        // discrete steps agree up to encoding
        for (int letter = 0; letter < 2; ++letter) {
            std::set<RegionState> e1, e2;
            for (const MarkedState& t : discrete_marked(a, b, s1, letter, 8))
                e1.insert(encode(t, 2));
            for (const MarkedState& t : discrete_marked(a, b, s2, letter, 8))
                e2.insert(encode(t, 2));
            CHECK(e1 == e2);
        }
        // time chains agree
        CHECK(time_successors(encode(s1, 2).word, 2) == time_successors(encode(s2, 2).word, 2));
        ++pairs;
    }
}

TEST_CASE("region engine in reduced mode tracks presence bits") {
    Formula f = to_nnf(parse_formula("G[0,inf) (a -> F[1,2] b)"));
    Ocata a = compile(f, {"a", "b"});
    BuchiTA u = universal_ta({"a", "b"});
    RegionEngine eng(a, u, fstar_k(f), Reduction::over(a));
    RegionState init = eng.initial();
    // the initial location is untimed, so the word starts empty
    CHECK(init.word.letters.empty());
    REQUIRE(init.ltl.size() == 1);
    CHECK(init.ltl[0].first == a.initial);
    auto succs = eng.post(init);
    CHECK(!succs.empty());
    for (const RegionState& s : succs) {
        for (const RegionLetter& l : s.word.letters)
            for (const RegionTuple& t : l) CHECK_FALSE(t.is_ta);  // universal TA has no clocks
    }
}
