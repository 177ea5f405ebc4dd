#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mitl/configuration.hpp"
#include "test_util.hpp"

using namespace mitl;

namespace {

Configuration conf(std::vector<IState> sts) { return Configuration::normalize(std::move(sts)); }

IState st(LocationId l, long long lo_num, long long lo_den, long long hi_num, long long hi_den) {
    return {l, TimePoint(lo_num, lo_den), TimePoint(hi_num, hi_den)};
}

IState pt(LocationId l, long long num, long long den = 1) {
    return {l, TimePoint(num, den), TimePoint(num, den)};
}

}  // namespace

TEST_CASE("nbclocks") {
    CHECK(nbclocks(conf({pt(0, 0)})) == 1);
    CHECK(nbclocks(conf({st(0, 0, 1, 1, 2), pt(0, 2)})) == 3);
    // run pi'' third configuration: box at 1.9, dia at 0 and [1.7,1.8]
    CHECK(nbclocks(conf({pt(0, 19, 10), pt(1, 0), st(1, 17, 10, 18, 10)})) == 4);
}

TEST_CASE("elapse") {
    CHECK(elapse(conf({pt(0, 0)}), TimePoint(17, 10)) == conf({pt(0, 17, 10)}));
    Configuration c = conf({st(0, 1, 2, 3, 2)});
    CHECK(elapse(c, TimePoint(0)) == c);
    CHECK(elapse(conf({pt(0, 2, 10), st(1, 0, 1, 1, 10)}), TimePoint(17, 10)) ==
          conf({pt(0, 19, 10), st(1, 17, 10, 18, 10)}));
}

TEST_CASE("minimal_models on the figure automaton") {
    Ocata a = testutil::fig1_hand();
    int lb = a.letter_index("b"), la = a.letter_index("a");

    // dia-loop vs the guarded vanish on [1.5,2]: the empty model wins
    auto ms = minimal_models(a, st(1, 3, 2, 2, 1), lb);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].empty());

    // box on a spawns a copy of itself plus a reset copy in dia
    ms = minimal_models(a, pt(0, 7, 10), la);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0] == conf({pt(0, 7, 10), pt(1, 0)}));

    // guard fails at 0.5, so only the loop fires
    ms = minimal_models(a, st(1, 1, 2, 3, 2), lb);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0] == conf({st(1, 1, 2, 3, 2)}));
}

TEST_CASE("succ") {
    Ocata a = testutil::fig1_hand();
    int la = a.letter_index("a"), lb = a.letter_index("b");

    // singleton configuration: succ = its minimal models
    Configuration c0 = conf({pt(1, 3, 2)});
    CHECK(succ(a, c0, lb) == minimal_models(a, c0.states[0], lb));

    // first step of the running example
    auto s = succ(a, elapse(conf({pt(0, 0)}), TimePoint(1, 10)), la);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == conf({pt(0, 1, 10), pt(1, 0)}));

    // a blocked state yields no successor at all
    testutil::OcataBuilder b({"a"}, {"l0", "l1"}, 0, {false, false});
    b.set_delta(0, "a", TransFormula::loc(0));
    // l1 has only the default reject arc
    Configuration blocked = conf({pt(0, 0), pt(1, 0)});
    CHECK(succ(b.build(), blocked, 0).empty());
}

TEST_CASE("succ preserves the sorted-disjoint invariant") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 50; ++iter) {
        Formula f = to_nnf(testutil::random_formula(rng, 3, 2, {"a", "b"}));
        Ocata a = compile(f, {"a", "b"});
        Configuration c = conf({pt(a.initial, 0)});
        for (int step = 0; step < 4; ++step) {
            int letter = std::uniform_int_distribution<int>(0, 1)(rng);
            auto nxt = succ(a, elapse(c, TimePoint(1, 2)), letter);
            if (nxt.empty()) break;
            c = nxt[std::uniform_int_distribution<std::size_t>(0, nxt.size() - 1)(rng)];
            for (std::size_t i = 0; i + 1 < c.states.size(); ++i) {
                CHECK(c.states[i] < c.states[i + 1]);
                if (c.states[i].loc == c.states[i + 1].loc)
                    CHECK(c.states[i].hi < c.states[i + 1].lo);
            }
        }
    }
}

TEST_CASE("merge") {
    std::vector<IState> in{pt(1, 0), st(1, 3, 10, 5, 10), pt(1, 2)};
    std::vector<IState> expect{st(1, 0, 1, 5, 10), pt(1, 2)};
    CHECK(merge(in) == expect);
    std::vector<IState> single{pt(1, 1, 10)};
    CHECK(merge(single) == single);
    std::vector<IState> lone_zero{pt(1, 0)};
    CHECK(merge(lone_zero) == lone_zero);  // no second interval to group with
}

TEST_CASE("approx_fk") {
    // identity is always available at k = nbclocks(c)
    Configuration c = conf({pt(0, 2, 10), pt(1, 0), pt(1, 1, 10)});
    auto res = approx_fk(c, nbclocks(c));
    CHECK(std::find(res.begin(), res.end(), c) != res.end());

    // the grouping of the running example: dia's 0 and 0.1 merge
    Configuration grouped = conf({pt(0, 2, 10), st(1, 0, 1, 1, 10)});
    res = approx_fk(c, 4);
    CHECK(std::find(res.begin(), res.end(), grouped) != res.end());

    // fallback: 3 disjoint non-singular intervals in one location, k = 2
    Configuration wide = conf({st(0, 0, 1, 1, 1), st(0, 2, 1, 3, 1), st(0, 4, 1, 5, 1)});
    res = approx_fk(wide, 2);
    REQUIRE(res.size() == 1);
    CHECK(res[0] == conf({st(0, 0, 1, 5, 1)}));
}

TEST_CASE("approx_fk outputs obey the approximation-function conditions") {
    std::mt19937 rng(23);
    for (int iter = 0; iter < 200; ++iter) {
        // random configuration over 2 locations
        std::vector<IState> sts;
        int n = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int i = 0; i < n; ++i) {
            LocationId loc = std::uniform_int_distribution<int>(0, 1)(rng);
            long long lo = std::uniform_int_distribution<int>(0, 6)(rng);
            long long len = std::uniform_int_distribution<int>(0, 2)(rng);
            sts.push_back(st(loc, lo, 2, lo + len, 2));
        }
        Configuration c = Configuration::normalize(std::move(sts));
        std::size_t k = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
        for (const Configuration& c2 : approx_fk(c, k)) {
            bool is_fallback = nbclocks(c2) > k;
            if (!is_fallback) CHECK(nbclocks(c2) <= k);
            // every endpoint of c2 is an endpoint of c, and every interval
            // of c is inside some interval of c2
            for (const IState& s2 : c2.states) {
                bool lo_found = false, hi_found = false;
                for (const IState& s : c.states) {
                    if (s.loc != s2.loc) continue;
                    lo_found = lo_found || s.lo == s2.lo;
                    hi_found = hi_found || s.hi == s2.hi;
                }
                CHECK(lo_found);
                CHECK(hi_found);
            }
            for (const IState& s : c.states) {
                bool covered = false;
                for (const IState& s2 : c2.states)
                    covered = covered || (s.loc == s2.loc && s2.lo <= s.lo && s.hi <= s2.hi);
                CHECK(covered);
            }
        }
    }
}

TEST_CASE("fstar_k") {
    CHECK(fstar_k(parse_formula("G[0,inf) (a -> F[1,2] b)")) == 7);  // max(2*3, 7)
    CHECK(fstar_k(parse_formula("a")) == 2);                         // max(2*1, 2)
    CHECK(fstar_k(parse_formula("G[0,inf) a")) == 4);                // M=2 < 2*|L|=4
}

TEST_CASE("sub_ltl") {
    Formula f = to_nnf(parse_formula("G[0,inf) (a -> F[1,2] b)"));
    Ocata a = compile(f, {"a", "b"});
    auto ltl = sub_ltl(a);
    REQUIRE(ltl.size() == 2);  // init and the outer release
    CHECK(std::binary_search(ltl.begin(), ltl.end(), a.initial));
    for (LocationId l : ltl) {
        if (l == a.initial) continue;
        CHECK(a.location_formula[l]->kind() == FKind::Release);
    }

    Ocata b = compile(to_nnf(parse_formula("F[1,2] b")), {"a", "b"});
    CHECK(sub_ltl(b) == std::vector<LocationId>{b.initial});

    Ocata c = compile(to_nnf(parse_formula("G[0,inf) G[0,inf) a")), {"a"});
    CHECK(sub_ltl(c).size() == c.num_locations());
}

TEST_CASE("reduce") {
    Configuration c = conf({pt(0, 1, 10), pt(1, 0)});
    auto r = reduce(c, {0});
    CHECK(r.ltl_set == std::vector<LocationId>{0});
    CHECK(r.timed == conf({pt(1, 0)}));

    auto r2 = reduce(Configuration{}, {0});
    CHECK(r2.ltl_set.empty());
    CHECK(r2.timed.empty());

    auto r3 = reduce(c, {});
    CHECK(r3.ltl_set.empty());
    CHECK(r3.timed == c);
}

// ----------------------------------------------------------------------------
// Approximation soundness at prefix level: configurations reachable with F^k
// steps coarsen configurations reachable with the identity approximation,
// checked by brute-force enumeration of both reachability sets.
// ----------------------------------------------------------------------------

namespace {

using ReachSet = std::set<Configuration>;

ReachSet reach_exact(const Ocata& a, const std::vector<std::pair<TimePoint, int>>& word) {
    ReachSet cur{Configuration::normalize({{a.initial, TimePoint(0), TimePoint(0)}})};
    for (const auto& [t, letter] : word) {
        ReachSet nxt;
        for (const Configuration& c : cur)
            for (const Configuration& c2 : succ(a, elapse(c, t), letter)) nxt.insert(c2);
        cur = std::move(nxt);
    }
    return cur;
}

ReachSet reach_approx(const Ocata& a, const std::vector<std::pair<TimePoint, int>>& word,
                      std::size_t k) {
    ReachSet cur{Configuration::normalize({{a.initial, TimePoint(0), TimePoint(0)}})};
    for (const auto& [t, letter] : word) {
        ReachSet nxt;
        for (const Configuration& c : cur)
            for (const Configuration& c2 : succ(a, elapse(c, t), letter))
                for (const Configuration& c3 : approx_fk(c2, k)) nxt.insert(c3);
        cur = std::move(nxt);
    }
    return cur;
}

bool coarsens(const Configuration& exact, const Configuration& apx) {
    // (ii): every exact interval lies inside an approximate one
    for (const IState& s : exact.states) {
        bool in = false;
        for (const IState& s2 : apx.states)
            in = in || (s.loc == s2.loc && s2.lo <= s.lo && s.hi <= s2.hi);
        if (!in) return false;
    }
    // (iii): approximate endpoints are exact endpoints
    for (const IState& s2 : apx.states) {
        bool lo_ok = false, hi_ok = false;
        for (const IState& s : exact.states) {
            if (s.loc != s2.loc) continue;
            lo_ok = lo_ok || s.lo == s2.lo;
            hi_ok = hi_ok || s.hi == s2.hi;
        }
        if (!lo_ok || !hi_ok) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("approximated reachability coarsens exact reachability") {
    std::mt19937 rng(31);
    const std::vector<TimePoint> delays{TimePoint(0), TimePoint(1, 2), TimePoint(1),
                                        TimePoint(3, 2)};
    int automata = 0;
    while (automata < 8) {
        Formula f = to_nnf(testutil::random_formula(rng, 3, 2, {"a", "b"}));
        if (formula_size(f) == 0) continue;
        ++automata;
        Ocata a = compile(f, {"a", "b"});
        std::size_t k = 2 * a.num_locations();
        for (int w = 0; w < 20; ++w) {
            std::vector<std::pair<TimePoint, int>> word;
            int len = std::uniform_int_distribution<int>(1, 5)(rng);
            for (int i = 0; i < len; ++i)
                word.push_back({delays[std::uniform_int_distribution<std::size_t>(
                                    0, delays.size() - 1)(rng)],
                                std::uniform_int_distribution<int>(0, 1)(rng)});
            ReachSet exact = reach_exact(a, word);
            ReachSet apx = reach_approx(a, word, k);
            for (const Configuration& c2 : apx) {
                bool ok = false;
                for (const Configuration& c : exact) ok = ok || coarsens(c, c2);
                CHECK(ok);
            }
        }
    }
}
