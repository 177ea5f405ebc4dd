#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mitl/formula.hpp"
#include "test_util.hpp"

using namespace mitl;

namespace {

FormulaInterval ivl(std::uint64_t lo, std::uint64_t hi, bool lc = true, bool hc = true) {
    return FormulaInterval::make(lo, Bound::finite(hi), lc, hc);
}

FormulaInterval ivl_inf(std::uint64_t lo = 0, bool lc = true) {
    return FormulaInterval::make(lo, Bound::infinity(), lc, false);
}

}  // namespace

TEST_CASE("parse: box/diamond sugar expands to release/until") {
    Formula f = parse_formula("G[0,inf) (a -> F[1,2] b)");
    // G I x == false R I x; a -> b == !a | b; F I x == true U I x
    Formula expect = Formula::release(
        ivl_inf(), Formula::ff(),
        Formula::disj(Formula::neg(Formula::letter("a")),
                      Formula::until(ivl(1, 2), Formula::tt(), Formula::letter("b"))));
    CHECK(f == expect);
}

TEST_CASE("parse: true") {
    CHECK(parse_formula("true") == Formula::tt());
    CHECK(parse_formula("  false ") == Formula::ff());
}

TEST_CASE("parse: singular interval rejected") {
    CHECK_THROWS_AS(parse_formula("a U[2,2] b"), ParseError);
    CHECK_THROWS_AS(parse_formula("a U[2,2) b"), ParseError);
    CHECK_THROWS_AS(parse_formula("F[3,2] b"), ParseError);
}

TEST_CASE("parse: syntax errors carry a position") {
    try {
        parse_formula("a & ");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
    CHECK_THROWS_AS(parse_formula("(a | b"), ParseError);
    CHECK_THROWS_AS(parse_formula("a b"), ParseError);
    CHECK_THROWS_AS(parse_formula("U a b"), ParseError);
}

TEST_CASE("parse: missing interval defaults to [0,inf)") {
    CHECK(parse_formula("F a") == parse_formula("F[0,inf) a"));
    CHECK(parse_formula("a U b") == parse_formula("a U[0,inf) b"));
}

TEST_CASE("parse: precedence and associativity") {
    // modal > & > | ; U is right-associative
    CHECK(parse_formula("F[1,2] a & b") ==
          Formula::conj(Formula::until(ivl(1, 2), Formula::tt(), Formula::letter("a")),
                        Formula::letter("b")));
    CHECK(parse_formula("a U b U c") == parse_formula("a U (b U c)"));
    CHECK(parse_formula("a | b & c") ==
          Formula::disj(Formula::letter("a"),
                        Formula::conj(Formula::letter("b"), Formula::letter("c"))));
    // '(' starting an interval vs a parenthesized operand
    CHECK(parse_formula("F(1,2] b") ==
          Formula::until(FormulaInterval::make(1, Bound::finite(2), false, true),
                         Formula::tt(), Formula::letter("b")));
    CHECK(parse_formula("F (b)") == parse_formula("F[0,inf) b"));
}

TEST_CASE("to_nnf: negated box/diamond example") {
    // !(G (p -> F[2,3] q))  ==>  true U[0,inf) (p & (false R[2,3] !q))
    Formula f = Formula::neg(parse_formula("G[0,inf) (p -> F[2,3] q)"));
    Formula expect = Formula::until(
        ivl_inf(), Formula::tt(),
        Formula::conj(Formula::letter("p"),
                      Formula::release(ivl(2, 3), Formula::ff(),
                                       Formula::not_letter("q"))));
    CHECK(to_nnf(f) == expect);
}

TEST_CASE("to_nnf: double negation") {
    CHECK(to_nnf(parse_formula("!!a")) == Formula::letter("a"));
}

TEST_CASE("to_nnf: conjunction with diamond") {
    // !(a & F[1,2] b) ==> !a | (false R[1,2] !b)
    Formula f = parse_formula("!(a & F[1,2] b)");
    Formula expect = Formula::disj(
        Formula::not_letter("a"),
        Formula::release(ivl(1, 2), Formula::ff(), Formula::not_letter("b")));
    CHECK(to_nnf(f) == expect);
}

TEST_CASE("to_nnf: idempotent on random formulas") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 300; ++i) {
        Formula f = testutil::random_formula(rng, 3, 4, {"a", "b", "c"});
        Formula n = to_nnf(f);
        CHECK(is_nnf(n));
        CHECK(to_nnf(n) == n);
    }
}

TEST_CASE("parse/print round trip") {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        Formula f = testutil::random_formula(rng, 3, 4, {"a", "b", "c"});
        CHECK(parse_formula(f.text()) == f);
        Formula n = to_nnf(f);
        CHECK(parse_formula(n.text()) == n);
    }
}

TEST_CASE("subformulas") {
    Formula a = Formula::letter("a");
    CHECK(subformulas(a) == std::set<Formula>{a});

    Formula u = Formula::until(ivl(1, 2), Formula::letter("a"), Formula::letter("b"));
    CHECK(subformulas(u) == std::set<Formula>{u, Formula::letter("a"), Formula::letter("b")});

    Formula na = Formula::neg(a);
    CHECK(subformulas(na) == std::set<Formula>{na, a});
    // NNF negated letters also contribute the plain letter
    Formula nla = Formula::not_letter("a");
    CHECK(subformulas(nla) == std::set<Formula>{nla, a});
}

TEST_CASE("formula_size counts modalities") {
    CHECK(formula_size(parse_formula("a")) == 0);
    CHECK(formula_size(to_nnf(parse_formula("G[0,inf) (a -> F[1,2] b)"))) == 2);
    CHECK(formula_size(parse_formula("a U b U c")) == 2);
    CHECK(formula_size(parse_formula("F a & G b")) == 2);
}

TEST_CASE("m_bounds: letters and constants") {
    MBounds mb = m_bounds(parse_formula("a"));
    CHECK(mb.m == 2);
    CHECK(mb.m1 == 0);
    CHECK(mb.minf == 0);
    // T and F behave like letters
    mb = m_bounds(parse_formula("true"));
    CHECK(mb.m == 2);
    mb = m_bounds(parse_formula("false"));
    CHECK(mb.m == 2);
}

TEST_CASE("m_bounds: diamond [1,2]") {
    // F[1,2] b == true U[1,2] b: m=2, m1=1, minf=4*ceil(1/1)+2=6
    MBounds mb = m_bounds(parse_formula("F[1,2] b"));
    CHECK(mb.m == 2);
    CHECK(mb.m1 == 1);
    CHECK(mb.minf == 6);
}

TEST_CASE("m_bounds: NNF of box(a -> diamond[1,2] b)") {
    Formula f = to_nnf(parse_formula("G[0,inf) (a -> F[1,2] b)"));
    MBounds mb = m_bounds(f);
    CHECK(mb.m == 7);  // max{2, 0 + (6) + 1}
}

TEST_CASE("m_bounds: rejects non-NNF input") {
    CHECK_THROWS_AS(m_bounds(parse_formula("!(a & b)")), FormulaError);
}

TEST_CASE("m_bounds properties on random corpus") {
    std::mt19937 rng(99);
    for (int i = 0; i < 300; ++i) {
        Formula f = testutil::random_formula(rng, 3, 4, {"a", "b"});
        Formula n = to_nnf(f);
        MBounds mb = m_bounds(n);
        CHECK(mb.m >= 2);
        CHECK(mb.m >= mb.m1);

        // Footnote bound: m <= size * max over intervals of
        // (4*ceil(inf/|I|)+2, 2*ceil(sup/|I|)+2), with ceil(x/inf)=0 and
        // ceil(inf/inf)=1.  Only meaningful when the formula has modalities.
        std::size_t sz = formula_size(n);
        if (sz == 0) continue;
        std::uint64_t best = 0;
        std::vector<Formula> stack{n};
        while (!stack.empty()) {
            Formula g = stack.back();
            stack.pop_back();
            if (g.kind() == FKind::Until || g.kind() == FKind::Release) {
                const FormulaInterval& I = g.interval();
                auto ceil_div = [](Bound num, Bound den) -> std::uint64_t {
                    if (den.is_infinite()) return num.is_infinite() ? 1 : 0;
                    return (num.value() + den.value() - 1) / den.value();
                };
                std::uint64_t a = 4 * ceil_div(Bound::finite(I.lo()), I.length()) + 2;
                std::uint64_t b = 2 * ceil_div(I.hi(), I.length()) + 2;
                best = std::max({best, a, b});
            }
            for (std::size_t c = 0; c < g.arity(); ++c) stack.push_back(g.child(c));
        }
        CHECK(mb.m <= sz * best);
    }
}
