#pragma once

// Shared helpers for the test executables: seeded random formulas and small
// random OCATA used by the property suites.

#include <random>
#include <string>
#include <vector>

#include "mitl/formula.hpp"
#include "mitl/ocata.hpp"

namespace mitl::testutil {

// Builds an Ocata directly from transition formulas, for paper-figure
// automata and ad-hoc counterexamples.
struct OcataBuilder {
    Ocata a;

    OcataBuilder(std::vector<std::string> alphabet, std::vector<std::string> locations,
                 LocationId initial, std::vector<bool> accepting) {
        a.alphabet = std::move(alphabet);
        std::sort(a.alphabet.begin(), a.alphabet.end());
        a.location_names = std::move(locations);
        a.location_formula.assign(a.location_names.size(), std::nullopt);
        a.location_is_init.assign(a.location_names.size(), false);
        a.initial = initial;
        a.accepting = std::move(accepting);
        a.delta.assign(a.location_names.size(), {});
        for (auto& row : a.delta) {
            row.assign(a.alphabet.size(), dnf(TransFormula::ff()));
            for (std::size_t s = 0; s < row.size(); ++s)
                for (Arc& arc : row[s]) arc.source = 0;
        }
    }

    void set_delta(LocationId l, const std::string& letter, const TransFormula& tf) {
        int s = a.letter_index(letter);
        a.delta[l][s] = dnf(tf);
        for (Arc& arc : a.delta[l][s]) arc.source = l;
    }

    void set_cmax(std::uint64_t c) { a.cmax = c; }

    Ocata build() const { return a; }
};

// The two-location automaton of the running example in the source material:
// locations box (accepting, initial) and dia, alphabet {a,b},
//   delta(box, a) = box and x.dia          delta(box, b) = box
//   delta(dia, a) = dia                    delta(dia, b) = dia or (x>=1 and x<=2)
inline Ocata fig1_hand() {
    OcataBuilder b({"a", "b"}, {"l_box", "l_dia"}, 0, {true, false});
    b.set_delta(0, "a",
                TransFormula::conj(TransFormula::loc(0), TransFormula::reset_loc(1)));
    b.set_delta(0, "b", TransFormula::loc(0));
    b.set_delta(1, "a", TransFormula::loc(1));
    b.set_delta(1, "b",
                TransFormula::disj(
                    TransFormula::loc(1),
                    TransFormula::conj(
                        TransFormula::constr({ClockConstraint::GE, 1}),
                        TransFormula::constr({ClockConstraint::LE, 2}))));
    b.set_cmax(2);
    return b.build();
}

inline FormulaInterval random_interval(std::mt19937& rng, std::uint64_t max_const) {
    std::uniform_int_distribution<std::uint64_t> lo_d(0, max_const > 0 ? max_const - 1 : 0);
    std::uint64_t lo = lo_d(rng);
    bool inf = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
    bool lo_closed = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
    if (inf || lo >= max_const)
        return FormulaInterval::make(lo, Bound::infinity(), lo_closed, false);
    std::uniform_int_distribution<std::uint64_t> hi_d(lo + 1, max_const);
    std::uint64_t hi = hi_d(rng);
    bool hi_closed = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
    return FormulaInterval::make(lo, Bound::finite(hi), lo_closed, hi_closed);
}

// Random formula with at most `modal_budget` U/R modalities, constants below
// max_const, letters drawn from `letters`.  Negations are inserted so that
// to_nnf has work to do.
inline Formula random_formula(std::mt19937& rng, int modal_budget, std::uint64_t max_const,
                              const std::vector<std::string>& letters, int depth = 0) {
    auto coin = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    if (depth > 4 || (modal_budget == 0 && coin(2) == 0)) {
        switch (coin(4)) {
            case 0: return Formula::tt();
            case 1: return Formula::ff();
            default: return Formula::letter(letters[coin(static_cast<int>(letters.size()))]);
        }
    }
    int choice = coin(modal_budget > 0 ? 5 : 3);
    switch (choice) {
        case 0:
            return Formula::neg(random_formula(rng, modal_budget, max_const, letters, depth + 1));
        case 1: {
            int lb = modal_budget / 2;
            return Formula::conj(random_formula(rng, lb, max_const, letters, depth + 1),
                                 random_formula(rng, modal_budget - lb, max_const, letters,
                                                depth + 1));
        }
        case 2: {
            int lb = modal_budget / 2;
            return Formula::disj(random_formula(rng, lb, max_const, letters, depth + 1),
                                 random_formula(rng, modal_budget - lb, max_const, letters,
                                                depth + 1));
        }
        default: {
            int lb = (modal_budget - 1) / 2;
            Formula l = random_formula(rng, lb, max_const, letters, depth + 1);
            Formula r = random_formula(rng, modal_budget - 1 - lb, max_const, letters,
                                       depth + 1);
            FormulaInterval ivl = random_interval(rng, max_const);
            return choice == 3 ? Formula::until(ivl, l, r) : Formula::release(ivl, l, r);
        }
    }
}

}  // namespace mitl::testutil
