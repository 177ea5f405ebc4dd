#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mitl/formula.hpp"

namespace mitl {

using LocationId = int;

// ============================================================================
// Clock constraints and arcs
// ============================================================================

struct ClockConstraint {
    enum Op { LT, LE, GT, GE };
    Op op;
    std::uint64_t bound;

    bool operator==(const ClockConstraint& o) const { return op == o.op && bound == o.bound; }
    bool operator<(const ClockConstraint& o) const {
        if (op != o.op) return op < o.op;
        return bound < o.bound;
    }
    std::string text(const std::string& clock = "x") const;
};

// One disjunct of delta(l, sigma): a conjunction of location atoms, reset
// atoms and clock constraints.  An accept-all arc has no targets (the copy
// vanishes); a reject arc stands for an unsatisfiable delta entry and keeps
// the transition function total.
struct Arc {
    enum Verdict { Normal, AcceptAll, Reject };

    LocationId source = -1;
    Verdict verdict = Normal;
    std::vector<ClockConstraint> guard;     // canonical: at most one lower + one upper
    std::vector<LocationId> targets_keep;   // sorted
    std::vector<LocationId> targets_reset;  // sorted

    bool operator==(const Arc& o) const;
    bool operator<(const Arc& o) const;
    std::string text(const std::vector<std::string>& loc_names) const;
};

// ============================================================================
// Transition formulas over Gamma(L)
// ============================================================================

class TransFormula {
public:
    enum Kind { True, False, Loc, ResetLoc, Constr, And, Or };

    static TransFormula tt();
    static TransFormula ff();
    static TransFormula loc(LocationId l);
    static TransFormula reset_loc(LocationId l);
    static TransFormula constr(ClockConstraint c);
    static TransFormula conj(TransFormula a, TransFormula b);
    static TransFormula disj(TransFormula a, TransFormula b);

    // x.gamma with the distribution laws applied: resets are pushed onto
    // atoms, x.(x~c) becomes 0~c and is evaluated statically.
    static TransFormula reset(const TransFormula& g);

    // Swap and/or and T/F, negate constraints; location atoms unchanged.
    TransFormula dual() const;

    Kind kind() const { return node_->kind; }
    LocationId location() const { return node_->loc; }
    const ClockConstraint& constraint() const { return node_->cc; }
    const TransFormula& child(std::size_t i) const { return node_->children[i]; }

private:
    struct Node {
        Kind kind;
        LocationId loc = -1;
        ClockConstraint cc{ClockConstraint::LE, 0};
        std::vector<TransFormula> children;
    };
    explicit TransFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static TransFormula make(Node n);
    std::shared_ptr<const Node> node_;
};

// Flattens a transition formula into a canonical, deduplicated arc list.
// Unsatisfiable disjuncts are dropped; if nothing remains the result is a
// single reject arc, and a disjunct with no atoms left is an accept-all arc.
std::vector<Arc> dnf(const TransFormula& tf);

// ============================================================================
// Ocata
// ============================================================================

struct Ocata {
    std::vector<std::string> alphabet;        // sorted
    std::vector<std::string> location_names;  // index = LocationId
    // For compiled automata: the subformula a location stands for (the
    // initial location carries the whole formula).
    std::vector<std::optional<Formula>> location_formula;
    std::vector<bool> location_is_init;
    LocationId initial = 0;
    std::vector<bool> accepting;
    // delta[loc][letter] -> canonical arc list (never empty: reject arc at
    // minimum).
    std::vector<std::vector<std::vector<Arc>>> delta;
    std::uint64_t cmax = 0;

    int letter_index(const std::string& s) const;
    const std::vector<Arc>& arcs(LocationId l, int letter) const { return delta[l][letter]; }
    std::size_t num_locations() const { return location_names.size(); }

    // Structured-text export (location table + arc table) for golden tests.
    std::string dump() const;
};

// MITL -> OCATA translation.  f must be in NNF; the alphabet must cover the
// letters of f.
Ocata compile(const Formula& f, const std::vector<std::string>& alphabet);
Ocata compile(const Formula& f);

// The complement automaton of a TOCATA (same acceptance condition).
// Throws FormulaError if the input fails the TOCATA check.
Ocata dualize(const Ocata& a);

// ============================================================================
// TOCATA structure verification
// ============================================================================

struct TocataPartition {
    bool valid = false;
    std::string violation;
    // Blocks in topological order (successors last); for compiled automata
    // these are singletons ordered by the subformula relation.
    std::vector<std::vector<LocationId>> blocks;
    // (i, j) present when block j is reachable one step from block i
    // (block_j precedes block_i in the partial order).
    std::vector<std::pair<int, int>> order;
};

TocataPartition tocata_partition(const Ocata& a);

}  // namespace mitl
