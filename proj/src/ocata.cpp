// ============================================================================
// ocata.cpp — OCATA model, MITL compilation, DNF normalization, dualization
// ============================================================================

#include "mitl/ocata.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace mitl {

// ============================================================================
// ClockConstraint
// ============================================================================

std::string ClockConstraint::text(const std::string& clock) const {
    static const char* ops[] = {"<", "<=", ">", ">="};
    return clock + ops[op] + std::to_string(bound);
}

// ============================================================================
// Arc
// ============================================================================

bool Arc::operator==(const Arc& o) const {
    return verdict == o.verdict && guard == o.guard && targets_keep == o.targets_keep &&
           targets_reset == o.targets_reset;
}

bool Arc::operator<(const Arc& o) const {
    if (verdict != o.verdict) return verdict < o.verdict;
    if (targets_keep != o.targets_keep) return targets_keep < o.targets_keep;
    if (targets_reset != o.targets_reset) return targets_reset < o.targets_reset;
    return guard < o.guard;
}

std::string Arc::text(const std::vector<std::string>& loc_names) const {
    if (verdict == Reject) return "REJECT";
    std::string body;
    bool first = true;
    auto sep = [&] {
        if (!first) body += " & ";
        first = false;
    };
    for (auto c : guard) {
        sep();
        body += c.text();
    }
    for (auto l : targets_keep) {
        sep();
        body += loc_names[l];
    }
    for (auto l : targets_reset) {
        sep();
        body += "x." + loc_names[l];
    }
    if (verdict == AcceptAll) return body.empty() ? "ACCEPT" : "ACCEPT if " + body;
    return body;
}

// ============================================================================
// TransFormula
// ============================================================================

TransFormula TransFormula::make(Node n) {
    return TransFormula(std::make_shared<const Node>(std::move(n)));
}

TransFormula TransFormula::tt() { return make({True}); }
TransFormula TransFormula::ff() { return make({False}); }

TransFormula TransFormula::loc(LocationId l) {
    Node n{Loc};
    n.loc = l;
    return make(std::move(n));
}

TransFormula TransFormula::reset_loc(LocationId l) {
    Node n{ResetLoc};
    n.loc = l;
    return make(std::move(n));
}

TransFormula TransFormula::constr(ClockConstraint c) {
    Node n{Constr};
    n.cc = c;
    return make(std::move(n));
}

TransFormula TransFormula::conj(TransFormula a, TransFormula b) {
    Node n{And};
    n.children = {std::move(a), std::move(b)};
    return make(std::move(n));
}

TransFormula TransFormula::disj(TransFormula a, TransFormula b) {
    Node n{Or};
    n.children = {std::move(a), std::move(b)};
    return make(std::move(n));
}

namespace {

// 0 ~ c, the result of resetting a clock constraint.
bool zero_satisfies(const ClockConstraint& c) {
    switch (c.op) {
        case ClockConstraint::LT: return 0 < c.bound;
        case ClockConstraint::LE: return true;
        case ClockConstraint::GT: return false;
        case ClockConstraint::GE: return c.bound == 0;
    }
    return false;
}

}  // namespace

TransFormula TransFormula::reset(const TransFormula& g) {
    switch (g.kind()) {
        case True:
        case False:
        case ResetLoc:
            return g;
        case Loc: return reset_loc(g.location());
        case Constr: return zero_satisfies(g.constraint()) ? tt() : ff();
        case And: return conj(reset(g.child(0)), reset(g.child(1)));
        case Or: return disj(reset(g.child(0)), reset(g.child(1)));
    }
    return g;
}

TransFormula TransFormula::dual() const {
    switch (kind()) {
        case True: return ff();
        case False: return tt();
        case Loc:
        case ResetLoc:
            return *this;
        case Constr: {
            ClockConstraint c = constraint();
            switch (c.op) {
                case ClockConstraint::LT: c.op = ClockConstraint::GE; break;
                case ClockConstraint::LE: c.op = ClockConstraint::GT; break;
                case ClockConstraint::GT: c.op = ClockConstraint::LE; break;
                case ClockConstraint::GE: c.op = ClockConstraint::LT; break;
            }
            return constr(c);
        }
        case And: return disj(child(0).dual(), child(1).dual());
        case Or: return conj(child(0).dual(), child(1).dual());
    }
    return *this;
}

// ============================================================================
// DNF
// ============================================================================

namespace {

// A disjunct under construction.  Guards are kept canonical as one lower and
// one upper bound; `sat` goes false when they contradict.
struct Disjunct {
    std::set<LocationId> keeps;
    std::set<LocationId> resets;
    bool has_lower = false, has_upper = false;
    std::uint64_t lo = 0, hi = 0;
    bool lo_strict = false, hi_strict = false;  // lo: x > lo vs x >= lo
    bool sat = true;

    void add_constraint(const ClockConstraint& c) {
        if (!sat) return;
        switch (c.op) {
            case ClockConstraint::GE:
                if (c.bound == 0) return;  // trivially true on clocks
                merge_lower(c.bound, false);
                return;
            case ClockConstraint::GT: merge_lower(c.bound, true); return;
            case ClockConstraint::LE: merge_upper(c.bound, false); return;
            case ClockConstraint::LT:
                if (c.bound == 0) {
                    sat = false;  // x < 0 is empty on clocks
                    return;
                }
                merge_upper(c.bound, true);
                return;
        }
    }

    void merge_lower(std::uint64_t v, bool strict) {
        if (!has_lower || v > lo || (v == lo && strict && !lo_strict)) {
            has_lower = true;
            lo = v;
            lo_strict = strict;
        }
        check();
    }

    void merge_upper(std::uint64_t v, bool strict) {
        if (!has_upper || v < hi || (v == hi && strict && !hi_strict)) {
            has_upper = true;
            hi = v;
            hi_strict = strict;
        }
        check();
    }

    void check() {
        if (has_lower && has_upper) {
            if (lo > hi || (lo == hi && (lo_strict || hi_strict))) sat = false;
        }
    }

    std::vector<ClockConstraint> guard() const {
        std::vector<ClockConstraint> g;
        if (has_lower)
            g.push_back({lo_strict ? ClockConstraint::GT : ClockConstraint::GE, lo});
        if (has_upper)
            g.push_back({hi_strict ? ClockConstraint::LT : ClockConstraint::LE, hi});
        return g;
    }
};

void dnf_rec(const TransFormula& tf, std::vector<Disjunct>& out) {
    switch (tf.kind()) {
        case TransFormula::True:
            out.push_back({});
            return;
        case TransFormula::False: return;
        case TransFormula::Loc: {
            Disjunct d;
            d.keeps.insert(tf.location());
            out.push_back(std::move(d));
            return;
        }
        case TransFormula::ResetLoc: {
            Disjunct d;
            d.resets.insert(tf.location());
            out.push_back(std::move(d));
            return;
        }
        case TransFormula::Constr: {
            Disjunct d;
            d.add_constraint(tf.constraint());
            if (d.sat) out.push_back(std::move(d));
            return;
        }
        case TransFormula::Or:
            dnf_rec(tf.child(0), out);
            dnf_rec(tf.child(1), out);
            return;
        case TransFormula::And: {
            std::vector<Disjunct> left, right;
            dnf_rec(tf.child(0), left);
            dnf_rec(tf.child(1), right);
            for (const auto& a : left) {
                for (const auto& b : right) {
                    Disjunct d = a;
                    d.keeps.insert(b.keeps.begin(), b.keeps.end());
                    d.resets.insert(b.resets.begin(), b.resets.end());
                    if (b.has_lower) d.merge_lower(b.lo, b.lo_strict);
                    if (b.has_upper) d.merge_upper(b.hi, b.hi_strict);
                    if (d.sat) out.push_back(std::move(d));
                }
            }
            return;
        }
    }
}

}  // namespace

namespace {

// The x-value set of a guard, as bounds for inclusion tests.
struct GuardRange {
    std::uint64_t lo = 0;
    bool lo_strict = false;
    Bound hi = Bound::infinity();
    bool hi_strict = false;
};

GuardRange guard_range(const std::vector<ClockConstraint>& g) {
    GuardRange r;
    for (auto c : g) {
        switch (c.op) {
            case ClockConstraint::GE: r.lo = c.bound; r.lo_strict = false; break;
            case ClockConstraint::GT: r.lo = c.bound; r.lo_strict = true; break;
            case ClockConstraint::LE: r.hi = Bound::finite(c.bound); r.hi_strict = false; break;
            case ClockConstraint::LT: r.hi = Bound::finite(c.bound); r.hi_strict = true; break;
        }
    }
    return r;
}

bool range_includes(const GuardRange& outer, const GuardRange& inner) {
    if (outer.lo > inner.lo) return false;
    if (outer.lo == inner.lo && outer.lo_strict && !inner.lo_strict) return false;
    if (inner.hi.is_infinite() && !outer.hi.is_infinite()) return false;
    if (!inner.hi.is_infinite() && !outer.hi.is_infinite()) {
        if (outer.hi < inner.hi) return false;
        if (outer.hi == inner.hi && outer.hi_strict && !inner.hi_strict) return false;
    }
    return true;
}

bool subset(const std::vector<LocationId>& a, const std::vector<LocationId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// a implies b as transition formulas: b's atoms are among a's and b's guard
// admits every value a's does.  Redundant disjuncts keep dualize an
// involution.
bool arc_implies(const Arc& a, const Arc& b) {
    return subset(b.targets_keep, a.targets_keep) && subset(b.targets_reset, a.targets_reset) &&
           range_includes(guard_range(b.guard), guard_range(a.guard));
}

}  // namespace

std::vector<Arc> dnf(const TransFormula& tf) {
    // Resets are already pushed onto atoms by TransFormula::reset at
    // construction time.
    std::vector<Disjunct> ds;
    dnf_rec(tf, ds);

    std::set<Arc> arcs;
    for (const auto& d : ds) {
        if (!d.sat) continue;
        Arc a;
        a.guard = d.guard();
        a.targets_keep.assign(d.keeps.begin(), d.keeps.end());
        a.targets_reset.assign(d.resets.begin(), d.resets.end());
        a.verdict = (a.targets_keep.empty() && a.targets_reset.empty()) ? Arc::AcceptAll
                                                                        : Arc::Normal;
        arcs.insert(std::move(a));
    }

    std::vector<Arc> out;
    for (const Arc& a : arcs) {
        bool redundant = false;
        for (const Arc& b : arcs) {
            if (a == b) continue;
            if (arc_implies(a, b) && !arc_implies(b, a)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) out.push_back(a);
    }
    if (out.empty()) {
        Arc rej;
        rej.verdict = Arc::Reject;
        return {rej};
    }
    return out;
}

// ============================================================================
// Ocata
// ============================================================================

int Ocata::letter_index(const std::string& s) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), s);
    if (it == alphabet.end() || *it != s)
        throw FormulaError("letter not in alphabet: " + s);
    return static_cast<int>(it - alphabet.begin());
}

std::string Ocata::dump() const {
    std::ostringstream out;
    out << "ocata cmax=" << cmax << "\n";
    out << "alphabet:";
    for (const auto& s : alphabet) out << ' ' << s;
    out << "\n";
    for (std::size_t l = 0; l < num_locations(); ++l) {
        out << "location " << location_names[l];
        if (static_cast<LocationId>(l) == initial) out << " [initial]";
        if (accepting[l]) out << " [accepting]";
        out << "\n";
        for (std::size_t s = 0; s < alphabet.size(); ++s) {
            for (const Arc& a : delta[l][s])
                out << "  " << alphabet[s] << " -> " << a.text(location_names) << "\n";
        }
    }
    return out.str();
}

// ============================================================================
// compile — the MITL -> OCATA rules
// ============================================================================

namespace {

struct Compiler {
    const std::vector<std::string>& alphabet;
    std::map<Formula, LocationId> modal_loc;

    // x in I as a conjunction of constraints; trivial bounds are dropped by
    // the DNF canonicalizer later, but we avoid emitting x>=0 and x<=inf here.
    TransFormula in_interval(const FormulaInterval& I) const {
        TransFormula t = TransFormula::tt();
        bool have = false;
        if (!(I.lo() == 0 && I.lo_closed())) {
            ClockConstraint c{I.lo_closed() ? ClockConstraint::GE : ClockConstraint::GT,
                              I.lo()};
            t = TransFormula::constr(c);
            have = true;
        }
        if (!I.hi().is_infinite()) {
            ClockConstraint c{I.hi_closed() ? ClockConstraint::LE : ClockConstraint::LT,
                              I.hi().value()};
            TransFormula u = TransFormula::constr(c);
            t = have ? TransFormula::conj(t, u) : u;
            have = true;
        }
        return t;
    }

    // x not in I, split into the two convex parts; strictness mirrors the
    // closedness of I.
    TransFormula not_in_interval(const FormulaInterval& I) const {
        TransFormula below = TransFormula::ff();
        if (!(I.lo() == 0 && I.lo_closed())) {
            ClockConstraint c{I.lo_closed() ? ClockConstraint::LT : ClockConstraint::LE,
                              I.lo()};
            below = TransFormula::constr(c);
        }
        TransFormula above = TransFormula::ff();
        if (!I.hi().is_infinite()) {
            ClockConstraint c{I.hi_closed() ? ClockConstraint::GT : ClockConstraint::GE,
                              I.hi().value()};
            above = TransFormula::constr(c);
        }
        return TransFormula::disj(below, above);
    }

    // x <= sup(I); true (dropped) when sup is infinite.
    TransFormula le_sup(const FormulaInterval& I) const {
        if (I.hi().is_infinite()) return TransFormula::tt();
        return TransFormula::constr({ClockConstraint::LE, I.hi().value()});
    }

    // x > sup(I); statically false when sup is infinite.
    TransFormula gt_sup(const FormulaInterval& I) const {
        if (I.hi().is_infinite()) return TransFormula::ff();
        return TransFormula::constr({ClockConstraint::GT, I.hi().value()});
    }

    TransFormula delta_of(const Formula& f, const std::string& sigma) {
        switch (f.kind()) {
            case FKind::True: return TransFormula::tt();
            case FKind::False: return TransFormula::ff();
            case FKind::Letter:
                return f.letter_name() == sigma ? TransFormula::tt() : TransFormula::ff();
            case FKind::NotLetter:
                return f.letter_name() == sigma ? TransFormula::ff() : TransFormula::tt();
            case FKind::And:
                return TransFormula::conj(delta_of(f.child(0), sigma),
                                          delta_of(f.child(1), sigma));
            case FKind::Or:
                return TransFormula::disj(delta_of(f.child(0), sigma),
                                          delta_of(f.child(1), sigma));
            case FKind::Until: {
                const FormulaInterval& I = f.interval();
                TransFormula fire = TransFormula::conj(
                    TransFormula::reset(delta_of(f.child(1), sigma)), in_interval(I));
                TransFormula wait = TransFormula::conj(
                    TransFormula::conj(TransFormula::reset(delta_of(f.child(0), sigma)),
                                       TransFormula::loc(modal_loc.at(f))),
                    le_sup(I));
                return TransFormula::disj(fire, wait);
            }
            case FKind::Release: {
                const FormulaInterval& I = f.interval();
                TransFormula lhs = TransFormula::disj(
                    TransFormula::reset(delta_of(f.child(1), sigma)), not_in_interval(I));
                TransFormula rhs = TransFormula::disj(
                    TransFormula::disj(TransFormula::reset(delta_of(f.child(0), sigma)),
                                       TransFormula::loc(modal_loc.at(f))),
                    gt_sup(I));
                return TransFormula::conj(lhs, rhs);
            }
            case FKind::Not:
                throw FormulaError("compile requires an NNF formula");
        }
        throw FormulaError("unreachable");
    }
};

std::uint64_t max_constant(const Formula& f) {
    std::uint64_t m = 0;
    if (f.kind() == FKind::Until || f.kind() == FKind::Release) {
        m = std::max(m, f.interval().lo());
        if (!f.interval().hi().is_infinite()) m = std::max(m, f.interval().hi().value());
    }
    for (std::size_t i = 0; i < f.arity(); ++i) m = std::max(m, max_constant(f.child(i)));
    return m;
}

}  // namespace

Ocata compile(const Formula& f, const std::vector<std::string>& alphabet) {
    if (!is_nnf(f)) throw FormulaError("compile requires an NNF formula");

    Ocata a;
    a.alphabet = alphabet;
    std::sort(a.alphabet.begin(), a.alphabet.end());
    a.alphabet.erase(std::unique(a.alphabet.begin(), a.alphabet.end()), a.alphabet.end());
    if (a.alphabet.empty()) throw FormulaError("compile requires a nonempty alphabet");
    for (const auto& l : formula_letters(f)) {
        if (!std::binary_search(a.alphabet.begin(), a.alphabet.end(), l))
            throw FormulaError("alphabet does not cover formula letter: " + l);
    }

    // Locations: phi_init plus every modal subformula, in canonical order.
    a.location_names.push_back("init");
    a.location_formula.push_back(f);
    a.location_is_init.push_back(true);
    a.accepting.push_back(false);
    a.initial = 0;

    Compiler comp{a.alphabet, {}};
    for (const Formula& s : subformulas(f)) {
        if (s.kind() == FKind::Until || s.kind() == FKind::Release) {
            LocationId id = static_cast<LocationId>(a.location_names.size());
            comp.modal_loc.emplace(s, id);
            a.location_names.push_back(s.text());
            a.location_formula.push_back(s);
            a.location_is_init.push_back(false);
            a.accepting.push_back(s.kind() == FKind::Release);
        }
    }

    a.delta.assign(a.num_locations(), {});
    for (std::size_t l = 0; l < a.num_locations(); ++l) {
        a.delta[l].resize(a.alphabet.size());
        for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
            TransFormula tf = a.location_is_init[l]
                                  ? TransFormula::reset(
                                        comp.delta_of(*a.location_formula[l], a.alphabet[s]))
                                  : comp.delta_of(*a.location_formula[l], a.alphabet[s]);
            a.delta[l][s] = dnf(tf);
            for (Arc& arc : a.delta[l][s]) arc.source = static_cast<LocationId>(l);
        }
    }

    a.cmax = max_constant(f);
    return a;
}

Ocata compile(const Formula& f) {
    std::vector<std::string> sigma = formula_letters(f);
    if (sigma.empty()) sigma.push_back("a");
    return compile(f, sigma);
}

// ============================================================================
// dualize
// ============================================================================

namespace {

TransFormula arc_to_formula(const Arc& a) {
    if (a.verdict == Arc::Reject) return TransFormula::ff();
    TransFormula t = TransFormula::tt();
    bool have = false;
    auto add = [&](TransFormula u) {
        t = have ? TransFormula::conj(t, u) : u;
        have = true;
    };
    for (auto c : a.guard) add(TransFormula::constr(c));
    for (auto l : a.targets_keep) add(TransFormula::loc(l));
    for (auto l : a.targets_reset) add(TransFormula::reset_loc(l));
    return t;
}

}  // namespace

Ocata dualize(const Ocata& a) {
    TocataPartition p = tocata_partition(a);
    if (!p.valid) throw FormulaError("dualize requires a TOCATA: " + p.violation);

    Ocata b = a;
    for (std::size_t l = 0; l < a.num_locations(); ++l) b.accepting[l] = !a.accepting[l];
    for (std::size_t l = 0; l < a.num_locations(); ++l) {
        for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
            TransFormula tf = TransFormula::ff();
            bool have = false;
            for (const Arc& arc : a.delta[l][s]) {
                TransFormula at = arc_to_formula(arc);
                tf = have ? TransFormula::disj(tf, at) : at;
                have = true;
            }
            b.delta[l][s] = dnf(tf.dual());
            for (Arc& arc : b.delta[l][s]) arc.source = static_cast<LocationId>(l);
        }
    }
    return b;
}

// ============================================================================
// tocata_partition — SCC blocks, uniform acceptance per block
// ============================================================================

TocataPartition tocata_partition(const Ocata& a) {
    const int n = static_cast<int>(a.num_locations());
    std::vector<std::set<int>> succ(n);
    for (int l = 0; l < n; ++l) {
        for (const auto& per_letter : a.delta[l]) {
            for (const Arc& arc : per_letter) {
                for (auto t : arc.targets_keep) succ[l].insert(t);
                for (auto t : arc.targets_reset) succ[l].insert(t);
            }
        }
    }

    // Iterative Tarjan.
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0, ncomp = 0;
    std::vector<std::vector<LocationId>> sccs;

    struct Frame {
        int v;
        std::set<int>::const_iterator it;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames;
        frames.push_back({root, succ[root].begin()});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.it != succ[f.v].end()) {
                int w = *f.it;
                ++f.it;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, succ[w].begin()});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    std::vector<LocationId> block;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        block.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(block.begin(), block.end());
                    sccs.push_back(std::move(block));
                    ++ncomp;
                }
            }
        }
    }

    TocataPartition out;
    // Tarjan emits components in reverse topological order; flip so that
    // predecessors come first.
    std::reverse(sccs.begin(), sccs.end());
    std::vector<int> remap(ncomp);
    for (int i = 0; i < ncomp; ++i) remap[ncomp - 1 - i] = i;
    out.blocks = std::move(sccs);
    for (auto& c : comp) c = remap[c];

    std::set<std::pair<int, int>> edges;
    for (int l = 0; l < n; ++l)
        for (int w : succ[l])
            if (comp[l] != comp[w]) edges.insert({comp[l], comp[w]});
    out.order.assign(edges.begin(), edges.end());

    for (std::size_t b = 0; b < out.blocks.size(); ++b) {
        bool acc = a.accepting[out.blocks[b][0]];
        for (LocationId l : out.blocks[b]) {
            if (a.accepting[l] != acc) {
                out.valid = false;
                out.violation = "block mixes accepting and non-accepting locations ("
                                + a.location_names[out.blocks[b][0]] + ", "
                                + a.location_names[l] + ")";
                return out;
            }
        }
    }
    out.valid = true;
    return out;
}

}  // namespace mitl
