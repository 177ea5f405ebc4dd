#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mitl {

// ============================================================================
// Errors
// ============================================================================

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

struct FormulaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ============================================================================
// Bound — a natural number or +infinity
// ============================================================================

class Bound {
public:
    static Bound finite(std::uint64_t v) { return Bound(v, false); }
    static Bound infinity() { return Bound(0, true); }

    bool is_infinite() const { return inf_; }
    std::uint64_t value() const;

    bool operator==(const Bound& o) const { return inf_ == o.inf_ && (inf_ || v_ == o.v_); }
    bool operator!=(const Bound& o) const { return !(*this == o); }
    bool operator<(const Bound& o) const;
    bool operator<=(const Bound& o) const { return *this == o || *this < o; }

    std::string text() const { return inf_ ? "inf" : std::to_string(v_); }

private:
    Bound(std::uint64_t v, bool inf) : v_(v), inf_(inf) {}
    std::uint64_t v_;
    bool inf_;
};

// ============================================================================
// FormulaInterval — the non-singular interval attached to U/R modalities
// ============================================================================

class FormulaInterval {
public:
    // Throws FormulaError on lo > hi, singular lo == hi, or a closed
    // infinite upper bound.
    static FormulaInterval make(std::uint64_t lo, Bound hi, bool lo_closed, bool hi_closed);

    std::uint64_t lo() const { return lo_; }
    Bound hi() const { return hi_; }
    bool lo_closed() const { return lo_closed_; }
    bool hi_closed() const { return hi_closed_; }

    // sup(I) - inf(I); infinite when hi is.
    Bound length() const;

    bool operator==(const FormulaInterval& o) const;
    bool operator<(const FormulaInterval& o) const;

    std::string text() const;

private:
    FormulaInterval(std::uint64_t lo, Bound hi, bool lc, bool hc)
        : lo_(lo), hi_(hi), lo_closed_(lc), hi_closed_(hc) {}
    std::uint64_t lo_;
    Bound hi_;
    bool lo_closed_;
    bool hi_closed_;
};

// ============================================================================
// Formula — immutable MITL AST
// ============================================================================

enum class FKind {
    True,
    False,
    Letter,
    NotLetter,
    And,
    Or,
    Not,
    Until,
    Release,
};

class Formula {
public:
    static Formula tt();
    static Formula ff();
    static Formula letter(const std::string& name);
    static Formula not_letter(const std::string& name);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula neg(Formula a);
    static Formula until(const FormulaInterval& ivl, Formula a, Formula b);
    static Formula release(const FormulaInterval& ivl, Formula a, Formula b);

    FKind kind() const { return node_->kind; }
    const std::string& letter_name() const { return node_->letter; }
    const FormulaInterval& interval() const { return *node_->ivl; }
    const Formula& child(std::size_t i) const { return node_->children[i]; }
    std::size_t arity() const { return node_->children.size(); }

    bool operator==(const Formula& o) const { return compare(o) == 0; }
    bool operator!=(const Formula& o) const { return compare(o) != 0; }
    bool operator<(const Formula& o) const { return compare(o) < 0; }

    int compare(const Formula& o) const;

    // Round-trippable printer; F/G sugar is restored for T U_I x / F R_I x.
    std::string text() const;

private:
    struct Node {
        FKind kind;
        std::string letter;
        std::optional<FormulaInterval> ivl;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(Node n);
    std::shared_ptr<const Node> node_;
};

// ============================================================================
// Operations
// ============================================================================

// Parses the textual grammar (see README).  Throws ParseError.
Formula parse_formula(const std::string& text);

// Negative normal form: negation pushed onto letters.
Formula to_nnf(const Formula& f);

bool is_nnf(const Formula& f);

// The set of all subformulas, per the recursive definition.
std::set<Formula> subformulas(const Formula& f);

// Number of U/R modalities.
std::size_t formula_size(const Formula& f);

// Sorted, deduplicated letters occurring in f.
std::vector<std::string> formula_letters(const Formula& f);

// Clock-copy bounds M, M^1, M^inf for an NNF formula.
struct MBounds {
    std::uint64_t m;
    std::uint64_t m1;
    std::uint64_t minf;
};

// Throws FormulaError if f is not in NNF.
MBounds m_bounds(const Formula& f);

}  // namespace mitl
