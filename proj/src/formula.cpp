// ============================================================================
// formula.cpp — MITL AST, parser, NNF, and the M(phi) bound recursion
// ============================================================================

#include "mitl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mitl {

// ============================================================================
// Bound
// ============================================================================

std::uint64_t Bound::value() const {
    if (inf_) throw FormulaError("value() on infinite bound");
    return v_;
}

bool Bound::operator<(const Bound& o) const {
    if (inf_) return false;
    if (o.inf_) return true;
    return v_ < o.v_;
}

// ============================================================================
// FormulaInterval
// ============================================================================

FormulaInterval FormulaInterval::make(std::uint64_t lo, Bound hi, bool lo_closed,
                                      bool hi_closed) {
    if (hi.is_infinite()) {
        if (hi_closed) throw FormulaError("infinite upper bound must be open");
    } else {
        if (hi.value() < lo) throw FormulaError("interval lower bound exceeds upper bound");
        if (hi.value() == lo) throw FormulaError("singular interval");
    }
    return FormulaInterval(lo, hi, lo_closed, hi_closed);
}

Bound FormulaInterval::length() const {
    if (hi_.is_infinite()) return Bound::infinity();
    return Bound::finite(hi_.value() - lo_);
}

bool FormulaInterval::operator==(const FormulaInterval& o) const {
    return lo_ == o.lo_ && hi_ == o.hi_ && lo_closed_ == o.lo_closed_ &&
           hi_closed_ == o.hi_closed_;
}

bool FormulaInterval::operator<(const FormulaInterval& o) const {
    if (lo_ != o.lo_) return lo_ < o.lo_;
    if (hi_ != o.hi_) return hi_ < o.hi_;
    if (lo_closed_ != o.lo_closed_) return lo_closed_;
    if (hi_closed_ != o.hi_closed_) return hi_closed_;
    return false;
}

std::string FormulaInterval::text() const {
    std::string s;
    s += lo_closed_ ? '[' : '(';
    s += std::to_string(lo_);
    s += ',';
    s += hi_.text();
    s += hi_closed_ ? ']' : ')';
    return s;
}

// ============================================================================
// Formula construction
// ============================================================================

Formula Formula::make(Node n) {
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::tt() { return make({FKind::True, "", std::nullopt, {}}); }
Formula Formula::ff() { return make({FKind::False, "", std::nullopt, {}}); }

Formula Formula::letter(const std::string& name) {
    return make({FKind::Letter, name, std::nullopt, {}});
}

Formula Formula::not_letter(const std::string& name) {
    return make({FKind::NotLetter, name, std::nullopt, {}});
}

Formula Formula::conj(Formula a, Formula b) {
    return make({FKind::And, "", std::nullopt, {std::move(a), std::move(b)}});
}

Formula Formula::disj(Formula a, Formula b) {
    return make({FKind::Or, "", std::nullopt, {std::move(a), std::move(b)}});
}

Formula Formula::neg(Formula a) {
    // A negated atom is stored in its NNF form directly; "!a" then prints
    // and reparses to the same tree.
    if (a.kind() == FKind::Letter) return not_letter(a.letter_name());
    return make({FKind::Not, "", std::nullopt, {std::move(a)}});
}

Formula Formula::until(const FormulaInterval& ivl, Formula a, Formula b) {
    return make({FKind::Until, "", ivl, {std::move(a), std::move(b)}});
}

Formula Formula::release(const FormulaInterval& ivl, Formula a, Formula b) {
    return make({FKind::Release, "", ivl, {std::move(a), std::move(b)}});
}

int Formula::compare(const Formula& o) const {
    if (node_ == o.node_) return 0;
    if (node_->kind != o.node_->kind)
        return static_cast<int>(node_->kind) < static_cast<int>(o.node_->kind) ? -1 : 1;
    if (node_->letter != o.node_->letter) return node_->letter < o.node_->letter ? -1 : 1;
    if (node_->ivl.has_value()) {
        if (*node_->ivl < *o.node_->ivl) return -1;
        if (*o.node_->ivl < *node_->ivl) return 1;
    }
    for (std::size_t i = 0; i < node_->children.size(); ++i) {
        int c = node_->children[i].compare(o.node_->children[i]);
        if (c != 0) return c;
    }
    return 0;
}

// ============================================================================
// Printer
// ============================================================================
//
// Precedence: atoms/unary (4) > U/R (3) > & (2) > | (1).  Implication is
// never printed (it is eliminated at parse time).  U/R associate to the
// right.

namespace {

int precedence(const Formula& f) {
    switch (f.kind()) {
        case FKind::Or: return 1;
        case FKind::And: return 2;
        case FKind::Until:
        case FKind::Release:
            // F/G sugar prints as a unary operator
            if (f.kind() == FKind::Until && f.child(0).kind() == FKind::True) return 4;
            if (f.kind() == FKind::Release && f.child(0).kind() == FKind::False) return 4;
            return 3;
        default: return 4;
    }
}

void print_rec(const Formula& f, std::ostringstream& out);

void print_child(const Formula& c, int parent_prec, bool allow_equal,
                 std::ostringstream& out) {
    int p = precedence(c);
    bool parens = allow_equal ? (p < parent_prec) : (p <= parent_prec);
    if (parens) out << '(';
    print_rec(c, out);
    if (parens) out << ')';
}

void print_rec(const Formula& f, std::ostringstream& out) {
    switch (f.kind()) {
        case FKind::True: out << "true"; return;
        case FKind::False: out << "false"; return;
        case FKind::Letter: out << f.letter_name(); return;
        case FKind::NotLetter: out << '!' << f.letter_name(); return;
        case FKind::Not:
            out << '!';
            print_child(f.child(0), 4, true, out);
            return;
        case FKind::And:
            print_child(f.child(0), 2, true, out);
            out << " & ";
            print_child(f.child(1), 2, false, out);
            return;
        case FKind::Or:
            print_child(f.child(0), 1, true, out);
            out << " | ";
            print_child(f.child(1), 1, false, out);
            return;
        case FKind::Until:
            if (f.child(0).kind() == FKind::True) {
                out << 'F' << f.interval().text() << ' ';
                print_child(f.child(1), 4, true, out);
                return;
            }
            print_child(f.child(0), 3, false, out);
            out << " U" << f.interval().text() << ' ';
            print_child(f.child(1), 3, true, out);
            return;
        case FKind::Release:
            if (f.child(0).kind() == FKind::False) {
                out << 'G' << f.interval().text() << ' ';
                print_child(f.child(1), 4, true, out);
                return;
            }
            print_child(f.child(0), 3, false, out);
            out << " R" << f.interval().text() << ' ';
            print_child(f.child(1), 3, true, out);
            return;
    }
}

}  // namespace

std::string Formula::text() const {
    std::ostringstream out;
    print_rec(*this, out);
    return out.str();
}

// ============================================================================
// Parser
// ============================================================================
//
// formula     := disjunction ('->' formula)?          (right assoc, sugar)
// disjunction := conjunction ('|' conjunction)*
// conjunction := untilexpr ('&' untilexpr)*
// untilexpr   := unary (('U'|'R') interval? untilexpr)?
// unary       := '!' unary | ('F'|'G') interval? unary | primary
// primary     := '(' formula ')' | 'true' | 'false' | IDENT
// interval    := ('['|'(') INT ',' (INT|'inf') (']'|')')
//
// A missing interval after a modality defaults to [0,inf).

namespace {

struct Lexer {
    explicit Lexer(const std::string& s) : src(s) {}

    const std::string& src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    char peek_raw_at(std::size_t p) const { return p < src.size() ? src[p] : '\0'; }

    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool eat_arrow() {
        skip_ws();
        if (pos + 1 < src.size() && src[pos] == '-' && src[pos + 1] == '>') {
            pos += 2;
            return true;
        }
        return false;
    }

    // Returns the identifier/keyword starting at the cursor, or "".
    std::string peek_word() {
        skip_ws();
        std::size_t p = pos;
        if (p >= src.size()) return "";
        char c = src[p];
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return "";
        std::string w;
        while (p < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_')) {
            w += src[p++];
        }
        return w;
    }

    void eat_word(const std::string& w) { pos += w.size(); }

    std::uint64_t parse_nat() {
        skip_ws();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw ParseError("expected a natural number", pos);
        std::uint64_t v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + static_cast<std::uint64_t>(src[pos] - '0');
            ++pos;
        }
        return v;
    }
};

bool is_reserved(const std::string& w) {
    return w == "true" || w == "false" || w == "inf" || w == "F" || w == "G" ||
           w == "U" || w == "R";
}

// An opening '(' starts an interval only when followed by digits and a comma.
bool starts_interval(Lexer& lx) {
    char c = lx.peek();
    if (c == '[') return true;
    if (c != '(') return false;
    std::size_t p = lx.pos + 1;
    while (lx.peek_raw_at(p) == ' ') ++p;
    if (!std::isdigit(static_cast<unsigned char>(lx.peek_raw_at(p)))) return false;
    while (std::isdigit(static_cast<unsigned char>(lx.peek_raw_at(p)))) ++p;
    while (lx.peek_raw_at(p) == ' ') ++p;
    return lx.peek_raw_at(p) == ',';
}

FormulaInterval parse_interval_opt(Lexer& lx) {
    if (!starts_interval(lx))
        return FormulaInterval::make(0, Bound::infinity(), true, false);
    std::size_t start = lx.pos;
    bool lo_closed = lx.eat('[');
    if (!lo_closed) lx.eat('(');
    std::uint64_t lo = lx.parse_nat();
    if (!lx.eat(',')) throw ParseError("expected ',' in interval", lx.pos);
    Bound hi = Bound::infinity();
    if (lx.peek_word() == "inf") {
        lx.eat_word("inf");
    } else {
        hi = Bound::finite(lx.parse_nat());
    }
    bool hi_closed;
    if (lx.eat(']')) {
        hi_closed = true;
    } else if (lx.eat(')')) {
        hi_closed = false;
    } else {
        throw ParseError("expected ']' or ')' closing interval", lx.pos);
    }
    try {
        return FormulaInterval::make(lo, hi, lo_closed, hi_closed);
    } catch (const FormulaError& e) {
        throw ParseError(e.what(), start);
    }
}

Formula parse_formula_rec(Lexer& lx);

Formula parse_primary(Lexer& lx) {
    if (lx.eat('(')) {
        Formula f = parse_formula_rec(lx);
        if (!lx.eat(')')) throw ParseError("expected ')'", lx.pos);
        return f;
    }
    std::string w = lx.peek_word();
    if (w == "true") {
        lx.eat_word(w);
        return Formula::tt();
    }
    if (w == "false") {
        lx.eat_word(w);
        return Formula::ff();
    }
    if (!w.empty() && !is_reserved(w)) {
        lx.eat_word(w);
        return Formula::letter(w);
    }
    throw ParseError("expected a formula", lx.pos);
}

Formula parse_unary(Lexer& lx) {
    if (lx.eat('!')) return Formula::neg(parse_unary(lx));
    std::string w = lx.peek_word();
    if (w == "F") {
        lx.eat_word(w);
        FormulaInterval ivl = parse_interval_opt(lx);
        return Formula::until(ivl, Formula::tt(), parse_unary(lx));
    }
    if (w == "G") {
        lx.eat_word(w);
        FormulaInterval ivl = parse_interval_opt(lx);
        return Formula::release(ivl, Formula::ff(), parse_unary(lx));
    }
    return parse_primary(lx);
}

Formula parse_until(Lexer& lx) {
    Formula l = parse_unary(lx);
    std::string w = lx.peek_word();
    if (w == "U" || w == "R") {
        lx.eat_word(w);
        FormulaInterval ivl = parse_interval_opt(lx);
        Formula r = parse_until(lx);
        return w == "U" ? Formula::until(ivl, l, r) : Formula::release(ivl, l, r);
    }
    return l;
}

Formula parse_and(Lexer& lx) {
    Formula l = parse_until(lx);
    while (true) {
        lx.skip_ws();
        if (lx.peek() == '&') {
            lx.eat('&');
            l = Formula::conj(l, parse_until(lx));
        } else {
            return l;
        }
    }
}

Formula parse_or(Lexer& lx) {
    Formula l = parse_and(lx);
    while (true) {
        lx.skip_ws();
        // '|' but also guard against future '||'
        if (lx.peek() == '|') {
            lx.eat('|');
            l = Formula::disj(l, parse_and(lx));
        } else {
            return l;
        }
    }
}

Formula parse_formula_rec(Lexer& lx) {
    Formula l = parse_or(lx);
    if (lx.eat_arrow()) {
        Formula r = parse_formula_rec(lx);
        return Formula::disj(Formula::neg(l), r);
    }
    return l;
}

}  // namespace

Formula parse_formula(const std::string& text) {
    Lexer lx(text);
    Formula f = parse_formula_rec(lx);
    lx.skip_ws();
    if (lx.pos != text.size()) throw ParseError("unexpected trailing input", lx.pos);
    return f;
}

// ============================================================================
// NNF
// ============================================================================

namespace {

Formula nnf_pos(const Formula& f);

Formula nnf_neg(const Formula& f) {
    switch (f.kind()) {
        case FKind::True: return Formula::ff();
        case FKind::False: return Formula::tt();
        case FKind::Letter: return Formula::not_letter(f.letter_name());
        case FKind::NotLetter: return Formula::letter(f.letter_name());
        case FKind::Not: return nnf_pos(f.child(0));
        case FKind::And: return Formula::disj(nnf_neg(f.child(0)), nnf_neg(f.child(1)));
        case FKind::Or: return Formula::conj(nnf_neg(f.child(0)), nnf_neg(f.child(1)));
        case FKind::Until:
            return Formula::release(f.interval(), nnf_neg(f.child(0)), nnf_neg(f.child(1)));
        case FKind::Release:
            return Formula::until(f.interval(), nnf_neg(f.child(0)), nnf_neg(f.child(1)));
    }
    throw FormulaError("unreachable");
}

Formula nnf_pos(const Formula& f) {
    switch (f.kind()) {
        case FKind::True:
        case FKind::False:
        case FKind::Letter:
        case FKind::NotLetter:
            return f;
        case FKind::Not: return nnf_neg(f.child(0));
        case FKind::And: return Formula::conj(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
        case FKind::Or: return Formula::disj(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
        case FKind::Until:
            return Formula::until(f.interval(), nnf_pos(f.child(0)), nnf_pos(f.child(1)));
        case FKind::Release:
            return Formula::release(f.interval(), nnf_pos(f.child(0)), nnf_pos(f.child(1)));
    }
    throw FormulaError("unreachable");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf_pos(f); }

bool is_nnf(const Formula& f) {
    if (f.kind() == FKind::Not) return false;
    for (std::size_t i = 0; i < f.arity(); ++i)
        if (!is_nnf(f.child(i))) return false;
    return true;
}

// ============================================================================
// Subformulas, size, letters
// ============================================================================

namespace {

void collect_sub(const Formula& f, std::set<Formula>& out) {
    out.insert(f);
    switch (f.kind()) {
        case FKind::NotLetter:
            out.insert(Formula::letter(f.letter_name()));
            return;
        case FKind::Not:
        case FKind::And:
        case FKind::Or:
        case FKind::Until:
        case FKind::Release:
            for (std::size_t i = 0; i < f.arity(); ++i) collect_sub(f.child(i), out);
            return;
        default: return;
    }
}

}  // namespace

std::set<Formula> subformulas(const Formula& f) {
    std::set<Formula> out;
    collect_sub(f, out);
    return out;
}

std::size_t formula_size(const Formula& f) {
    std::size_t n = (f.kind() == FKind::Until || f.kind() == FKind::Release) ? 1 : 0;
    for (std::size_t i = 0; i < f.arity(); ++i) n += formula_size(f.child(i));
    return n;
}

std::vector<std::string> formula_letters(const Formula& f) {
    std::set<std::string> s;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (g.kind() == FKind::Letter || g.kind() == FKind::NotLetter)
            s.insert(g.letter_name());
        for (std::size_t i = 0; i < g.arity(); ++i) stack.push_back(g.child(i));
    }
    return {s.begin(), s.end()};
}

// ============================================================================
// M(phi) recursion
// ============================================================================
//
// Ceiling conventions: ceil(x/inf) = 0 for finite x, ceil(inf/inf) = 1.
// T and F behave like letters (M = 2, M^1 = M^inf = 0).

namespace {

std::uint64_t ceil_div(Bound num, Bound den) {
    if (den.is_infinite()) return num.is_infinite() ? 1 : 0;
    if (num.is_infinite()) throw FormulaError("finite interval with infinite endpoint");
    std::uint64_t d = den.value();
    return (num.value() + d - 1) / d;
}

MBounds mb_rec(const Formula& f) {
    switch (f.kind()) {
        case FKind::True:
        case FKind::False:
        case FKind::Letter:
        case FKind::NotLetter:
            return {2, 0, 0};
        case FKind::Not:
            throw FormulaError("formula not in NNF");
        case FKind::And: {
            MBounds a = mb_rec(f.child(0)), b = mb_rec(f.child(1));
            return {std::max<std::uint64_t>(2, a.m1 + b.m1), a.m1 + b.m1, a.minf + b.minf};
        }
        case FKind::Or: {
            MBounds a = mb_rec(f.child(0)), b = mb_rec(f.child(1));
            return {std::max({std::uint64_t(2), a.m1, b.m1}), std::max(a.m1, b.m1),
                    std::max(a.minf, b.minf)};
        }
        case FKind::Until: {
            MBounds a = mb_rec(f.child(0)), b = mb_rec(f.child(1));
            const FormulaInterval& I = f.interval();
            std::uint64_t term = 4 * ceil_div(Bound::finite(I.lo()), I.length()) + 2;
            return {std::max<std::uint64_t>(2, a.minf + b.m1 + 1), a.minf + b.m1 + 1,
                    term + a.minf + b.minf};
        }
        case FKind::Release: {
            MBounds a = mb_rec(f.child(0)), b = mb_rec(f.child(1));
            const FormulaInterval& I = f.interval();
            std::uint64_t term = 2 * ceil_div(I.hi(), I.length()) + 2;
            return {std::max<std::uint64_t>(2, a.m1 + b.minf + 1), a.m1 + b.minf + 1,
                    term + a.minf + b.minf};
        }
    }
    throw FormulaError("unreachable");
}

}  // namespace

MBounds m_bounds(const Formula& f) { return mb_rec(f); }

}  // namespace mitl
