#pragma once

// Abstract syntax of capacity logic programs, the `.calp` text format,
// and static validation.
//
// Grammar (clauses end with '.', '%' starts a line comment):
//
//   domain(Id,[e1,...,en]).          frame of discernment
//   mass(Id,[e1,...],M).             focal set with mass M
//   P::atom.                         probabilistic fact, 0 <= P <= 1
//   head.                            certain fact
//   head :- lit, ..., lit.           rule
//
//   lit  ::= ['\+'] atom | ['\+'] belief(Id,[e1,...])
//   atom ::= name | name(term,...,term)
//
// Names start lowercase, variables uppercase or '_'. Negated belief
// literals are rewritten to the complement event while parsing.

#include "calp/belief.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace calp {

struct Term {
    bool variable = false;
    std::string name;

    friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    bool ground() const;
    /// "name/arity".
    std::string signature() const;
    /// Canonical text, e.g. "f(a,b)" or "q".
    std::string str() const;

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

enum class LiteralKind { ordinary, probabilistic, belief };

struct BodyLiteral {
    LiteralKind kind = LiteralKind::ordinary;
    bool positive = true;
    Atom atom;         // ordinary and probabilistic literals
    BeliefFact belief; // belief literals

    friend auto operator<=>(const BodyLiteral&, const BodyLiteral&) = default;
};

struct Rule {
    Atom head;
    std::vector<BodyLiteral> body;

    friend auto operator<=>(const Rule&, const Rule&) = default;
};

struct ProbabilisticFact {
    double prob = 0.0;
    Atom atom;

    friend auto operator<=>(const ProbabilisticFact&, const ProbabilisticFact&) = default;
};

/// A declared belief domain before validation of its mass function.
struct DomainDecl {
    std::string id;
    std::vector<std::string> elements;
    std::vector<FocalSet> masses;

    friend bool operator==(const DomainDecl&, const DomainDecl&) = default;
};

/// Capacity logic program: rules, probabilistic facts and belief domains.
/// Parsed programs keep every collection sorted and duplicate-free.
struct CaLProgram {
    std::vector<Rule> rules;
    std::vector<ProbabilisticFact> prob_facts;
    std::vector<DomainDecl> domains;

    bool empty() const { return rules.empty() && prob_facts.empty() && domains.empty(); }

    const DomainDecl* find_domain(std::string_view id) const;
    /// Validated domains keyed by id. Throws DomainError on invalid declarations.
    DomainMap belief_domains() const;
    /// Every ground belief fact over every event of every domain.
    std::vector<BeliefFact> belief_vocabulary() const;
    /// Sorts and deduplicates all collections and recomputes literal kinds.
    void normalize();

    friend bool operator==(const CaLProgram&, const CaLProgram&) = default;
};

struct SourceLoc {
    int line = 0;
    int column = 0;
};

/// Stable diagnostic codes.
namespace diag {
inline constexpr std::string_view lex_error = "LEX_ERROR";
inline constexpr std::string_view syntax_error = "SYNTAX_ERROR";
inline constexpr std::string_view unknown_domain = "UNKNOWN_DOMAIN";
inline constexpr std::string_view unknown_element = "UNKNOWN_ELEMENT";
inline constexpr std::string_view duplicate_element = "DUPLICATE_ELEMENT";
inline constexpr std::string_view duplicate_domain = "DUPLICATE_DOMAIN";
inline constexpr std::string_view empty_frame = "EMPTY_FRAME";
inline constexpr std::string_view frame_too_large = "FRAME_TOO_LARGE";
inline constexpr std::string_view empty_focal_set = "EMPTY_FOCAL_SET";
inline constexpr std::string_view duplicate_mass = "DUPLICATE_MASS";
inline constexpr std::string_view mass_range = "MASS_RANGE";
inline constexpr std::string_view mass_sum = "MASS_SUM";
inline constexpr std::string_view prob_range = "PROB_RANGE";
inline constexpr std::string_view probfact_head_overlap = "PROBFACT_HEAD_OVERLAP";
inline constexpr std::string_view probfact_overlap = "PROBFACT_OVERLAP";
inline constexpr std::string_view unsafe_rule = "UNSAFE_RULE";
inline constexpr std::string_view nonground_belief = "NONGROUND_BELIEF";
inline constexpr std::string_view negative_belief = "NEGATIVE_BELIEF";
inline constexpr std::string_view reserved_predicate = "RESERVED_PREDICATE";
} // namespace diag

struct Diagnostic {
    std::string code;
    std::string message;
    std::optional<SourceLoc> loc;

    /// "line:col: CODE: message" (location omitted when unknown).
    std::string str() const;
};

struct ParseResult {
    CaLProgram program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// Parses and validates a program. Never stops at the first error: the
/// parser resynchronizes at the next clause terminator.
ParseResult parse_program(std::string_view text);

struct AtomParse {
    std::optional<Atom> atom;
    std::vector<Diagnostic> diagnostics;
};

/// Parses a single atom such as "stolen(car1,obj2)" (trailing '.' optional).
AtomParse parse_atom(std::string_view text);

/// Canonical text; parse_program(pretty_print(p)).program == p for valid p.
std::string pretty_print(const CaLProgram& p);

/// Empty iff the program is well formed.
std::vector<Diagnostic> validate(const CaLProgram& p);

/// Most general unifier exists, with the two atoms' variables renamed apart.
bool unifiable(const Atom& a, const Atom& b);

/// Shortest text that reads back as the same double.
std::string format_number(double v);

} // namespace calp
