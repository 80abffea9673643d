#pragma once

// Grounding of function-free programs, the stratification check, and
// evaluation of a single world's (two-valued) well-founded model.

#include "calp/syntax.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace calp {

using AtomId = std::uint32_t;

struct GroundBeliefLiteral {
    std::uint32_t domain = 0; ///< index into GroundProgram::domains
    EventMask event;
};

struct GroundRule {
    AtomId head = 0;
    std::vector<AtomId> positive;
    std::vector<AtomId> negative;
    std::vector<GroundBeliefLiteral> beliefs;
};

struct GroundProbFact {
    AtomId atom = 0;
    double prob = 0.0;
};

struct StratificationReport {
    bool stratified = true;
    /// Predicate signature ("name/arity") to stratum index.
    std::map<std::string, int> strata;
    /// Predicates of a strongly connected component containing a negative edge.
    std::vector<std::string> offending_cycle;
};

/// Variable-free program with interned atoms.
///
/// Probabilistic facts and domains are kept in a fixed order (facts by atom
/// text, domains by id); that order defines world enumeration order.
class GroundProgram {
public:
    std::vector<GroundRule> rules;
    std::vector<GroundProbFact> prob_facts;
    std::vector<BeliefDomain> domains;
    std::vector<std::string> warnings;

    std::size_t atom_count() const { return names_.size(); }
    const std::string& atom_name(AtomId a) const { return names_[a]; }
    const std::string& atom_signature(AtomId a) const { return signatures_[a]; }
    std::optional<AtomId> find_atom(std::string_view name) const;
    /// Index of the probabilistic fact on `a`, if any.
    std::optional<std::uint32_t> fact_index(AtomId a) const;
    std::optional<std::uint32_t> domain_index(std::string_view id) const;
    /// All ground belief facts over every event of every domain.
    std::vector<BeliefFact> belief_vocabulary() const;
    /// True if some rule head or probabilistic fact has this signature.
    bool defines(std::string_view signature) const;

    std::string rule_text(const GroundRule& r) const;

    const StratificationReport& stratification() const { return strat_; }
    /// Stratum of the head predicate of every rule (valid when stratified).
    const std::vector<int>& rule_strata() const { return rule_strata_; }
    /// Rules in which each atom occurs as a positive body literal.
    const std::vector<std::vector<std::uint32_t>>& positive_occurrences() const { return occurrences_; }

    AtomId intern(const std::string& name, const std::string& signature);
    /// Computes stratification, per-rule strata and occurrence lists.
    void finalize();

private:
    std::vector<std::string> names_;
    std::vector<std::string> signatures_;
    std::unordered_map<std::string, AtomId> index_;
    StratificationReport strat_;
    std::vector<int> rule_strata_;
    std::vector<std::vector<std::uint32_t>> occurrences_;
};

struct GroundingOptions {
    std::size_t max_ground_rules = 1'000'000;
};

/// Instantiates rules over the program's constants. Only instances whose
/// positive body atoms are derivable in some world are kept; the others can
/// never fire. Throws ResourceError when the cap is exceeded and DomainError
/// on invalid domain declarations.
GroundProgram ground(const CaLProgram& p, const GroundingOptions& opts = {});

/// Predicate dependency analysis on the ground rules. Belief and
/// probabilistic literals are leaves and add no edges.
StratificationReport check_stratified(const GroundProgram& g);

/// A world as seen by the evaluator: chosen facts as a bitmask over
/// g.prob_facts and one event per domain (indexed like g.domains).
struct WorldView {
    std::uint64_t facts = 0;
    std::span<const EventMask> events;
};

/// Reusable evaluator for many worlds of the same program.
class ModelEvaluator {
public:
    /// Throws StratificationError if `g` is not stratified.
    explicit ModelEvaluator(const GroundProgram& g);

    /// Truth of every atom in the world's model, indexed by AtomId.
    const std::vector<std::uint8_t>& evaluate(const WorldView& w);
    bool entails(const WorldView& w, AtomId q) { return evaluate(w)[q] != 0; }

private:
    const GroundProgram& g_;
    std::vector<std::vector<std::uint32_t>> by_stratum_;
    std::vector<std::uint8_t> truth_;
    std::vector<std::uint32_t> pending_;
    std::vector<AtomId> queue_;
};

/// Model of R + chosen facts + completion of the belief set, as sorted atom
/// names. A belief literal belief(D,B2) holds iff the world's event for D is
/// a subset of B2; domains absent from `belief_set` count as the whole frame.
std::vector<std::string> well_founded_model(const GroundProgram& g, std::span<const std::string> chosen_facts,
                                            std::span<const BeliefFact> belief_set);

bool entails(const GroundProgram& g, std::span<const std::string> chosen_facts,
             std::span<const BeliefFact> belief_set, std::string_view q);

} // namespace calp
