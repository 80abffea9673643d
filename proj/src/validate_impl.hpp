#pragma once

#include "calp/syntax.hpp"

#include <vector>

namespace calp::detail {

/// Source positions aligned with a program's collections, as produced by
/// the parser before normalization.
struct ProgramLocs {
    std::vector<SourceLoc> rules;
    std::vector<SourceLoc> prob_facts;
    std::vector<SourceLoc> domains;
    std::vector<std::vector<SourceLoc>> masses;
    /// Domains some of whose mass lines were dropped before validation.
    std::vector<bool> dropped_masses;
};

std::vector<Diagnostic> validate(const CaLProgram& p, const ProgramLocs* locs);

/// Marks literals over probabilistic-fact predicates as probabilistic.
void classify_literals(CaLProgram& p);

} // namespace calp::detail
