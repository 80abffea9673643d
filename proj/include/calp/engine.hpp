#pragma once

// Explanation discovery, covering sets and end-to-end query answering with
// both the world-based and the explanation-based pipelines.

#include "calp/choices.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace calp {

struct EngineOptions {
    std::uint64_t world_cap = default_world_cap;
};

/// Covering set of explanations for q, minimized and sorted. Satisfying
/// worlds that no explanation can cover are reported through `diagnostics`.
/// Throws ResourceError above the world cap, StratificationError if `g` is
/// not stratified.
std::vector<CompositeChoice> find_covering_explanations(const GroundProgram& g, std::string_view q,
                                                        const EngineOptions& opts = {},
                                                        std::vector<std::string>* diagnostics = nullptr);

/// True iff every world admitted by kappa entails q.
bool is_explanation(const GroundProgram& g, const CompositeChoice& kappa, std::string_view q,
                    std::uint64_t cap = default_world_cap);

/// xi_c of the pairwise-incompatible form of the covering set.
CapacityInterval query_by_explanations(const GroundProgram& g, std::string_view q, const EngineOptions& opts = {});

enum class Method { both, worlds, explanations };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct QueryResult {
    std::string query;
    Method method = Method::both;
    std::optional<CapacityInterval> by_explanations;
    std::optional<CapacityInterval> by_worlds;
    /// Both intervals within 1e-9 of each other; true when only one was computed.
    bool agree = true;
    bool clamped = false;
    /// Primary answer (explanations when computed) clamped into [0,1].
    CapacityInterval reported;
    std::vector<std::string> diagnostics;
};

inline constexpr double agreement_tolerance = 1e-9;

QueryResult answer_query(const GroundProgram& g, std::string_view q, const EngineOptions& opts = {},
                         Method method = Method::both);

} // namespace calp
