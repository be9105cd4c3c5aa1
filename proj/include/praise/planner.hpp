#pragma once

#include <map>
#include <string>
#include <vector>

#include "praise/providers.hpp"
#include "praise/strategy.hpp"

namespace praise {

enum class PlannerKind { Great, Unorthodox };
std::string to_string(PlannerKind kind);

struct PlannerConfig {
    std::string problem_definition;
    int n_s = 5;  // strategies requested per planner call
    CompletionRequest great_params;
    CompletionRequest unorthodox_params;
    std::string great_template;
    std::string unorthodox_template;
};

// Only this many of the most recent ineffective strategies are rendered into
// planner prompts; the set itself grows without bound.
inline constexpr size_t kIneffectivePromptLimit = 50;

struct ExplorationState {
    double epsilon_initial = 0.1;
    double epsilon_current = 0.1;
    uint64_t rng_seed = 0;
};

// Unorthodox iff draw < epsilon (half-open: draw == epsilon stays Great).
PlannerKind select_planner(const ExplorationState& state, double draw);

// No improvement doubles epsilon (clamped to 1); improvement resets it.
ExplorationState update_exploration(ExplorationState state, bool improved);

// Substitutes {{$name}} placeholders. Throws std::invalid_argument when the
// template references a name missing from vars.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& vars);

// Renders strategies as "- text" lines (empty string for an empty list).
std::string render_strategy_list(const std::vector<Strategy>& strategies, size_t keep_last = 0);

std::string build_planner_prompt(PlannerKind kind, const PlannerConfig& config,
                                 const StrategyMemory& memory);

// Extracts the first JSON object carrying a "strategies" string array from
// raw LLM output (code fences and surrounding prose tolerated). Returns up to
// n_s trimmed non-empty strings; throws ParseError when nothing parses.
std::vector<std::string> parse_strategies(const std::string& raw, int n_s);

// Inverse of parse_strategies for well-formed lists (used by tests and mocks).
std::string strategies_to_json(const std::vector<std::string>& strategies);

}  // namespace praise
