#pragma once

#include <string>
#include <vector>

#include "praise/providers.hpp"

namespace praise::prompts {

// Planner/passage templates with {{$name}} placeholders. The same texts ship
// as files under prompts/; these embedded copies keep the library usable
// without an install prefix.
const std::string& great_planner_template();
const std::string& unorthodox_planner_template();
const std::string& passage_generator_template();

// Known problem-definition ids: "mwoz", "sgd", "redial", "generic".
std::vector<std::string> problem_definition_ids();
const std::string& problem_definition(const std::string& id);

// Human-authored seed strategies per dataset id.
const std::vector<std::string>& initial_strategies(const std::string& id);

CompletionRequest default_great_params();
CompletionRequest default_unorthodox_params();
CompletionRequest default_passage_params();

}  // namespace praise::prompts
