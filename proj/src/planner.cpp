#include "praise/planner.hpp"

#include <algorithm>

#include "nlohmann/json.hpp"
#include "praise/util.hpp"

namespace praise {

using nlohmann::json;

std::string to_string(PlannerKind kind) {
    return kind == PlannerKind::Great ? "great" : "unorthodox";
}

PlannerKind select_planner(const ExplorationState& state, double draw) {
    return draw < state.epsilon_current ? PlannerKind::Unorthodox : PlannerKind::Great;
}

ExplorationState update_exploration(ExplorationState state, bool improved) {
    if (improved) {
        state.epsilon_current = state.epsilon_initial;
    } else {
        state.epsilon_current = std::min(2.0 * state.epsilon_current, 1.0);
    }
    return state;
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tmpl.size());
    size_t pos = 0;
    while (pos < tmpl.size()) {
        size_t open = tmpl.find("{{$", pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        size_t close = tmpl.find("}}", open + 3);
        if (close == std::string_view::npos) {
            throw std::invalid_argument("unterminated placeholder in template");
        }
        std::string name(tmpl.substr(open + 3, close - open - 3));
        auto it = vars.find(name);
        if (it == vars.end()) {
            throw std::invalid_argument("unknown placeholder in template: " + name);
        }
        out.append(it->second);
        pos = close + 2;
    }
    return out;
}

std::string render_strategy_list(const std::vector<Strategy>& strategies, size_t keep_last) {
    size_t start = 0;
    if (keep_last > 0 && strategies.size() > keep_last) start = strategies.size() - keep_last;
    std::string out;
    for (size_t i = start; i < strategies.size(); ++i) {
        if (!out.empty()) out.push_back('\n');
        out += "- " + strategies[i].text;
    }
    return out;
}

std::string build_planner_prompt(PlannerKind kind, const PlannerConfig& config,
                                 const StrategyMemory& memory) {
    const std::string& tmpl =
        kind == PlannerKind::Great ? config.great_template : config.unorthodox_template;
    return render_template(
        tmpl, {
                  {"problem_definition", config.problem_definition},
                  {"effective_strategies", render_strategy_list(memory.effective())},
                  {"ineffective_strategies",
                   render_strategy_list(memory.ineffective(), kIneffectivePromptLimit)},
                  {"strategy_num", std::to_string(config.n_s)},
              });
}

namespace {

// Scans for balanced {...} spans, skipping string literals and escapes.
std::vector<std::string> balanced_objects(const std::string& raw) {
    std::vector<std::string> spans;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '{') continue;
        int depth = 0;
        bool in_string = false;
        for (size_t j = i; j < raw.size(); ++j) {
            char c = raw[j];
            if (in_string) {
                if (c == '\\') ++j;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{') ++depth;
            else if (c == '}') {
                if (--depth == 0) {
                    spans.push_back(raw.substr(i, j - i + 1));
                    i = j;
                    break;
                }
            }
        }
    }
    return spans;
}

}  // namespace

std::vector<std::string> parse_strategies(const std::string& raw, int n_s) {
    for (const auto& span : balanced_objects(raw)) {
        json j = json::parse(span, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        if (!j.contains("strategies") || !j["strategies"].is_array()) continue;
        std::vector<std::string> out;
        bool all_strings = true;
        for (const auto& item : j["strategies"]) {
            if (!item.is_string()) {
                all_strings = false;
                break;
            }
            std::string text = trim(item.get<std::string>());
            if (!text.empty()) out.push_back(std::move(text));
        }
        if (!all_strings) continue;
        if (static_cast<int>(out.size()) > n_s) out.resize(static_cast<size_t>(n_s));
        return out;
    }
    throw ParseError("no strategies array found in planner reply");
}

std::string strategies_to_json(const std::vector<std::string>& strategies) {
    json j;
    j["strategies"] = strategies;
    return j.dump(2);
}

}  // namespace praise
