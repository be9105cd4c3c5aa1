#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlohmann/json_fwd.hpp"

namespace praise {

enum class StrategyOrigin { Initial, Great, Unorthodox };
std::string to_string(StrategyOrigin origin);
std::optional<StrategyOrigin> origin_from_string(std::string_view s);

// Lowercase, collapsed whitespace, terminal .!? stripped. The strategy id is
// a hash of this form, so rephrasings that only differ in case/punctuation
// collapse to one identity.
std::string normalize_strategy_text(std::string_view text);
std::string strategy_id_for(std::string_view text);

// Best-effort shape check for planner output ("User <verb> <object>").
bool looks_like_strategy(std::string_view text);

struct Strategy {
    std::string id;
    std::string text;
    StrategyOrigin origin = StrategyOrigin::Initial;
    int created_at_iteration = 0;
    std::optional<std::vector<std::string>> passages;
    std::optional<double> importance;
};

Strategy make_strategy(std::string text, StrategyOrigin origin, int iteration);

// The evolving effective (S+) / ineffective (S-) strategy sets. Effective is
// capped; everything displaced or rejected accumulates on the ineffective
// side so planner prompts can keep listing it.
class StrategyMemory {
public:
    StrategyMemory() = default;

    // All seeds become effective with origin Initial at iteration 0.
    // Throws std::invalid_argument on empty input, duplicates after
    // normalization, or more seeds than the cap.
    static StrategyMemory init(const std::vector<std::string>& initial_texts, int cap);

    const std::vector<Strategy>& effective() const { return effective_; }
    const std::vector<Strategy>& ineffective() const { return ineffective_; }
    int cap() const { return cap_; }

    bool contains(const std::string& id) const;
    const Strategy* find(const std::string& id) const;
    Strategy* find_effective(const std::string& id);

    // Drops candidates whose normalized text matches any known strategy or an
    // earlier candidate in the same batch.
    std::vector<std::string> dedupe_candidates(const std::vector<std::string>& candidates) const;

    // Applies one iteration's outcome: rejected strategies join S-, effective
    // becomes the top-cap of (S+ union accepted) by importance (ties: earlier
    // creation iteration, then lexical id), and displaced strategies join S-.
    // Throws std::invalid_argument if a retained strategy has no importance
    // or accepted/rejected overlap.
    void commit_outcome(const std::vector<Strategy>& accepted,
                        const std::vector<Strategy>& rejected,
                        const std::map<std::string, double>& importances);

    nlohmann::json to_json() const;
    static StrategyMemory from_json(const nlohmann::json& j);

private:
    std::vector<Strategy> effective_;
    std::vector<Strategy> ineffective_;
    int cap_ = 0;
};

}  // namespace praise
