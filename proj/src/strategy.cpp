#include "praise/strategy.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "nlohmann/json.hpp"
#include "praise/util.hpp"

namespace praise {

using nlohmann::json;

std::string to_string(StrategyOrigin origin) {
    switch (origin) {
        case StrategyOrigin::Initial: return "initial";
        case StrategyOrigin::Great: return "great";
        case StrategyOrigin::Unorthodox: return "unorthodox";
    }
    return "initial";
}

std::optional<StrategyOrigin> origin_from_string(std::string_view s) {
    std::string v = to_lower(s);
    if (v == "initial") return StrategyOrigin::Initial;
    if (v == "great") return StrategyOrigin::Great;
    if (v == "unorthodox") return StrategyOrigin::Unorthodox;
    return std::nullopt;
}

std::string normalize_strategy_text(std::string_view text) {
    std::string s = collapse_whitespace(to_lower(text));
    while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?')) {
        s.pop_back();
    }
    return trim(s);
}

std::string strategy_id_for(std::string_view text) {
    return hex64(fnv1a64(normalize_strategy_text(text)));
}

bool looks_like_strategy(std::string_view text) {
    auto words = tokenize_words(text);
    return words.size() >= 3 && words.front() == "user";
}

Strategy make_strategy(std::string text, StrategyOrigin origin, int iteration) {
    Strategy s;
    s.text = trim(text);
    s.id = strategy_id_for(s.text);
    s.origin = origin;
    s.created_at_iteration = iteration;
    return s;
}

StrategyMemory StrategyMemory::init(const std::vector<std::string>& initial_texts, int cap) {
    if (initial_texts.empty()) throw std::invalid_argument("no initial strategies given");
    if (cap < static_cast<int>(initial_texts.size())) {
        throw std::invalid_argument("cap " + std::to_string(cap) + " below initial strategy count " +
                                    std::to_string(initial_texts.size()));
    }
    StrategyMemory mem;
    mem.cap_ = cap;
    std::set<std::string> seen;
    for (const auto& text : initial_texts) {
        if (trim(text).empty()) throw std::invalid_argument("empty initial strategy text");
        if (!seen.insert(normalize_strategy_text(text)).second) {
            throw std::invalid_argument("duplicate initial strategy after normalization: " + text);
        }
        mem.effective_.push_back(make_strategy(text, StrategyOrigin::Initial, 0));
    }
    return mem;
}

bool StrategyMemory::contains(const std::string& id) const {
    return find(id) != nullptr;
}

const Strategy* StrategyMemory::find(const std::string& id) const {
    for (const auto& s : effective_)
        if (s.id == id) return &s;
    for (const auto& s : ineffective_)
        if (s.id == id) return &s;
    return nullptr;
}

Strategy* StrategyMemory::find_effective(const std::string& id) {
    for (auto& s : effective_)
        if (s.id == id) return &s;
    return nullptr;
}

std::vector<std::string> StrategyMemory::dedupe_candidates(
        const std::vector<std::string>& candidates) const {
    std::set<std::string> known;
    for (const auto& s : effective_) known.insert(normalize_strategy_text(s.text));
    for (const auto& s : ineffective_) known.insert(normalize_strategy_text(s.text));

    std::vector<std::string> survivors;
    for (const auto& c : candidates) {
        if (known.insert(normalize_strategy_text(c)).second) survivors.push_back(c);
    }
    return survivors;
}

void StrategyMemory::commit_outcome(const std::vector<Strategy>& accepted,
                                    const std::vector<Strategy>& rejected,
                                    const std::map<std::string, double>& importances) {
    for (const auto& a : accepted) {
        for (const auto& r : rejected) {
            if (a.id == r.id) {
                throw std::invalid_argument("strategy " + a.id + " both accepted and rejected");
            }
        }
    }

    // Pool = current S+ plus accepted, deduplicated by id (keeps re-application
    // of the same outcome idempotent).
    std::vector<Strategy> pool = effective_;
    for (const auto& a : accepted) {
        bool present = false;
        for (auto& p : pool) {
            if (p.id == a.id) {
                present = true;
                if (a.passages) p.passages = a.passages;
                break;
            }
        }
        if (!present) pool.push_back(a);
    }

    for (auto& p : pool) {
        auto it = importances.find(p.id);
        if (it == importances.end()) {
            throw std::invalid_argument("missing importance for strategy " + p.id);
        }
        p.importance = it->second;
    }

    std::stable_sort(pool.begin(), pool.end(), [](const Strategy& a, const Strategy& b) {
        if (*a.importance != *b.importance) return *a.importance > *b.importance;
        if (a.created_at_iteration != b.created_at_iteration) {
            return a.created_at_iteration < b.created_at_iteration;
        }
        return a.id < b.id;
    });

    auto push_ineffective = [&](Strategy s) {
        for (const auto& e : ineffective_)
            if (e.id == s.id) return;
        ineffective_.push_back(std::move(s));
    };

    std::vector<Strategy> kept;
    for (auto& p : pool) {
        if (static_cast<int>(kept.size()) < cap_) kept.push_back(std::move(p));
        else push_ineffective(std::move(p));
    }
    effective_ = std::move(kept);

    // Acceptance into S+ wins over an older ineffective entry with the same id.
    std::erase_if(ineffective_, [&](const Strategy& s) {
        return std::any_of(effective_.begin(), effective_.end(),
                           [&](const Strategy& e) { return e.id == s.id; });
    });

    for (const auto& r : rejected) push_ineffective(r);
}

namespace {

json strategy_to_json(const Strategy& s) {
    json j;
    j["id"] = s.id;
    j["text"] = s.text;
    j["origin"] = to_string(s.origin);
    j["created_at_iteration"] = s.created_at_iteration;
    if (s.passages) j["passages"] = *s.passages;
    if (s.importance) j["importance"] = *s.importance;
    return j;
}

Strategy strategy_from_json(const json& j) {
    Strategy s;
    s.id = j.at("id").get<std::string>();
    s.text = j.at("text").get<std::string>();
    auto origin = origin_from_string(j.at("origin").get<std::string>());
    if (!origin) throw std::runtime_error("unknown strategy origin in file");
    s.origin = *origin;
    s.created_at_iteration = j.at("created_at_iteration").get<int>();
    if (j.contains("passages")) s.passages = j["passages"].get<std::vector<std::string>>();
    if (j.contains("importance")) s.importance = j["importance"].get<double>();
    return s;
}

}  // namespace

json StrategyMemory::to_json() const {
    json j;
    j["format_version"] = 1;
    j["cap"] = cap_;
    j["effective"] = json::array();
    for (const auto& s : effective_) j["effective"].push_back(strategy_to_json(s));
    j["ineffective"] = json::array();
    for (const auto& s : ineffective_) j["ineffective"].push_back(strategy_to_json(s));
    return j;
}

StrategyMemory StrategyMemory::from_json(const json& j) {
    StrategyMemory mem;
    mem.cap_ = j.at("cap").get<int>();
    for (const auto& e : j.at("effective")) mem.effective_.push_back(strategy_from_json(e));
    for (const auto& e : j.at("ineffective")) mem.ineffective_.push_back(strategy_from_json(e));
    return mem;
}

}  // namespace praise
