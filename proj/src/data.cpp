#include "praise/data.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "nlohmann/json.hpp"
#include "praise/util.hpp"

namespace praise {

using nlohmann::json;

std::string to_string(SatisfactionLabel label) {
    switch (label) {
        case SatisfactionLabel::SAT: return "SAT";
        case SatisfactionLabel::NEU: return "NEU";
        case SatisfactionLabel::DSAT: return "DSAT";
    }
    return "NEU";
}

std::optional<SatisfactionLabel> label_from_string(std::string_view s) {
    std::string u = to_lower(s);
    if (u == "sat") return SatisfactionLabel::SAT;
    if (u == "neu") return SatisfactionLabel::NEU;
    if (u == "dsat") return SatisfactionLabel::DSAT;
    return std::nullopt;
}

SatisfactionLabel convert_rating(double avg_rating) {
    if (!(avg_rating >= 1.0 && avg_rating <= 5.0)) {
        throw std::out_of_range("rating " + std::to_string(avg_rating) + " outside [1,5]");
    }
    if (avg_rating < 3.0) return SatisfactionLabel::DSAT;
    if (avg_rating > 3.0) return SatisfactionLabel::SAT;
    return SatisfactionLabel::NEU;
}

SatisfactionLabel convert_rating(long long sum, long long count) {
    if (count <= 0) throw std::out_of_range("rating vote count must be positive");
    if (sum < count || sum > 5 * count) {
        throw std::out_of_range("rating votes average outside [1,5]");
    }
    if (sum < 3 * count) return SatisfactionLabel::DSAT;
    if (sum > 3 * count) return SatisfactionLabel::SAT;
    return SatisfactionLabel::NEU;
}

SatisfactionLabel Rating::label() const {
    if (!votes.empty()) {
        long long sum = 0;
        for (int v : votes) sum += v;
        return convert_rating(sum, static_cast<long long>(votes.size()));
    }
    if (average.has_value()) return convert_rating(*average);
    throw std::runtime_error("empty rating");
}

double Rating::value() const {
    if (!votes.empty()) {
        long long sum = 0;
        for (int v : votes) sum += v;
        return static_cast<double>(sum) / static_cast<double>(votes.size());
    }
    if (average.has_value()) return *average;
    throw std::runtime_error("empty rating");
}

int Conversation::user_turn_count() const {
    int n = 0;
    for (const auto& u : utterances)
        if (u.speaker == Speaker::User) ++n;
    return n;
}

std::optional<CorpusFormat> corpus_format_from_string(std::string_view s) {
    std::string v = to_lower(s);
    if (v == "ratings" || v == "uss-ratings") return CorpusFormat::Ratings;
    if (v == "labels" || v == "labeled") return CorpusFormat::Labels;
    return std::nullopt;
}

std::string to_string(CorpusFormat f) {
    return f == CorpusFormat::Ratings ? "ratings" : "labels";
}

namespace {

// Parses one JSONL record. Throws std::runtime_error with a reason on any
// schema violation; the caller attaches the line number.
Conversation parse_conversation(const json& rec, CorpusFormat format) {
    if (!rec.is_object()) throw std::runtime_error("record is not an object");
    if (!rec.contains("id") || !rec["id"].is_string() || rec["id"].get<std::string>().empty()) {
        throw std::runtime_error("missing or empty 'id' field");
    }
    if (!rec.contains("turns") || !rec["turns"].is_array() || rec["turns"].empty()) {
        throw std::runtime_error("missing or empty 'turns' array");
    }

    Conversation conv;
    conv.id = rec["id"].get<std::string>();

    int idx = 0;
    for (const auto& t : rec["turns"]) {
        if (!t.is_object()) throw std::runtime_error("turn " + std::to_string(idx) + " is not an object");
        if (!t.contains("speaker") || !t["speaker"].is_string()) {
            throw std::runtime_error("turn " + std::to_string(idx) + " missing 'speaker' field");
        }
        std::string sp = to_lower(t["speaker"].get<std::string>());
        Speaker speaker;
        if (sp == "user") speaker = Speaker::User;
        else if (sp == "assistant") speaker = Speaker::Assistant;
        else throw std::runtime_error("turn " + std::to_string(idx) + " has unknown speaker '" + sp + "'");

        Speaker expected = (idx % 2 == 0) ? Speaker::User : Speaker::Assistant;
        if (speaker != expected) {
            throw std::runtime_error("turn " + std::to_string(idx) +
                                     " breaks user/assistant alternation");
        }

        if (!t.contains("text") || !t["text"].is_string()) {
            throw std::runtime_error("turn " + std::to_string(idx) + " missing 'text' field");
        }
        std::string text = t["text"].get<std::string>();
        if (trim(text).empty()) {
            throw std::runtime_error("turn " + std::to_string(idx) + " has empty text");
        }

        const bool has_rating = t.contains("rating");
        const bool has_label = t.contains("label");
        if ((has_rating || has_label) && speaker != Speaker::User) {
            throw std::runtime_error("turn " + std::to_string(idx) +
                                     " carries an annotation on an assistant turn");
        }
        if (has_rating && format != CorpusFormat::Ratings) {
            throw std::runtime_error("turn " + std::to_string(idx) +
                                     " carries 'rating' under the labels schema");
        }
        if (has_label && format != CorpusFormat::Labels) {
            throw std::runtime_error("turn " + std::to_string(idx) +
                                     " carries 'label' under the ratings schema");
        }

        if (has_rating) {
            Rating r;
            const auto& rv = t["rating"];
            if (rv.is_array()) {
                for (const auto& v : rv) {
                    if (!v.is_number_integer()) {
                        throw std::runtime_error("turn " + std::to_string(idx) +
                                                 " rating votes must be integers");
                    }
                    r.votes.push_back(v.get<int>());
                }
                if (r.votes.empty()) {
                    throw std::runtime_error("turn " + std::to_string(idx) + " has empty rating array");
                }
            } else if (rv.is_number()) {
                r.average = rv.get<double>();
            } else {
                throw std::runtime_error("turn " + std::to_string(idx) +
                                         " rating must be a number or integer array");
            }
            try {
                r.label();
            } catch (const std::out_of_range& e) {
                throw std::runtime_error("turn " + std::to_string(idx) + ": " + e.what());
            }
            conv.ratings.emplace(idx, std::move(r));
        }

        if (has_label) {
            if (!t["label"].is_string()) {
                throw std::runtime_error("turn " + std::to_string(idx) + " label must be a string");
            }
            auto lab = label_from_string(t["label"].get<std::string>());
            if (!lab) {
                throw std::runtime_error("turn " + std::to_string(idx) + " has unknown label '" +
                                         t["label"].get<std::string>() + "'");
            }
            conv.labels.emplace(idx, *lab);
        }

        conv.utterances.push_back(Utterance{speaker, std::move(text), idx});
        ++idx;
    }
    return conv;
}

}  // namespace

LoadResult load_corpus_text(const std::string& text, CorpusFormat format,
                            const LoadOptions& options) {
    LoadResult result;
    std::set<std::string> seen_ids;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::string reason;
        try {
            json rec = json::parse(line);
            Conversation conv = parse_conversation(rec, format);
            if (!seen_ids.insert(conv.id).second) {
                reason = "duplicate conversation id '" + conv.id + "'";
            } else {
                result.conversations.push_back(std::move(conv));
                continue;
            }
        } catch (const json::parse_error&) {
            reason = "invalid JSON";
        } catch (const std::runtime_error& e) {
            reason = e.what();
        }
        if (options.strict) {
            throw std::runtime_error("corpus line " + std::to_string(line_no) + ": " + reason);
        }
        result.rejects.push_back(RejectedRecord{line_no, reason});
    }
    if (result.conversations.empty()) {
        throw std::runtime_error("empty corpus: no well-formed conversations");
    }
    return result;
}

LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format,
                       const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read corpus file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_corpus_text(buf.str(), format, options);
}

std::string corpus_to_text(const std::vector<Conversation>& conversations, CorpusFormat format) {
    std::ostringstream out;
    for (const auto& conv : conversations) {
        json turns = json::array();
        for (const auto& u : conv.utterances) {
            json t;
            t["speaker"] = u.speaker == Speaker::User ? "user" : "assistant";
            t["text"] = u.text;
            if (format == CorpusFormat::Ratings) {
                auto it = conv.ratings.find(u.turn_index);
                if (it != conv.ratings.end()) {
                    if (!it->second.votes.empty()) t["rating"] = it->second.votes;
                    else t["rating"] = *it->second.average;
                }
            } else {
                auto it = conv.labels.find(u.turn_index);
                if (it != conv.labels.end()) t["label"] = to_string(it->second);
            }
            turns.push_back(std::move(t));
        }
        json rec;
        rec["id"] = conv.id;
        rec["turns"] = std::move(turns);
        out << rec.dump() << "\n";
    }
    return out.str();
}

void save_corpus(const std::vector<Conversation>& conversations,
                 const std::filesystem::path& path, CorpusFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path.string());
    out << corpus_to_text(conversations, format);
}

void save_rejects_report(const std::vector<RejectedRecord>& rejects,
                         const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write rejects report: " + path.string());
    for (const auto& r : rejects) {
        json rec;
        rec["line"] = r.line;
        rec["reason"] = r.reason;
        out << rec.dump() << "\n";
    }
}

std::vector<LabeledUtterance> labeled_utterances(const Conversation& conv) {
    std::vector<LabeledUtterance> out;
    for (const auto& u : conv.utterances) {
        if (u.speaker != Speaker::User) continue;
        std::optional<SatisfactionLabel> label;
        if (auto it = conv.ratings.find(u.turn_index); it != conv.ratings.end()) {
            label = it->second.label();
        } else if (auto jt = conv.labels.find(u.turn_index); jt != conv.labels.end()) {
            label = jt->second;
        }
        if (!label) continue;
        LabeledUtterance lu;
        lu.conversation_id = conv.id;
        lu.turn_index = u.turn_index;
        lu.text = u.text;
        lu.context.assign(conv.utterances.begin(), conv.utterances.begin() + u.turn_index);
        lu.label = *label;
        out.push_back(std::move(lu));
    }
    return out;
}

std::vector<LabeledUtterance> labeled_utterances(const std::vector<Conversation>& convs) {
    std::vector<LabeledUtterance> out;
    for (const auto& c : convs) {
        auto part = labeled_utterances(c);
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    return out;
}

DatasetSplit split_dataset(const std::vector<Conversation>& convs, uint64_t seed) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < convs.size(); ++i) {
        if (convs[i].split_eligible()) eligible.push_back(i);
    }
    const size_t n = eligible.size();
    if (n < 10) {
        throw std::runtime_error("need at least 10 eligible conversations to split, got " +
                                 std::to_string(n));
    }

    // Hand-rolled Fisher-Yates so the permutation is identical on every
    // platform (std::shuffle leaves the draw algorithm unspecified).
    std::mt19937_64 rng(seed);
    for (size_t i = n - 1; i > 0; --i) {
        size_t j = static_cast<size_t>(rng() % (i + 1));
        std::swap(eligible[i], eligible[j]);
    }

    const size_t n_val = n / 10;
    const size_t n_test = n / 10;
    const size_t n_train = n - n_val - n_test;

    DatasetSplit split;
    auto emit = [&](size_t lo, size_t hi, std::vector<LabeledUtterance>& dst) {
        for (size_t i = lo; i < hi; ++i) {
            auto part = labeled_utterances(convs[eligible[i]]);
            dst.insert(dst.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
        }
    };
    emit(0, n_train, split.train);
    emit(n_train, n_train + n_val, split.validation);
    emit(n_train + n_val, n, split.test);
    return split;
}

}  // namespace praise
