#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace praise {

enum class Speaker { User, Assistant };

// Class order is fixed and shared with the classifier's coefficient rows.
enum class SatisfactionLabel { SAT = 0, NEU = 1, DSAT = 2 };
inline constexpr int kNumClasses = 3;

std::string to_string(SatisfactionLabel label);
std::optional<SatisfactionLabel> label_from_string(std::string_view s);

// 5-level rating -> 3-class label: DSAT below 3, NEU at exactly 3, SAT above.
// Throws std::out_of_range outside [1, 5].
SatisfactionLabel convert_rating(double avg_rating);

// Exact rational form for per-annotator integer scores: compares sum against
// 3*count so averages like 7/3 never hit float-equality issues.
SatisfactionLabel convert_rating(long long sum, long long count);

// A user-turn annotation: either one pre-averaged number or the raw votes.
struct Rating {
    std::vector<int> votes;
    std::optional<double> average;

    SatisfactionLabel label() const;
    double value() const;
    bool operator==(const Rating&) const = default;
};

struct Utterance {
    Speaker speaker = Speaker::User;
    std::string text;
    int turn_index = 0;

    bool operator==(const Utterance&) const = default;
};

struct Conversation {
    std::string id;
    std::vector<Utterance> utterances;
    std::map<int, Rating> ratings;               // user turn_index -> rating
    std::map<int, SatisfactionLabel> labels;     // direct-label corpora

    int user_turn_count() const;
    bool split_eligible() const { return user_turn_count() >= 2; }
    bool operator==(const Conversation&) const = default;
};

struct LabeledUtterance {
    std::string conversation_id;
    int turn_index = 0;
    std::string text;
    std::vector<Utterance> context;   // everything before turn_index, in order
    SatisfactionLabel label = SatisfactionLabel::NEU;
};

struct DatasetSplit {
    std::vector<LabeledUtterance> train;
    std::vector<LabeledUtterance> validation;
    std::vector<LabeledUtterance> test;
};

// Schema variants for the one-conversation-per-line corpus file.
enum class CorpusFormat { Ratings, Labels };
std::optional<CorpusFormat> corpus_format_from_string(std::string_view s);
std::string to_string(CorpusFormat f);

struct RejectedRecord {
    int line = 0;
    std::string reason;
};

struct LoadResult {
    std::vector<Conversation> conversations;
    std::vector<RejectedRecord> rejects;
};

struct LoadOptions {
    // When set, the first malformed record raises std::runtime_error naming
    // the offending line instead of landing in the rejects report.
    bool strict = false;
};

LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format,
                       const LoadOptions& options = {});
LoadResult load_corpus_text(const std::string& text, CorpusFormat format,
                            const LoadOptions& options = {});

void save_corpus(const std::vector<Conversation>& conversations,
                 const std::filesystem::path& path, CorpusFormat format);
std::string corpus_to_text(const std::vector<Conversation>& conversations, CorpusFormat format);

// Line-delimited {line, reason} records.
void save_rejects_report(const std::vector<RejectedRecord>& rejects,
                         const std::filesystem::path& path);

std::vector<LabeledUtterance> labeled_utterances(const Conversation& conv);
std::vector<LabeledUtterance> labeled_utterances(const std::vector<Conversation>& convs);

// Conversation-level 8:1:1 split over eligible conversations, deterministic in
// the seed. Throws std::runtime_error with fewer than 10 eligible conversations.
DatasetSplit split_dataset(const std::vector<Conversation>& convs, uint64_t seed);

}  // namespace praise
