#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace praise {

// Non-retryable provider failure (auth, malformed response, exhausted script,
// exhausted retries).
struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Retryable failure (429, 5xx, timeouts). Gateways convert an exhausted retry
// budget into ProviderError.
struct TransientProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CompletionRequest {
    std::string model;
    std::string system_prompt;
    double temperature = 0.0;
    int max_tokens = 512;
};

struct ProviderStats {
    long completion_calls = 0;   // requests answered by the backend
    long embedding_calls = 0;    // texts embedded by the backend (cache misses)
    long cache_hits = 0;
    long transient_retries = 0;  // extra attempts spent on transient failures

    ProviderStats& operator+=(const ProviderStats& o) {
        completion_calls += o.completion_calls;
        embedding_calls += o.embedding_calls;
        cache_hits += o.cache_hits;
        transient_retries += o.transient_retries;
        return *this;
    }
};

struct RetryPolicy {
    int max_attempts = 5;
    int base_delay_ms = 1000;   // doubles per attempt
    double jitter = 0.25;       // uniform extra fraction of the delay
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual std::string complete(const CompletionRequest& req) = 0;
    virtual std::string id() const = 0;
};

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    // One provider request; every row must have dimensions() entries.
    virtual std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) = 0;
    virtual std::string id() const = 0;
    virtual std::string model_id() const = 0;
    virtual int dimensions() const = 0;
};

// Canned replies consumed in order; throws ProviderError once exhausted.
class ScriptedCompletionBackend : public CompletionBackend {
public:
    explicit ScriptedCompletionBackend(std::vector<std::string> scripts)
        : scripts_(std::move(scripts)) {}

    std::string complete(const CompletionRequest&) override;
    std::string id() const override { return "mock"; }
    size_t consumed() const { return next_; }

private:
    std::vector<std::string> scripts_;
    size_t next_ = 0;
};

// Hash-seeded bag-of-words embedding: each lowercase alphanumeric token maps
// to a fixed pseudo-random Gaussian vector, token vectors are summed and the
// result L2-normalized. Empty input maps to the first basis vector.
std::vector<double> deterministic_mock_embed(std::string_view text, uint64_t seed, int d);

class MockEmbeddingBackend : public EmbeddingBackend {
public:
    MockEmbeddingBackend(uint64_t seed, int d) : seed_(seed), d_(d) {}

    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override;
    std::string id() const override { return "mock"; }
    std::string model_id() const override;
    int dimensions() const override { return d_; }

private:
    uint64_t seed_;
    int d_;
};

// Wraps a completion backend with retry/backoff and call accounting.
class CompletionGateway {
public:
    explicit CompletionGateway(std::unique_ptr<CompletionBackend> backend, RetryPolicy retry = {});

    std::string complete(const CompletionRequest& req);
    const ProviderStats& stats() const { return stats_; }
    const std::string& provider_id() const { return provider_id_; }

private:
    std::unique_ptr<CompletionBackend> backend_;
    RetryPolicy retry_;
    ProviderStats stats_;
    std::string provider_id_;
};

// Append-only (key hash, float32 vector) store with a fixed header:
//   magic[8] "PRAISEMB" | u32 version | u32 d | u32 dtype(1=f32le) | u64 count
// Vectors are stored quantized to little-endian float32; in-memory values are
// the doubles obtained by widening those floats, so a reload reproduces the
// runtime values exactly.
class EmbeddingCache {
public:
    EmbeddingCache() = default;  // memory-only

    // Opens (or creates) a persistent cache file for d-dimensional vectors.
    // A file with a mismatched header is discarded and restarted.
    EmbeddingCache(std::filesystem::path file, int d);
    ~EmbeddingCache();

    EmbeddingCache(const EmbeddingCache&) = delete;
    EmbeddingCache& operator=(const EmbeddingCache&) = delete;

    static uint64_t key_for(std::string_view provider_id, std::string_view model_id,
                            std::string_view text);

    bool lookup(uint64_t key, Eigen::VectorXd& out) const;
    void insert(uint64_t key, const Eigen::VectorXd& value);
    size_t size() const { return entries_.size(); }

    // Shared binary format, also used for checkpoint passage embeddings.
    static void write_file(const std::filesystem::path& path, int d,
                           const std::vector<std::pair<uint64_t, Eigen::VectorXd>>& records);
    static std::map<uint64_t, Eigen::VectorXd> read_file(const std::filesystem::path& path,
                                                         int expected_d = 0);

private:
    void load_or_restart();
    void append_record(uint64_t key, const Eigen::VectorXd& value);

    std::filesystem::path file_;
    int d_ = 0;
    std::map<uint64_t, Eigen::VectorXd> entries_;
    mutable std::mutex mutex_;
};

// Embedding front door: caching, unit normalization, float32 quantization,
// dimension checks, chunked parallel backend calls, retry.
class EmbeddingGateway {
public:
    struct Options {
        std::filesystem::path cache_file;  // empty -> memory-only cache
        RetryPolicy retry;
        int parallelism = 4;
        int batch_size = 128;
    };

    EmbeddingGateway(std::unique_ptr<EmbeddingBackend> backend, Options options = {});

    // Rows follow input order; all rows unit-norm (within float32 rounding).
    Eigen::MatrixXd embed(const std::vector<std::string>& texts);
    Eigen::VectorXd embed_one(const std::string& text);

    const ProviderStats& stats() const { return stats_; }
    const std::string& provider_id() const { return provider_id_; }
    const std::string& model_id() const { return model_id_; }
    int dimensions() const { return d_; }

private:
    Eigen::VectorXd postprocess(const std::vector<double>& raw) const;

    std::unique_ptr<EmbeddingBackend> backend_;
    Options options_;
    std::unique_ptr<EmbeddingCache> cache_;
    ProviderStats stats_;
    std::string provider_id_;
    std::string model_id_;
    int d_ = 0;
};

// Both gateways an orchestrated run talks to.
struct ProviderSet {
    CompletionGateway* completion = nullptr;
    EmbeddingGateway* embedding = nullptr;

    ProviderStats stats() const {
        ProviderStats s;
        if (completion) s += completion->stats();
        if (embedding) s += embedding->stats();
        return s;
    }
};

namespace detail {
void backoff_sleep(const RetryPolicy& policy, int attempt);
}

// Runs fn under the policy's backoff schedule, retrying TransientProviderError
// only. Throws ProviderError once the attempt budget is spent.
template <typename Fn>
auto retry_with_backoff(const RetryPolicy& policy, ProviderStats& stats, Fn&& fn)
        -> decltype(fn()) {
    std::string last_error;
    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        try {
            return fn();
        } catch (const TransientProviderError& e) {
            last_error = e.what();
            if (attempt == policy.max_attempts) break;
            ++stats.transient_retries;
            detail::backoff_sleep(policy, attempt);
        }
    }
    throw ProviderError("exhausted " + std::to_string(policy.max_attempts) +
                        " attempts; last transient error: " + last_error);
}

}  // namespace praise
