#include "praise/providers.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <thread>

#include "praise/util.hpp"

namespace praise {

namespace detail {

void backoff_sleep(const RetryPolicy& policy, int attempt) {
    if (policy.base_delay_ms <= 0) return;
    double delay = static_cast<double>(policy.base_delay_ms) * std::pow(2.0, attempt - 1);
    if (policy.jitter > 0.0) {
        thread_local std::mt19937_64 rng{std::random_device{}()};
        delay *= 1.0 + policy.jitter * unit_double(rng());
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(delay)));
}

}  // namespace detail

std::string ScriptedCompletionBackend::complete(const CompletionRequest&) {
    if (next_ >= scripts_.size()) {
        throw ProviderError("scripted completion provider exhausted after " +
                            std::to_string(scripts_.size()) + " replies");
    }
    return scripts_[next_++];
}

std::vector<double> deterministic_mock_embed(std::string_view text, uint64_t seed, int d) {
    if (d < 2) throw std::invalid_argument("mock embedding dimension must be >= 2");
    auto tokens = tokenize_words(text);
    std::vector<double> acc(static_cast<size_t>(d), 0.0);
    if (tokens.empty()) {
        acc[0] = 1.0;
        return acc;
    }
    for (const auto& tok : tokens) {
        uint64_t state = fnv1a64(tok) ^ (0x9e3779b97f4a7c15ull * (seed + 1));
        // Box-Muller over an explicit splitmix64 stream; std::normal_distribution
        // is implementation-defined and would break cross-platform stability.
        int i = 0;
        while (i < d) {
            double u1 = unit_double(splitmix64(state));
            double u2 = unit_double(splitmix64(state));
            if (u1 <= 0.0) u1 = 0x1.0p-53;
            double r = std::sqrt(-2.0 * std::log(u1));
            acc[static_cast<size_t>(i++)] += r * std::cos(2.0 * M_PI * u2);
            if (i < d) acc[static_cast<size_t>(i++)] += r * std::sin(2.0 * M_PI * u2);
        }
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
        std::fill(acc.begin(), acc.end(), 0.0);
        acc[0] = 1.0;
        return acc;
    }
    for (double& v : acc) v /= norm;
    return acc;
}

std::vector<std::vector<double>> MockEmbeddingBackend::embed_batch(
        const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(deterministic_mock_embed(t, seed_, d_));
    return out;
}

std::string MockEmbeddingBackend::model_id() const {
    return "hash-embed-d" + std::to_string(d_) + "-s" + std::to_string(seed_);
}

CompletionGateway::CompletionGateway(std::unique_ptr<CompletionBackend> backend, RetryPolicy retry)
    : backend_(std::move(backend)), retry_(retry), provider_id_(backend_->id()) {}

std::string CompletionGateway::complete(const CompletionRequest& req) {
    std::string out = retry_with_backoff(retry_, stats_, [&] { return backend_->complete(req); });
    ++stats_.completion_calls;
    return out;
}

// ---- EmbeddingCache ----

namespace {

constexpr char kCacheMagic[8] = {'P', 'R', 'A', 'I', 'S', 'E', 'M', 'B'};
constexpr uint32_t kCacheVersion = 1;
constexpr uint32_t kDtypeF32Le = 1;
constexpr size_t kHeaderSize = 8 + 4 + 4 + 4 + 8;

struct CacheHeader {
    uint32_t version = kCacheVersion;
    uint32_t d = 0;
    uint32_t dtype = kDtypeF32Le;
    uint64_t count = 0;
};

void write_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& out, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

bool read_u32(std::istream& in, uint32_t& v) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
    v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

bool read_u64(std::istream& in, uint64_t& v) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
    v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

void write_header(std::ostream& out, const CacheHeader& h) {
    out.write(kCacheMagic, 8);
    write_u32(out, h.version);
    write_u32(out, h.d);
    write_u32(out, h.dtype);
    write_u64(out, h.count);
}

bool read_header(std::istream& in, CacheHeader& h) {
    char magic[8];
    if (!in.read(magic, 8)) return false;
    if (std::memcmp(magic, kCacheMagic, 8) != 0) return false;
    return read_u32(in, h.version) && read_u32(in, h.d) && read_u32(in, h.dtype) &&
           read_u64(in, h.count);
}

void write_record(std::ostream& out, uint64_t key, const Eigen::VectorXd& v) {
    write_u64(out, key);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        float f = static_cast<float>(v[i]);
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        write_u32(out, bits);
    }
}

bool read_record(std::istream& in, int d, uint64_t& key, Eigen::VectorXd& v) {
    if (!read_u64(in, key)) return false;
    v.resize(d);
    for (int i = 0; i < d; ++i) {
        uint32_t bits;
        if (!read_u32(in, bits)) return false;
        float f;
        std::memcpy(&f, &bits, 4);
        v[i] = static_cast<double>(f);
    }
    return true;
}

}  // namespace

EmbeddingCache::EmbeddingCache(std::filesystem::path file, int d)
    : file_(std::move(file)), d_(d) {
    load_or_restart();
}

EmbeddingCache::~EmbeddingCache() = default;

uint64_t EmbeddingCache::key_for(std::string_view provider_id, std::string_view model_id,
                                 std::string_view text) {
    std::string key;
    key.reserve(provider_id.size() + model_id.size() + text.size() + 2);
    key.append(provider_id);
    key.push_back('\x1f');
    key.append(model_id);
    key.push_back('\x1f');
    key.append(text);
    return fnv1a64(key);
}

void EmbeddingCache::load_or_restart() {
    if (file_.empty()) return;
    bool restart = true;
    if (std::filesystem::exists(file_)) {
        std::ifstream in(file_, std::ios::binary);
        CacheHeader h;
        if (in && read_header(in, h) && h.version == kCacheVersion && h.dtype == kDtypeF32Le &&
            static_cast<int>(h.d) == d_) {
            uint64_t key;
            Eigen::VectorXd v;
            while (read_record(in, d_, key, v)) entries_[key] = v;
            restart = false;
        } else {
            std::cerr << "warning: discarding incompatible embedding cache " << file_ << "\n";
        }
    }
    if (restart) {
        std::filesystem::create_directories(file_.parent_path());
        std::ofstream out(file_, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot create embedding cache: " + file_.string());
        CacheHeader h;
        h.d = static_cast<uint32_t>(d_);
        write_header(out, h);
    }
}

bool EmbeddingCache::lookup(uint64_t key, Eigen::VectorXd& out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    out = it->second;
    return true;
}

void EmbeddingCache::insert(uint64_t key, const Eigen::VectorXd& value) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!entries_.emplace(key, value).second) return;
    if (!file_.empty()) append_record(key, value);
}

void EmbeddingCache::append_record(uint64_t key, const Eigen::VectorXd& value) {
    std::fstream out(file_, std::ios::binary | std::ios::in | std::ios::out);
    if (!out) throw std::runtime_error("cannot append to embedding cache: " + file_.string());
    out.seekp(0, std::ios::end);
    write_record(out, key, value);
    // Keep the header count current for readers of the raw file.
    out.seekp(8 + 4 + 4 + 4, std::ios::beg);
    write_u64(out, entries_.size());
}

void EmbeddingCache::write_file(const std::filesystem::path& path, int d,
                                const std::vector<std::pair<uint64_t, Eigen::VectorXd>>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write embedding file: " + path.string());
    CacheHeader h;
    h.d = static_cast<uint32_t>(d);
    h.count = records.size();
    write_header(out, h);
    for (const auto& [key, v] : records) write_record(out, key, v);
}

std::map<uint64_t, Eigen::VectorXd> EmbeddingCache::read_file(const std::filesystem::path& path,
                                                              int expected_d) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read embedding file: " + path.string());
    CacheHeader h;
    if (!read_header(in, h) || h.version != kCacheVersion || h.dtype != kDtypeF32Le) {
        throw std::runtime_error("bad embedding file header: " + path.string());
    }
    if (expected_d > 0 && static_cast<int>(h.d) != expected_d) {
        throw std::runtime_error("embedding file dimension " + std::to_string(h.d) +
                                 " does not match expected " + std::to_string(expected_d));
    }
    std::map<uint64_t, Eigen::VectorXd> out;
    uint64_t key;
    Eigen::VectorXd v;
    while (read_record(in, static_cast<int>(h.d), key, v)) out[key] = v;
    return out;
}

// ---- EmbeddingGateway ----

EmbeddingGateway::EmbeddingGateway(std::unique_ptr<EmbeddingBackend> backend, Options options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      provider_id_(backend_->id()),
      model_id_(backend_->model_id()),
      d_(backend_->dimensions()) {
    if (d_ < 2) throw std::invalid_argument("embedding dimension must be >= 2");
    cache_ = options_.cache_file.empty()
                 ? std::make_unique<EmbeddingCache>()
                 : std::make_unique<EmbeddingCache>(options_.cache_file, d_);
}

Eigen::VectorXd EmbeddingGateway::postprocess(const std::vector<double>& raw) const {
    if (static_cast<int>(raw.size()) != d_) {
        throw ProviderError("embedding dimension mismatch: got " + std::to_string(raw.size()) +
                            ", configured " + std::to_string(d_));
    }
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(raw.data(), d_);
    double norm = v.norm();
    if (norm < 1e-12) {
        v.setZero();
        v[0] = 1.0;
    } else {
        v /= norm;
    }
    // Quantize through float32 so persisted and in-memory values agree exactly.
    for (int i = 0; i < d_; ++i) v[i] = static_cast<double>(static_cast<float>(v[i]));
    return v;
}

Eigen::MatrixXd EmbeddingGateway::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed called with no texts");

    const size_t m = texts.size();
    std::vector<uint64_t> keys(m);
    for (size_t i = 0; i < m; ++i) keys[i] = EmbeddingCache::key_for(provider_id_, model_id_, texts[i]);

    Eigen::MatrixXd out(static_cast<Eigen::Index>(m), d_);
    std::vector<size_t> miss_rows;
    std::vector<std::string> miss_texts;
    std::map<uint64_t, size_t> pending;  // key -> index into miss_texts
    Eigen::VectorXd row;
    for (size_t i = 0; i < m; ++i) {
        if (cache_->lookup(keys[i], row)) {
            out.row(static_cast<Eigen::Index>(i)) = row.transpose();
            ++stats_.cache_hits;
            continue;
        }
        miss_rows.push_back(i);
        if (pending.emplace(keys[i], miss_texts.size()).second) miss_texts.push_back(texts[i]);
    }

    if (!miss_texts.empty()) {
        const size_t batch = static_cast<size_t>(std::max(1, options_.batch_size));
        std::vector<std::vector<std::string>> chunks;
        for (size_t lo = 0; lo < miss_texts.size(); lo += batch) {
            size_t hi = std::min(miss_texts.size(), lo + batch);
            chunks.emplace_back(miss_texts.begin() + static_cast<long>(lo),
                                miss_texts.begin() + static_cast<long>(hi));
        }

        auto run_chunk = [&](const std::vector<std::string>& chunk) {
            return retry_with_backoff(options_.retry, stats_,
                                      [&] { return backend_->embed_batch(chunk); });
        };

        std::vector<std::vector<std::vector<double>>> chunk_results(chunks.size());
        const int par = std::max(1, options_.parallelism);
        if (par == 1 || chunks.size() == 1) {
            for (size_t c = 0; c < chunks.size(); ++c) chunk_results[c] = run_chunk(chunks[c]);
        } else {
            size_t next = 0;
            while (next < chunks.size()) {
                size_t wave = std::min(chunks.size() - next, static_cast<size_t>(par));
                std::vector<std::future<std::vector<std::vector<double>>>> futs;
                for (size_t w = 0; w < wave; ++w) {
                    futs.push_back(std::async(std::launch::async, run_chunk,
                                              std::cref(chunks[next + w])));
                }
                for (size_t w = 0; w < wave; ++w) chunk_results[next + w] = futs[w].get();
                next += wave;
            }
        }

        std::vector<Eigen::VectorXd> miss_vectors(miss_texts.size());
        size_t flat = 0;
        for (size_t c = 0; c < chunks.size(); ++c) {
            if (chunk_results[c].size() != chunks[c].size()) {
                throw ProviderError("embedding backend returned " +
                                    std::to_string(chunk_results[c].size()) + " rows for " +
                                    std::to_string(chunks[c].size()) + " texts");
            }
            for (const auto& raw : chunk_results[c]) miss_vectors[flat++] = postprocess(raw);
        }
        stats_.embedding_calls += static_cast<long>(miss_texts.size());

        // Cache inserts happen in input order so the persisted file is stable.
        for (size_t i = 0; i < miss_texts.size(); ++i) {
            uint64_t key = EmbeddingCache::key_for(provider_id_, model_id_, miss_texts[i]);
            cache_->insert(key, miss_vectors[i]);
        }
        for (size_t r : miss_rows) {
            out.row(static_cast<Eigen::Index>(r)) =
                miss_vectors[pending.at(keys[r])].transpose();
        }
    }
    return out;
}

Eigen::VectorXd EmbeddingGateway::embed_one(const std::string& text) {
    Eigen::MatrixXd m = embed({text});
    return m.row(0).transpose();
}

}  // namespace praise
