#pragma once

#include <functional>
#include <string>
#include <vector>

#include "praise/providers.hpp"

namespace praise {

// Minimal POST-JSON transport so the wire logic is testable without sockets.
struct HttpResponse {
    int status = 0;          // <= 0 means transport failure (message in body)
    std::string body;
};
using HttpPostFn = std::function<HttpResponse(const std::string& endpoint_path,
                                              const std::string& json_body)>;

struct OpenAiConfig {
    // Full prefix before the endpoint, e.g. "https://api.openai.com/v1".
    // Empty -> PRAISE_BASE_URL, then OPENAI_BASE_URL, then the OpenAI default.
    std::string base_url;
    // Empty -> PRAISE_API_KEY, then OPENAI_API_KEY.
    std::string api_key;
    int connect_timeout_s = 10;
    int read_timeout_s = 120;
};

std::string resolve_base_url(const OpenAiConfig& cfg);
std::string resolve_api_key(const OpenAiConfig& cfg);

// Builds an httplib-backed transport for the config (fresh connection per
// request; safe to call from several threads).
HttpPostFn make_http_transport(const OpenAiConfig& cfg);

class OpenAiCompletionBackend : public CompletionBackend {
public:
    explicit OpenAiCompletionBackend(OpenAiConfig cfg, HttpPostFn transport = nullptr);

    std::string complete(const CompletionRequest& req) override;
    std::string id() const override { return "openai"; }

private:
    OpenAiConfig cfg_;
    HttpPostFn transport_;
};

class OpenAiEmbeddingBackend : public EmbeddingBackend {
public:
    OpenAiEmbeddingBackend(OpenAiConfig cfg, std::string model, int dimensions,
                           bool request_dimensions = true, HttpPostFn transport = nullptr);

    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override;
    std::string id() const override { return "openai"; }
    std::string model_id() const override { return model_; }
    int dimensions() const override { return dimensions_; }

private:
    OpenAiConfig cfg_;
    std::string model_;
    int dimensions_;
    bool request_dimensions_;
    HttpPostFn transport_;
};

}  // namespace praise
