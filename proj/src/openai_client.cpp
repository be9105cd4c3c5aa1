#include "praise/openai_client.hpp"

#include <cstdlib>

#include "httplib.h"
#include "nlohmann/json.hpp"

namespace praise {

using nlohmann::json;

namespace {

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

struct ParsedUrl {
    std::string origin;       // scheme://host[:port]
    std::string path_prefix;  // possibly empty, no trailing slash
};

ParsedUrl parse_base_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ProviderError("base URL missing scheme: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    ParsedUrl p;
    if (path_start == std::string::npos) {
        p.origin = url;
    } else {
        p.origin = url.substr(0, path_start);
        p.path_prefix = url.substr(path_start);
        while (!p.path_prefix.empty() && p.path_prefix.back() == '/') p.path_prefix.pop_back();
    }
    return p;
}

// Raises the right exception family for a non-200 response.
[[noreturn]] void throw_for_response(const HttpResponse& res, const std::string& endpoint) {
    if (res.status <= 0) {
        throw TransientProviderError("transport failure on " + endpoint + ": " + res.body);
    }
    if (res.status == 401 || res.status == 403) {
        throw ProviderError("authentication failure (" + std::to_string(res.status) + ") on " +
                            endpoint);
    }
    std::string msg = "HTTP " + std::to_string(res.status) + " on " + endpoint + ": " +
                      res.body.substr(0, 300);
    if (res.status == 408 || res.status == 429 || res.status >= 500) {
        throw TransientProviderError(msg);
    }
    throw ProviderError(msg);
}

json parse_body(const HttpResponse& res, const std::string& endpoint) {
    json j = json::parse(res.body, nullptr, false);
    if (j.is_discarded()) {
        throw ProviderError("invalid JSON from " + endpoint + ": " + res.body.substr(0, 300));
    }
    return j;
}

}  // namespace

std::string resolve_base_url(const OpenAiConfig& cfg) {
    if (!cfg.base_url.empty()) return cfg.base_url;
    if (auto v = env_or_empty("PRAISE_BASE_URL"); !v.empty()) return v;
    if (auto v = env_or_empty("OPENAI_BASE_URL"); !v.empty()) return v;
    return "https://api.openai.com/v1";
}

std::string resolve_api_key(const OpenAiConfig& cfg) {
    if (!cfg.api_key.empty()) return cfg.api_key;
    if (auto v = env_or_empty("PRAISE_API_KEY"); !v.empty()) return v;
    return env_or_empty("OPENAI_API_KEY");
}

HttpPostFn make_http_transport(const OpenAiConfig& cfg) {
    const std::string base = resolve_base_url(cfg);
    const std::string key = resolve_api_key(cfg);
    const ParsedUrl parsed = parse_base_url(base);
    const int connect_timeout = cfg.connect_timeout_s;
    const int read_timeout = cfg.read_timeout_s;

    return [parsed, key, connect_timeout, read_timeout](const std::string& endpoint_path,
                                                        const std::string& body) -> HttpResponse {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (parsed.origin.rfind("https://", 0) == 0) {
            return {0, "built without TLS support; use an http:// base URL"};
        }
#endif
        httplib::Client cli(parsed.origin);
        cli.set_connection_timeout(connect_timeout, 0);
        cli.set_read_timeout(read_timeout, 0);
        httplib::Headers headers;
        if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
        auto res = cli.Post(parsed.path_prefix + endpoint_path, headers, body, "application/json");
        if (!res) return {0, httplib::to_string(res.error())};
        return {res->status, res->body};
    };
}

OpenAiCompletionBackend::OpenAiCompletionBackend(OpenAiConfig cfg, HttpPostFn transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
    if (!transport_) transport_ = make_http_transport(cfg_);
}

std::string OpenAiCompletionBackend::complete(const CompletionRequest& req) {
    json body;
    body["model"] = req.model;
    body["messages"] = json::array({json{{"role", "system"}, {"content", req.system_prompt}}});
    body["temperature"] = req.temperature;
    body["max_tokens"] = req.max_tokens;

    const std::string endpoint = "/chat/completions";
    HttpResponse res = transport_(endpoint, body.dump());
    if (res.status != 200) throw_for_response(res, endpoint);

    json j = parse_body(res, endpoint);
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
        throw ProviderError("completion response has no choices");
    }
    const auto& msg = j["choices"][0];
    if (!msg.contains("message") || !msg["message"].contains("content") ||
        !msg["message"]["content"].is_string()) {
        throw ProviderError("completion response missing message content");
    }
    return msg["message"]["content"].get<std::string>();
}

OpenAiEmbeddingBackend::OpenAiEmbeddingBackend(OpenAiConfig cfg, std::string model, int dimensions,
                                               bool request_dimensions, HttpPostFn transport)
    : cfg_(std::move(cfg)),
      model_(std::move(model)),
      dimensions_(dimensions),
      request_dimensions_(request_dimensions),
      transport_(std::move(transport)) {
    if (!transport_) transport_ = make_http_transport(cfg_);
}

std::vector<std::vector<double>> OpenAiEmbeddingBackend::embed_batch(
        const std::vector<std::string>& texts) {
    json body;
    body["model"] = model_;
    body["input"] = texts;
    if (request_dimensions_) body["dimensions"] = dimensions_;

    const std::string endpoint = "/embeddings";
    HttpResponse res = transport_(endpoint, body.dump());
    if (res.status != 200) throw_for_response(res, endpoint);

    json j = parse_body(res, endpoint);
    if (!j.contains("data") || !j["data"].is_array()) {
        throw ProviderError("embedding response has no data array");
    }
    std::vector<std::vector<double>> out(texts.size());
    std::vector<bool> filled(texts.size(), false);
    for (const auto& item : j["data"]) {
        if (!item.contains("index") || !item.contains("embedding")) {
            throw ProviderError("embedding response item missing index or embedding");
        }
        size_t idx = item["index"].get<size_t>();
        if (idx >= out.size()) throw ProviderError("embedding response index out of range");
        out[idx] = item["embedding"].get<std::vector<double>>();
        filled[idx] = true;
    }
    for (size_t i = 0; i < filled.size(); ++i) {
        if (!filled[i]) throw ProviderError("embedding response missing row " + std::to_string(i));
    }
    return out;
}

}  // namespace praise
