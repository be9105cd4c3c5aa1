#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace praise {

// Thrown when LLM output (strategy lists, passage bullets) cannot be parsed.
// Callers treat this as retryable, unlike ProviderError.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string collapse_whitespace(std::string_view s);

// Lowercase alphanumeric word runs; everything else is a separator.
std::vector<std::string> tokenize_words(std::string_view s);

uint64_t fnv1a64(std::string_view bytes);
std::string hex64(uint64_t v);

// splitmix64 step: advances state and returns the next output.
uint64_t splitmix64(uint64_t& state);

// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
double unit_double(uint64_t bits);

// Stable sub-stream seeds for one master seed ("split", "planner", ...).
uint64_t derive_seed(uint64_t base, std::string_view tag);

}  // namespace praise
