#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace galactic {

// Error with a stable machine-parsable code; the CLI prints "error[<code>]: <what>".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* io = "io";
inline constexpr const char* format = "format";
inline constexpr const char* parse = "parse";
inline constexpr const char* empty_corpus = "empty-corpus";
inline constexpr const char* shape = "shape";
inline constexpr const char* config = "config";
inline constexpr const char* precondition = "precondition";
inline constexpr const char* training = "training";
inline constexpr const char* cap_exceeded = "cap-exceeded";
inline constexpr const char* missing_artifact = "missing-artifact";
inline constexpr const char* unknown_instance = "unknown-instance";
inline constexpr const char* target_unresolved = "target-unresolved";
}  // namespace errc

}  // namespace galactic
