#pragma once

#include <stdexcept>
#include <string>

namespace trajml {

// All recoverable failures carry a short machine-parsable code ("E_PARSE",
// "E_SPACE", ...) plus a human message. The CLI prints "<code>: <message>"
// on a single line and exits nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline Error parse_error(const std::string& m) { return Error("E_PARSE", m); }
inline Error vocab_error(const std::string& m) { return Error("E_VOCAB", m); }
inline Error order_error(const std::string& m) { return Error("E_ORDER", m); }
inline Error data_error(const std::string& m) { return Error("E_DATA", m); }
inline Error space_error(const std::string& m) { return Error("E_SPACE", m); }
inline Error contract_error(const std::string& m) { return Error("E_CONTRACT", m); }
inline Error io_error(const std::string& m) { return Error("E_IO", m); }
inline Error schema_error(const std::string& m) { return Error("E_SCHEMA", m); }
inline Error budget_error(const std::string& m) { return Error("E_BUDGET", m); }
inline Error version_error(const std::string& m) { return Error("E_VERSION", m); }

}  // namespace trajml
