#pragma once

#include <stdexcept>
#include <string>

namespace rapgen {

// Error taxonomy shared by the library and the CLI.  The CLI maps each
// kind to a distinct process exit code.
enum class ErrorKind {
    Usage,    // bad flags / bad configuration values
    Data,     // malformed or missing input data
    Runtime,  // internal failure (non-finite loss, structural decode failure)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error usage_error(const std::string& msg) { return Error(ErrorKind::Usage, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorKind::Data, msg); }
inline Error runtime_error(const std::string& msg) { return Error(ErrorKind::Runtime, msg); }

}  // namespace rapgen
