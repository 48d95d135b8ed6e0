#ifndef ICFT_ERROR_HPP
#define ICFT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace icft {

// All recoverable failures carry a stable code ("DuplicateAttribute", ...)
// plus a human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}  // namespace icft

#endif
