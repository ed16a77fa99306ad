#pragma once

#include <stdexcept>
#include <string>

namespace condtab {

// Bad argument or malformed problem input.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A configured cap (enumeration size, search work) was exceeded.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
    resource_error(const std::string& msg, std::string exact_count)
        : std::runtime_error(msg), exact_count_(std::move(exact_count)) {}

    // Decimal string of the exact size that broke the cap, when known.
    const std::string& exact_count() const { return exact_count_; }

private:
    std::string exact_count_;
};

// Requested operation is outside the supported problem shapes.
class unsupported_error : public std::invalid_argument {
public:
    explicit unsupported_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A broken internal invariant; never expected on valid inputs.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace condtab
