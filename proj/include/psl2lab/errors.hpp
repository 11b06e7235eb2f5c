#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace psl2lab {

// Precondition violated by the caller (bad parameter, wrong dimension, ...).
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A configured size cap would be exceeded.
class CapExceeded : public std::runtime_error {
  public:
    CapExceeded(const std::string& what, std::uint64_t required, std::uint64_t configured)
        : std::runtime_error(what + " (required " + std::to_string(required) + ", configured " +
                             std::to_string(configured) + ")"),
          required_(required),
          configured_(configured) {}

    std::uint64_t required() const { return required_; }
    std::uint64_t configured() const { return configured_; }

  private:
    std::uint64_t required_;
    std::uint64_t configured_;
};

// A randomized search ran out of its budget.
class BudgetExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An internal consistency check failed; always a bug.
class InternalError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace psl2lab
