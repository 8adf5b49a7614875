#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace siltlab {

// Raised when an argument falls outside an operation's domain.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a request would exceed the configured memory budget.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised when an iterative routine does not converge.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Budget {
    std::size_t max_bytes = std::size_t{2} << 30;

    void require_bytes(double bytes, const std::string& what) const {
        if (bytes > static_cast<double>(max_bytes)) {
            throw ResourceError(what + " needs " +
                                std::to_string(static_cast<unsigned long long>(bytes / (1 << 20))) +
                                " MiB, budget is " + std::to_string(max_bytes >> 20) + " MiB");
        }
    }
    template <class T>
    void require(double count, const std::string& what) const {
        require_bytes(count * static_cast<double>(sizeof(T)), what);
    }
};

}  // namespace siltlab
