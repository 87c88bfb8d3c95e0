#pragma once

#include <stdexcept>
#include <string>

namespace gradratio {

/// CG or an elementwise update produced a non-finite value.
class numerical_breakdown : public std::runtime_error {
  public:
    explicit numerical_breakdown(const std::string& what)
        : std::runtime_error(what) {}
};

/// Raised on read/write failures of the on-disk formats.
class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gradratio
