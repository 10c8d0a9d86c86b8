#pragma once

#include <stdexcept>
#include <string>

namespace koszulhh {

/// Malformed input: bad spec documents, unknown names, invalid paths.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, std::size_t position = npos)
        : std::runtime_error(position == npos ? what : what + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A computation could not be carried out (caps, inconsistent data, failed verification).
class MathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace koszulhh
