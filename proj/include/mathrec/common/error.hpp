#pragma once

#include <stdexcept>
#include <string>

namespace mathrec {

// Domain errors: bad input data (parse failures, invalid params, malformed
// models). The CLI maps these to exit code 2.
class DomainError : public std::runtime_error {
public:
  DomainError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// I/O errors: missing files, unreadable streams. CLI exit code 3.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace mathrec
