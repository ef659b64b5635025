#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sizer {

// A single contract violation. `code` is a stable machine-readable token
// (duplicate_id, unknown_pair, oversized_service, ...); `subject` names the
// offending entity when there is one.
struct Violation {
  std::string code;
  std::string subject;
  std::string message;

  bool operator==(const Violation&) const = default;
};

class SizingError : public std::runtime_error {
 public:
  SizingError(std::string code, std::string subject, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)), subject_(std::move(subject)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }
  Violation violation() const { return {code_, subject_, what()}; }

 private:
  std::string code_;
  std::string subject_;
};

// Carries the complete list of problems found in one input, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace sizer
