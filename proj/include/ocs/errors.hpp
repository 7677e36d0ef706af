#pragma once

#include <stdexcept>
#include <string>

namespace ocs {

/// Malformed input document. `where` locates the problem (file path, JSON
/// pointer or byte offset).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Well-formed input that breaks a domain invariant. `field` is the dotted
/// path of the offending value, e.g. `chillers[1].m_min`.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Caller broke an API precondition (length mismatch, j = 0, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using DomainError = std::domain_error;

}  // namespace ocs
