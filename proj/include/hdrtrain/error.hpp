#pragma once

#include <stdexcept>
#include <string>

namespace hdrtrain {

// Input outside the mathematical domain of a scalar function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Violated precondition on shapes, sizes, parameters or file contents.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hdrtrain
