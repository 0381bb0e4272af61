#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpcsim {

/// Malformed arguments or input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A neighborhood combine was missing an extension for some frontier vertex.
class IncompletenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An algorithm broke a contract it declared (state bound, label budget,
/// determinism, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input does not fit into the total space M*S.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An oracle was asked to solve an instance beyond its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SpaceLimit { storage, outbox, inbox };

const char* to_string(SpaceLimit which);

/// A machine exceeded its S words. This is an observable of the model,
/// raised when an algorithm does not respect the per-machine space bound.
class SpaceExceeded : public std::runtime_error {
 public:
  SpaceExceeded(std::size_t machine, SpaceLimit which, std::size_t words,
                std::size_t capacity);

  std::size_t machine() const { return machine_; }
  SpaceLimit which() const { return which_; }
  std::size_t words() const { return words_; }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t machine_;
  SpaceLimit which_;
  std::size_t words_;
  std::size_t capacity_;
};

}  // namespace mpcsim
