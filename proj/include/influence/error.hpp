#pragma once

#include <stdexcept>
#include <string>

namespace influence {

/// Malformed input: bad graph file, bad builder arguments, bad notation.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A configured search or expansion budget ran out before the answer was exact.
class BudgetExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A game was asked for an operation that only makes sense inside Milnor's universe.
class UniverseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace influence
