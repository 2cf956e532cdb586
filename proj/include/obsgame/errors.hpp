#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace obsgame {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// The characteristic polynomial does not split over the rationals.
class NonRationalSpectrum : public Error {
 public:
  explicit NonRationalSpectrum(const std::string& what,
                               std::optional<std::size_t> epoch = std::nullopt)
      : Error(what), epoch_(epoch) {}

  // Game epoch at which the spectrum check failed, when raised by the engine.
  std::optional<std::size_t> epoch() const { return epoch_; }

 private:
  std::optional<std::size_t> epoch_;
};

// Inverse requested for a singular square matrix.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// A supplied subspace V fails A V ⊆ V + Im B.
class NotInvariant : public Error {
 public:
  using Error::Error;
};

// The system has no relative degree or its decoupling matrix is singular.
class NoRelativeDegree : public Error {
 public:
  using Error::Error;
};

// Malformed matrix literal, rational string or scenario document.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace obsgame
