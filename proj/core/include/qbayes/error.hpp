#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbayes {

enum class ErrorKind {
  NotHermitian,
  NotPsd,
  SingularOperator,
  DimensionMismatch,
  NotResolution,
  SingularGram,
  DegenerateSpan,
  NotAState,
  NotUnitary,
  NotCp,
  NotTp,
  NotNormalized,
  RankDeficientState,
  InconsistentRefinement,
  ZeroProbabilityData,
  ZeroLikelihoodEverywhere,
  DimensionBudgetExceeded,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Effect index that failed the PSD check in validate_povm.
class NotPsdError : public Error {
 public:
  NotPsdError(std::size_t index, double min_eigenvalue)
      : Error(ErrorKind::NotPsd, "element " + std::to_string(index) +
                                     " has eigenvalue " + std::to_string(min_eigenvalue)),
        index_(index),
        min_eigenvalue_(min_eigenvalue) {}

  std::size_t index() const noexcept { return index_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  std::size_t index_;
  double min_eigenvalue_;
};

class NotResolutionError : public Error {
 public:
  explicit NotResolutionError(double deficit)
      : Error(ErrorKind::NotResolution,
              "elements miss the identity by " + std::to_string(deficit) + " (Frobenius)"),
        deficit_(deficit) {}

  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

}  // namespace qbayes
