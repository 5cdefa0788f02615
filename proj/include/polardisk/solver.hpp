#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "polardisk/assembly.hpp"

namespace polardisk {

enum class SolverKind { direct, iterative };

std::string to_string(SolverKind k);
SolverKind solver_kind_from_string(const std::string& s);

struct SolverOptions {
  SolverKind kind = SolverKind::direct;
  double tolerance = 1e-10;  // iterative stopping and scaled residual gate
  int max_iterations = 2000;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::optional<long> pivot = std::nullopt)
      : std::runtime_error(what), pivot_(pivot) {}
  std::optional<long> pivot() const { return pivot_; }

 private:
  std::optional<long> pivot_;
};

/// Identifies the matrix behind a factorization.
struct Fingerprint {
  std::uint64_t grid_id = 0;
  double a = 0.0;
  double dt = 0.0;
  bool operator==(const Fingerprint&) const = default;
};

/// Factorized step matrix.  Solving is const and may be shared across
/// threads; each instance owns its numeric state.
class Factorization {
 public:
  static Factorization factorize(const SparseMatrix& A, const SolverOptions& options = {},
                                 Fingerprint fingerprint = {});

  Vector solve(const Vector& b) const;
  /// ||A x - b|| / (||A|| ||x|| + ||b||), infinity norms.
  double scaled_residual(const Vector& x, const Vector& b) const;

  const Fingerprint& fingerprint() const { return fingerprint_; }
  SolverKind kind() const { return options_.kind; }
  std::size_t size() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  SolverOptions options_;
  Fingerprint fingerprint_;
};

}  // namespace polardisk
