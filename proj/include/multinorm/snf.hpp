#pragma once

#include <optional>
#include <vector>

#include "multinorm/matrix.hpp"

namespace multinorm {

/// Smith normal form U*A*V = D with U, V unimodular, D diagonal with a
/// positive divisibility chain d1 | d2 | ... .  Inverses are tracked during
/// the elimination so callers can change coordinates both ways exactly.
struct SnfResult {
  IntMatrix u, uinv;  // u * uinv = identity
  IntMatrix v, vinv;  // v * vinv = identity
  IntMatrix d;
  std::size_t rank = 0;                // number of nonzero diagonal entries
  std::vector<Int> diagonal() const;   // the min(rows, cols) diagonal entries
};

SnfResult smith_normal_form(const IntMatrix& a);

/// Basis of the lattice {z : a*z = 0} as columns, saturated in Z^cols.
std::vector<std::vector<Int>> lattice_kernel(const IntMatrix& a);

/// Membership and exact solving in the column span of a fixed matrix.
/// Factors once, answers many queries.
class LatticeSolver {
 public:
  explicit LatticeSolver(const IntMatrix& basis);

  bool contains(const std::vector<Int>& x) const;
  /// z with basis*z = x, if any.
  std::optional<std::vector<Int>> solve(const std::vector<Int>& x) const;

 private:
  SnfResult snf_;
  std::size_t rows_, cols_;
};

}  // namespace multinorm
