#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "multinorm/numeric.hpp"

namespace multinorm {

/// Dense integer matrix with exact entries, row-major.  Any dimension may be
/// zero; empty matrices behave as the corresponding linear maps.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries);
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(const std::vector<Int>& d);
  /// Matrix whose j-th column is cols[j]; `rows` disambiguates when empty.
  static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Int>>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  bool operator==(const IntMatrix& other) const = default;

  std::vector<Int> column(std::size_t j) const;
  std::vector<Int> row(std::size_t i) const;
  void set_column(std::size_t j, const std::vector<Int>& v);

  /// Rows selected by `which`, in order.
  IntMatrix select_rows(const std::vector<std::size_t>& which) const;
  IntMatrix select_columns(const std::vector<std::size_t>& which) const;

  /// Reduce row i modulo moduli[i] into [0, m).  Moduli of 0 leave the row
  /// untouched; all moduli must be nonnegative.
  void reduce_rows_mod(const std::vector<Int>& moduli);

  bool is_zero() const;

  std::string to_string() const;

 private:
  std::size_t rows_, cols_;
  std::vector<Int> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a);
IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);
std::vector<Int> apply(const IntMatrix& a, const std::vector<Int>& x);

}  // namespace multinorm
