#include "multinorm/snf.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "multinorm/errors.hpp"

namespace multinorm {
namespace {

// The elimination runs twice over: a checked int64 kernel for speed, and a
// cpp_int kernel as the general path.  Both follow the identical pivot rule
// (smallest magnitude, row-major tie break) so results are bit-identical.

struct overflow_signal {};

struct Checked64 {
  std::int64_t v = 0;
  Checked64() = default;
  Checked64(std::int64_t x) : v(x) {}
};

inline Checked64 operator+(Checked64 a, Checked64 b) {
  std::int64_t r;
  if (__builtin_add_overflow(a.v, b.v, &r)) throw overflow_signal{};
  return r;
}
inline Checked64 operator-(Checked64 a, Checked64 b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a.v, b.v, &r)) throw overflow_signal{};
  return r;
}
inline Checked64 operator*(Checked64 a, Checked64 b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a.v, b.v, &r)) throw overflow_signal{};
  return r;
}
inline Checked64 operator/(Checked64 a, Checked64 b) {
  if (b.v == -1 && a.v == std::numeric_limits<std::int64_t>::min()) throw overflow_signal{};
  return a.v / b.v;
}
inline Checked64 operator%(Checked64 a, Checked64 b) {
  if (b.v == -1 && a.v == std::numeric_limits<std::int64_t>::min()) throw overflow_signal{};
  return a.v % b.v;
}
inline Checked64 operator-(Checked64 a) {
  if (a.v == std::numeric_limits<std::int64_t>::min()) throw overflow_signal{};
  return -a.v;
}
inline bool operator==(Checked64 a, Checked64 b) { return a.v == b.v; }
inline bool operator<(Checked64 a, Checked64 b) { return a.v < b.v; }
inline bool is_zero(Checked64 a) { return a.v == 0; }
inline bool is_neg(Checked64 a) { return a.v < 0; }
inline Checked64 abs_of(Checked64 a) { return is_neg(a) ? -a : a; }

inline bool is_zero(const Int& a) { return a == 0; }
inline bool is_neg(const Int& a) { return a < 0; }
inline Int abs_of(const Int& a) { return abs_int(a); }

// Quotient minimizing the remainder magnitude (ties keep the truncated
// quotient).  Shrinks off-pivot entries as fast as possible.
template <class T>
T round_div(const T& a, const T& b) {
  T q = a / b;
  T r = a - q * b;
  if (is_zero(r)) return q;
  T two_r = r + r;
  T ab = abs_of(b);
  if (abs_of(two_r) < ab || abs_of(two_r) == ab) return q;
  if (is_neg(r) == is_neg(b)) return q + T(1);
  return q - T(1);
}

template <class T>
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<T> e;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), e(r * c) {}
  T& operator()(std::size_t i, std::size_t j) { return e[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
};

template <class T>
struct Work {
  Mat<T> a, u, uinv, v, vinv;
  Work(std::size_t r, std::size_t c)
      : a(r, c),
        u(Mat<T>::identity(r)),
        uinv(Mat<T>::identity(r)),
        v(Mat<T>::identity(c)),
        vinv(Mat<T>::identity(c)) {}

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(i, j), a(k, j));
    for (std::size_t j = 0; j < u.cols; ++j) std::swap(u(i, j), u(k, j));
    for (std::size_t j = 0; j < uinv.rows; ++j) std::swap(uinv(j, i), uinv(j, k));
  }
  void swap_cols(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < a.rows; ++j) std::swap(a(j, i), a(j, k));
    for (std::size_t j = 0; j < v.rows; ++j) std::swap(v(j, i), v(j, k));
    for (std::size_t j = 0; j < vinv.cols; ++j) std::swap(vinv(i, j), vinv(k, j));
  }
  // row i -= q * row k
  void row_sub(std::size_t i, std::size_t k, const T& q) {
    for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = a(i, j) - q * a(k, j);
    for (std::size_t j = 0; j < u.cols; ++j) u(i, j) = u(i, j) - q * u(k, j);
    for (std::size_t j = 0; j < uinv.rows; ++j) uinv(j, k) = uinv(j, k) + q * uinv(j, i);
  }
  // col i -= q * col k
  void col_sub(std::size_t i, std::size_t k, const T& q) {
    for (std::size_t j = 0; j < a.rows; ++j) a(j, i) = a(j, i) - q * a(j, k);
    for (std::size_t j = 0; j < v.rows; ++j) v(j, i) = v(j, i) - q * v(j, k);
    for (std::size_t j = 0; j < vinv.cols; ++j) vinv(k, j) = vinv(k, j) + q * vinv(i, j);
  }
  void row_add(std::size_t i, std::size_t k) {  // row i += row k
    for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = a(i, j) + a(k, j);
    for (std::size_t j = 0; j < u.cols; ++j) u(i, j) = u(i, j) + u(k, j);
    for (std::size_t j = 0; j < uinv.rows; ++j) uinv(j, k) = uinv(j, k) - uinv(j, i);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = -a(i, j);
    for (std::size_t j = 0; j < u.cols; ++j) u(i, j) = -u(i, j);
    for (std::size_t j = 0; j < uinv.rows; ++j) uinv(j, i) = -uinv(j, i);
  }
};

// Smallest-magnitude nonzero entry of the trailing submatrix, row-major tie
// break for reproducibility.
template <class T>
bool find_pivot(const Mat<T>& a, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  T best{};
  for (std::size_t i = t; i < a.rows; ++i)
    for (std::size_t j = t; j < a.cols; ++j) {
      const T& x = a(i, j);
      if (is_zero(x)) continue;
      T ax = abs_of(x);
      if (!found || ax < best) {
        found = true;
        best = ax;
        pi = i;
        pj = j;
      }
    }
  return found;
}

template <class T>
std::size_t snf_kernel(Work<T>& w) {
  const std::size_t n = std::min(w.a.rows, w.a.cols);
  std::size_t t = 0;
  for (; t < n; ++t) {
    std::size_t pi = 0, pj = 0;
    if (!find_pivot(w.a, t, pi, pj)) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < w.a.rows; ++i) {
        if (is_zero(w.a(i, t))) continue;
        T q = round_div(w.a(i, t), w.a(t, t));
        if (!is_zero(q)) w.row_sub(i, t, q);
        if (!is_zero(w.a(i, t))) {
          w.swap_rows(t, i);  // strictly smaller pivot
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < w.a.cols; ++j) {
        if (is_zero(w.a(t, j))) continue;
        T q = round_div(w.a(t, j), w.a(t, t));
        if (!is_zero(q)) w.col_sub(j, t, q);
        if (!is_zero(w.a(t, j))) {
          w.swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Pivot must divide the whole trailing block for the diagonal chain.
      bool chained = true;
      for (std::size_t i = t + 1; i < w.a.rows && chained; ++i)
        for (std::size_t j = t + 1; j < w.a.cols; ++j)
          if (!is_zero(w.a(i, j) % w.a(t, t))) {
            w.row_add(t, i);
            chained = false;
            break;
          }
      if (chained) break;
    }
    if (is_neg(w.a(t, t))) w.negate_row(t);
  }
  return t;
}

IntMatrix to_int_matrix(const Mat<Checked64>& m) {
  IntMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j).v;
  return out;
}

IntMatrix to_int_matrix(const Mat<Int>& m) {
  IntMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
  return out;
}

bool fits_int64(const IntMatrix& a) {
  // Headroom below INT64_MAX so most reductions stay in the fast path.
  static const Int bound = Int(1) << 40;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (abs_int(a(i, j)) > bound) return false;
  return true;
}

template <class T>
SnfResult run_snf(const IntMatrix& a) {
  Work<T> w(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if constexpr (std::is_same_v<T, Checked64>)
        w.a(i, j) = Checked64(static_cast<std::int64_t>(a(i, j)));
      else
        w.a(i, j) = a(i, j);
  std::size_t rank = snf_kernel(w);
  SnfResult r{to_int_matrix(w.u), to_int_matrix(w.uinv), to_int_matrix(w.v),
              to_int_matrix(w.vinv), to_int_matrix(w.a), rank};
  return r;
}

}  // namespace

std::vector<Int> SnfResult::diagonal() const {
  std::size_t n = std::min(d.rows(), d.cols());
  std::vector<Int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = d(i, i);
  return out;
}

SnfResult smith_normal_form(const IntMatrix& a) {
  if (fits_int64(a)) {
    try {
      return run_snf<Checked64>(a);
    } catch (const overflow_signal&) {
      // fall through to the arbitrary-precision kernel
    }
  }
  return run_snf<Int>(a);
}

std::vector<std::vector<Int>> lattice_kernel(const IntMatrix& a) {
  SnfResult s = smith_normal_form(a);
  std::vector<std::vector<Int>> basis;
  for (std::size_t j = s.rank; j < a.cols(); ++j) basis.push_back(s.v.column(j));
  return basis;
}

LatticeSolver::LatticeSolver(const IntMatrix& basis)
    : snf_(smith_normal_form(basis)), rows_(basis.rows()), cols_(basis.cols()) {}

std::optional<std::vector<Int>> LatticeSolver::solve(const std::vector<Int>& x) const {
  if (x.size() != rows_) throw internal_error("lattice solve dimension mismatch");
  std::vector<Int> ux = apply(snf_.u, x);
  std::vector<Int> w(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i < snf_.rank) {
      const Int& d = snf_.d(i, i);
      if (ux[i] % d != 0) return std::nullopt;
      w[i] = ux[i] / d;
    } else if (ux[i] != 0) {
      return std::nullopt;
    }
  }
  return apply(snf_.v, w);
}

bool LatticeSolver::contains(const std::vector<Int>& x) const { return solve(x).has_value(); }

}  // namespace multinorm
