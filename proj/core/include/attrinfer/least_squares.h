#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace attrinfer {

inline constexpr double kRidgeDamping = 1e-8;

// Row-major 0/1 design matrix.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint8_t at(size_t r, size_t c) const { return bits_[r * cols_ + c]; }
  void set(size_t r, size_t c, bool v) { bits_[r * cols_ + c] = v ? 1 : 0; }
  std::span<const uint8_t> row(size_t r) const { return {bits_.data() + r * cols_, cols_}; }
  std::span<uint8_t> mutable_row(size_t r) { return {bits_.data() + r * cols_, cols_}; }

  // Appends one row; `values.size()` must equal cols().
  void AppendRow(std::span<const uint8_t> values);

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<uint8_t> bits_;
};

struct LinearFit {
  double intercept = 0.0;
  std::vector<double> coefficients;
};

// Centered normal equations of a least-squares fit with an unpenalized
// intercept: (Xc'Xc + ridge*I) beta = Xc'yc, where Xc and yc are the
// column-centered design and labels. Entries are scaled by the row count so
// they stay integral for 0/1 data.
struct NormalEquations {
  size_t n = 0;
  size_t p = 0;
  std::vector<double> gram;  // p*p, row-major, n * Xc'Xc
  std::vector<double> rhs;   // p, n * Xc'yc
  std::vector<double> column_sums;
  double label_sum = 0.0;
};

NormalEquations BuildNormalEquations(const BinaryMatrix& x, std::span<const double> y);

// Minimizes sum (intercept + x.beta - y)^2 + ridge*|beta|^2. Deterministic.
// Constant columns receive a coefficient of exactly zero. Requires >= 1 row.
LinearFit FitLeastSquares(const BinaryMatrix& x, std::span<const double> y,
                          double ridge = kRidgeDamping);

// max_j |((Xc'Xc + ridge*I) beta - Xc'yc)_j| for a fitted beta.
double NormalEquationResidual(const BinaryMatrix& x, std::span<const double> y,
                              std::span<const double> beta, double ridge = kRidgeDamping);

// Solves A x = b for symmetric positive definite A (row-major n*n) via Cholesky.
// Throws InvariantFailure when A is not positive definite.
std::vector<double> SolveSpd(std::vector<double> a, std::vector<double> b, size_t n);

}  // namespace attrinfer
