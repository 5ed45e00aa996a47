#include "attrinfer/least_squares.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "attrinfer/errors.h"

namespace attrinfer {

void BinaryMatrix::AppendRow(std::span<const uint8_t> values) {
  if (values.size() != cols_) {
    throw ContractViolation("BinaryMatrix::AppendRow: expected " + std::to_string(cols_) +
                            " columns, got " + std::to_string(values.size()));
  }
  for (uint8_t v : values) bits_.push_back(v ? 1 : 0);
  ++rows_;
}

NormalEquations BuildNormalEquations(const BinaryMatrix& x, std::span<const double> y) {
  if (y.size() != x.rows()) throw ContractViolation("label count differs from row count");
  const size_t n = x.rows();
  const size_t p = x.cols();
  NormalEquations ne;
  ne.n = n;
  ne.p = p;

  // Raw X'X and X'y accumulated over the set bits of each row.
  std::vector<int64_t> gram(p * p, 0);
  std::vector<double> xty(p, 0.0);
  std::vector<int64_t> sums(p, 0);
  std::vector<size_t> ones;
  ones.reserve(p);
  double ysum = 0.0;
  for (size_t r = 0; r < n; ++r) {
    ones.clear();
    auto row = x.row(r);
    for (size_t j = 0; j < p; ++j) {
      if (row[j]) ones.push_back(j);
    }
    for (size_t a = 0; a < ones.size(); ++a) {
      const size_t j = ones[a];
      ++sums[j];
      xty[j] += y[r];
      int64_t* grow = gram.data() + j * p;
      for (size_t b = a; b < ones.size(); ++b) ++grow[ones[b]];
    }
    ysum += y[r];
  }
  for (size_t j = 0; j < p; ++j) {
    for (size_t k = 0; k < j; ++k) gram[j * p + k] = gram[k * p + j];
  }

  // n * centered quantities; exact for integral labels.
  const double nd = static_cast<double>(n);
  ne.gram.assign(p * p, 0.0);
  ne.rhs.assign(p, 0.0);
  ne.column_sums.assign(p, 0.0);
  for (size_t j = 0; j < p; ++j) {
    ne.column_sums[j] = static_cast<double>(sums[j]);
    for (size_t k = 0; k < p; ++k) {
      ne.gram[j * p + k] = static_cast<double>(static_cast<int64_t>(n) * gram[j * p + k] -
                                               sums[j] * sums[k]);
    }
    ne.rhs[j] = nd * xty[j] - static_cast<double>(sums[j]) * ysum;
  }
  ne.label_sum = ysum;
  return ne;
}

std::vector<double> SolveSpd(std::vector<double> a, std::vector<double> b, size_t n) {
  // In-place lower Cholesky factor.
  for (size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) throw InvariantFailure("normal equations are not positive definite");
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      const double* ai = a.data() + i * n;
      const double* aj = a.data() + j * n;
      for (size_t k = 0; k < j; ++k) s -= ai[k] * aj[k];
      a[i * n + j] = s / ljj;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * b[k];
    b[ii] = s / a[ii * n + ii];
  }
  return b;
}

LinearFit FitLeastSquares(const BinaryMatrix& x, std::span<const double> y, double ridge) {
  if (x.rows() == 0) throw ContractViolation("FitLeastSquares needs at least one row");
  if (!(ridge > 0.0)) throw ConfigError("ridge damping must be positive");
  NormalEquations ne = BuildNormalEquations(x, y);
  const size_t p = ne.p;
  const double nd = static_cast<double>(ne.n);

  LinearFit fit;
  if (p > 0) {
    std::vector<double> a = ne.gram;
    for (size_t j = 0; j < p; ++j) a[j * p + j] += nd * ridge;
    fit.coefficients = SolveSpd(std::move(a), ne.rhs, p);
  }
  double icpt = ne.label_sum / nd;
  for (size_t j = 0; j < p; ++j) icpt -= fit.coefficients[j] * ne.column_sums[j] / nd;
  fit.intercept = icpt;
  return fit;
}

double NormalEquationResidual(const BinaryMatrix& x, std::span<const double> y,
                              std::span<const double> beta, double ridge) {
  NormalEquations ne = BuildNormalEquations(x, y);
  const size_t p = ne.p;
  const double nd = static_cast<double>(ne.n);
  double worst = 0.0;
  for (size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (size_t k = 0; k < p; ++k) s += ne.gram[j * p + k] * beta[k];
    s += nd * ridge * beta[j];
    worst = std::max(worst, std::abs((s - ne.rhs[j]) / nd));
  }
  return worst;
}

}  // namespace attrinfer
