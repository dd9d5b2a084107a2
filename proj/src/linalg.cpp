#include "mmt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "mmt/error.hpp"

namespace mmt {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NonFiniteValue(std::string(what) + ": non-finite entry");
    }
  }
}

void require_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": shapes " + a.shape() + " and " + b.shape());
  }
}

}  // namespace

// ---------------------------------------------------------------- Vec

Vec::Vec(std::size_t size, double fill) : data_(size, fill) {}

Vec::Vec(std::vector<double> entries) : data_(std::move(entries)) {
  require_finite(data_, "Vec");
}

Vec::Vec(std::initializer_list<double> entries) : data_(entries) {
  require_finite(data_, "Vec");
}

Vec& Vec::operator+=(const Vec& other) {
  if (other.size() != size()) {
    throw DimensionMismatch("Vec +: sizes " + std::to_string(size()) + " and " +
                            std::to_string(other.size()));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& other) {
  if (other.size() != size()) {
    throw DimensionMismatch("Vec -: sizes " + std::to_string(size()) + " and " +
                            std::to_string(other.size()));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double Vec::norm() const { return std::sqrt(dot(*this, *this)); }

double Vec::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Vec::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator-(Vec a) { return a *= -1.0; }
Vec operator*(double s, Vec a) { return a *= s; }
Vec operator*(Vec a, double s) { return a *= s; }

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("dot: sizes " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------- Mat

Mat::Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("Mat: " + std::to_string(data_.size()) + " entries for shape " +
                            shape());
  }
  require_finite(data_, "Mat");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("Mat: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, "Mat");
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diagonal(const Vec& diag) {
  Mat m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Mat Mat::column(const Vec& v) {
  Mat m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

std::string Mat::shape() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Vec Mat::col(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Mat::row(std::size_t i) const {
  Vec v(cols_);
  for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

void Mat::set_col(std::size_t j, const Vec& v) {
  if (v.size() != rows_) throw DimensionMismatch("set_col: length mismatch for " + shape());
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
  if (r0 + rows > rows_ || c0 + cols > cols_) {
    throw DimensionMismatch("block out of range for " + shape());
  }
  Mat b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw DimensionMismatch("set_block: " + b.shape() + " does not fit in " + shape());
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Mat& Mat::operator+=(const Mat& other) {
  require_same_shape(*this, other, "Mat +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& other) {
  require_same_shape(*this, other, "Mat -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double Mat::norm_frobenius() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Mat::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

bool Mat::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator-(Mat a) { return a *= -1.0; }
Mat operator*(double s, Mat a) { return a *= s; }
Mat operator*(Mat a, double s) { return a *= s; }

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matmul: cannot multiply " + a.shape() + " by " + b.shape());
  }
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vec matvec(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("matvec: cannot apply " + a.shape() + " to length " +
                            std::to_string(x.size()));
  }
  Vec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Mat outer(const Vec& a, const Vec& b) {
  Mat m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

namespace {

// In-place LU with partial pivoting. Returns the permutation sign, throws on
// pivots below the singularity threshold.
struct Lu {
  Mat lu;
  std::vector<std::size_t> perm;
  int sign = 1;
};

Lu factorize(const Mat& a) {
  if (!a.is_square()) throw DimensionMismatch("solve_linear: matrix " + a.shape() + " is not square");
  const std::size_t n = a.rows();
  Lu f{a, std::vector<std::size_t>(n), 1};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  double scale = a.norm_inf();
  const double threshold = 1e-12 * scale;

  Mat& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (!(std::abs(m(p, k)) > threshold)) {
      std::ostringstream os;
      os << "solve_linear: pivot " << std::abs(m(p, k)) << " in column " << k
         << " below threshold " << threshold;
      throw SingularMatrix(os.str());
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      std::swap(f.perm[p], f.perm[k]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = m(i, k) / m(k, k);
      m(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

}  // namespace

Mat solve_linear(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) {
    throw DimensionMismatch("solve_linear: " + a.shape() + " with right-hand side " + b.shape());
  }
  const Lu f = factorize(a);
  const std::size_t n = a.rows();
  Mat x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b(f.perm[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x(j, c);
      x(ii, c) = s / f.lu(ii, ii);
    }
  }
  return x;
}

Vec solve_linear(const Mat& a, const Vec& b) { return solve_linear(a, Mat::column(b)).col(0); }

Mat inverse(const Mat& a) { return solve_linear(a, Mat::identity(a.rows())); }

double determinant(const Mat& a) {
  Lu f;
  try {
    f = factorize(a);
  } catch (const SingularMatrix&) {
    return 0.0;
  }
  double d = f.sign;
  for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
  return d;
}

// ---------------------------------------------------------------- blocks

BlockMat2n BlockMat2n::split(const Mat& m) {
  if (!m.is_square() || m.rows() % 2 != 0) {
    throw DimensionMismatch("BlockMat2n::split: expected 2n x 2n, got " + m.shape());
  }
  const std::size_t n = m.rows() / 2;
  return BlockMat2n{n, {m.block(0, 0, n, n), m.block(0, n, n, n), m.block(n, 0, n, n),
                        m.block(n, n, n, n)}};
}

BlockMat2n BlockMat2n::from_blocks(Mat b11, Mat b12, Mat b21, Mat b22) {
  const std::size_t n = b11.rows();
  for (const Mat* b : {&b11, &b12, &b21, &b22}) {
    if (b->rows() != n || b->cols() != n) {
      throw DimensionMismatch("BlockMat2n: block " + b->shape() + " is not " +
                              std::to_string(n) + "x" + std::to_string(n));
    }
  }
  return BlockMat2n{n, {std::move(b11), std::move(b12), std::move(b21), std::move(b22)}};
}

Mat BlockMat2n::flatten() const {
  Mat m(2 * n, 2 * n);
  m.set_block(0, 0, blocks[0]);
  m.set_block(0, n, blocks[1]);
  m.set_block(n, 0, blocks[2]);
  m.set_block(n, n, blocks[3]);
  return m;
}

// ---------------------------------------------------------------- J

Mat SymplecticForm::matrix() const {
  Mat j(2 * n_, 2 * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    j(i, n_ + i) = 1.0;
    j(n_ + i, i) = -1.0;
  }
  return j;
}

Mat SymplecticForm::apply(const Mat& a) const {
  if (a.rows() != 2 * n_) {
    throw DimensionMismatch("apply_J: expected " + std::to_string(2 * n_) + " rows, got " +
                            a.shape());
  }
  Mat r(a.rows(), a.cols());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      r(i, c) = a(n_ + i, c);
      r(n_ + i, c) = -a(i, c);
    }
  }
  return r;
}

Vec SymplecticForm::apply(const Vec& v) const {
  if (v.size() != 2 * n_) {
    throw DimensionMismatch("apply_J: expected length " + std::to_string(2 * n_) + ", got " +
                            std::to_string(v.size()));
  }
  Vec r(v.size());
  for (std::size_t i = 0; i < n_; ++i) {
    r[i] = v[n_ + i];
    r[n_ + i] = -v[i];
  }
  return r;
}

Mat SymplecticForm::apply_right(const Mat& a) const {
  if (a.cols() != 2 * n_) {
    throw DimensionMismatch("apply_J (right): expected " + std::to_string(2 * n_) +
                            " columns, got " + a.shape());
  }
  // (A J)[:, j] = -A[:, n+j] for j < n, A[:, j-n] for j >= n
  Mat r(a.rows(), a.cols());
  for (std::size_t row = 0; row < a.rows(); ++row) {
    for (std::size_t j = 0; j < n_; ++j) {
      r(row, j) = -a(row, n_ + j);
      r(row, n_ + j) = a(row, j);
    }
  }
  return r;
}

Mat apply_J(std::size_t n, const Mat& a) { return SymplecticForm(n).apply(a); }

double symplectic_defect(std::size_t n, const Mat& t) {
  if (t.rows() != 2 * n || t.cols() != 2 * n) {
    throw DimensionMismatch("symplectic_defect: expected " + std::to_string(2 * n) + "x" +
                            std::to_string(2 * n) + ", got " + t.shape());
  }
  const SymplecticForm j(n);
  return (matmul(t.transpose(), j.apply(t)) - j.matrix()).norm_frobenius();
}

}  // namespace mmt
