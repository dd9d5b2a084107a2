#pragma once

// Dense real linear algebra for the small (2n <= 32) matrices used throughout
// the library. Storage is row-major; everything is a value type.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mmt {

/// Dense real vector.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t size, double fill = 0.0);
  explicit Vec(std::vector<double> entries);
  Vec(std::initializer_list<double> entries);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  Vec& operator+=(const Vec& other);
  Vec& operator-=(const Vec& other);
  Vec& operator*=(double s);

  double norm() const;
  double max_abs() const;
  bool all_finite() const;

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> data_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator-(Vec a);
Vec operator*(double s, Vec a);
Vec operator*(Vec a, double s);
double dot(const Vec& a, const Vec& b);

/// Dense real matrix, row-major.
class Mat {
 public:
  Mat() = default;
  /// Zero matrix.
  Mat(std::size_t rows, std::size_t cols);
  /// Rejects non-finite entries and a length that does not match rows*cols.
  Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat zeros(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }
  static Mat identity(std::size_t n);
  static Mat diagonal(const Vec& diag);
  static Mat column(const Vec& v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::string shape() const;

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Vec col(std::size_t j) const;
  Vec row(std::size_t i) const;
  void set_col(std::size_t j, const Vec& v);

  Mat transpose() const;
  Mat block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
  void set_block(std::size_t r0, std::size_t c0, const Mat& b);

  Mat& operator+=(const Mat& other);
  Mat& operator-=(const Mat& other);
  Mat& operator*=(double s);

  double norm_frobenius() const;
  /// Largest absolute entry.
  double max_abs() const;
  /// Largest absolute row sum.
  double norm_inf() const;
  bool all_finite() const;

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator-(Mat a);
Mat operator*(double s, Mat a);
Mat operator*(Mat a, double s);

/// Standard matrix product; throws DimensionMismatch naming both shapes.
Mat matmul(const Mat& a, const Mat& b);
Vec matvec(const Mat& a, const Vec& x);
Mat outer(const Vec& a, const Vec& b);

/// Solves A X = B by Gaussian elimination with partial pivoting. Throws
/// SingularMatrix when a pivot falls below 1e-12 times the largest row norm.
Mat solve_linear(const Mat& a, const Mat& b);
Vec solve_linear(const Mat& a, const Vec& b);
Mat inverse(const Mat& a);
double determinant(const Mat& a);

/// 2n x 2n matrix viewed as four n x n blocks:
///   [[b11, b12],
///    [b21, b22]]
struct BlockMat2n {
  std::size_t n = 0;
  std::array<Mat, 4> blocks;  // (1,1), (1,2), (2,1), (2,2)

  const Mat& b11() const { return blocks[0]; }
  const Mat& b12() const { return blocks[1]; }
  const Mat& b21() const { return blocks[2]; }
  const Mat& b22() const { return blocks[3]; }

  static BlockMat2n split(const Mat& m);
  static BlockMat2n from_blocks(Mat b11, Mat b12, Mat b21, Mat b22);
  Mat flatten() const;

  friend bool operator==(const BlockMat2n&, const BlockMat2n&) = default;
};

/// The canonical symplectic form J = [[0, I], [-I, 0]] of half-dimension n.
class SymplecticForm {
 public:
  explicit SymplecticForm(std::size_t n) : n_(n) {}
  std::size_t n() const noexcept { return n_; }
  Mat matrix() const;
  /// J * a without forming J.
  Mat apply(const Mat& a) const;
  Vec apply(const Vec& v) const;
  /// a * J without forming J.
  Mat apply_right(const Mat& a) const;

 private:
  std::size_t n_;
};

Mat apply_J(std::size_t n, const Mat& a);

/// ||T^T J T - J||_F; zero iff T is symplectic.
double symplectic_defect(std::size_t n, const Mat& t);

}  // namespace mmt
