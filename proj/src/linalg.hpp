#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

namespace mixlab {

// Hard cap on the sample-space / embedding dimension. Everything lives on the
// stack; no heap traffic in the sampling hot path.
inline constexpr int kMaxDim = 16;

class Vec {
 public:
  Vec() = default;
  explicit Vec(int n, double fill = 0.0);
  Vec(std::initializer_list<double> xs);

  static Vec zeros(int n) { return Vec(n); }

  int size() const { return n_; }
  double& operator[](int i) { return v_[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  bool all_finite() const;
  double dot(const Vec& o) const;
  double norm() const { return std::sqrt(dot(*this)); }
  double dist2(const Vec& o) const;

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

 private:
  std::array<double, kMaxDim> v_{};
  int n_ = 0;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);
Vec operator-(Vec a);
bool operator==(const Vec& a, const Vec& b);

// Row-major dense matrix, fixed capacity kMaxDim x kMaxDim.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols);

  static Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return m_[static_cast<size_t>(r * cols_ + c)]; }
  double operator()(int r, int c) const { return m_[static_cast<size_t>(r * cols_ + c)]; }

  Vec matvec(const Vec& x) const;
  Vec tmatvec(const Vec& x) const;  // transpose(this) * x
  Mat matmul(const Mat& o) const;
  Mat transposed() const;
  Mat scaled(double s) const;
  Mat plus_scaled_identity(double s) const;
  double trace() const;
  double frobenius() const;
  double max_asymmetry() const;  // max |a_ij - a_ji|

 private:
  std::array<double, kMaxDim * kMaxDim> m_{};
  int rows_ = 0;
  int cols_ = 0;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
bool operator==(const Mat& a, const Mat& b);

// Symmetric positive-definite matrix. Construction validates symmetry
// (tolerance 1e-12 relative) and positive definiteness.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(const Mat& m);

  static SpdMatrix identity(int n) { return SpdMatrix(Mat::identity(n)); }

  int dim() const { return m_.rows(); }
  double operator()(int r, int c) const { return m_(r, c); }
  const Mat& mat() const { return m_; }

 private:
  Mat m_;
};

struct EigenSym {
  Vec values;    // ascending
  Mat vectors;   // columns are eigenvectors
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
EigenSym jacobi_eigen(const Mat& sym);

// Symmetric square root R of an SPD matrix, R*R = M to relative error 1e-10.
SpdMatrix spd_sqrt(const SpdMatrix& m);

// Cholesky factor L (lower), M = L L^T. Throws std::domain_error if not PD.
Mat cholesky(const Mat& sym);

// Solve M x = b given the Cholesky factor of M.
Vec cholesky_solve(const Mat& chol_l, const Vec& b);

Mat invert_spd(const Mat& sym);
double logdet_from_cholesky(const Mat& chol_l);

std::string to_string(const Vec& v);

}  // namespace mixlab
