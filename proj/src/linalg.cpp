#include "linalg.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mixlab {

namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(n));
}

}  // namespace

Vec::Vec(int n, double fill) : n_(n) {
  check_dim(n);
  for (int i = 0; i < n; ++i) v_[static_cast<size_t>(i)] = fill;
}

Vec::Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
  check_dim(n_);
  int i = 0;
  for (double x : xs) v_[static_cast<size_t>(i++)] = x;
}

bool Vec::all_finite() const {
  for (int i = 0; i < n_; ++i)
    if (!std::isfinite((*this)[i])) return false;
  return true;
}

double Vec::dot(const Vec& o) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)[i] * o[i];
  return s;
}

double Vec::dist2(const Vec& o) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    double d = (*this)[i] - o[i];
    s += d * d;
  }
  return s;
}

Vec& Vec::operator+=(const Vec& o) {
  for (int i = 0; i < n_; ++i) (*this)[i] += o[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  for (int i = 0; i < n_; ++i) (*this)[i] -= o[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (int i = 0; i < n_; ++i) (*this)[i] *= s;
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }
Vec operator-(Vec a) { return a *= -1.0; }

bool operator==(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

Mat::Mat(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dim(rows);
  check_dim(cols);
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::matvec(const Vec& x) const {
  Vec y(rows_);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int c = 0; c < cols_; ++c) s += (*this)(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

Vec Mat::tmatvec(const Vec& x) const {
  Vec y(cols_);
  for (int c = 0; c < cols_; ++c) {
    double s = 0.0;
    for (int r = 0; r < rows_; ++r) s += (*this)(r, c) * x[r];
    y[c] = s;
  }
  return y;
}

Mat Mat::matmul(const Mat& o) const {
  Mat out(rows_, o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int k = 0; k < cols_; ++k) {
      double a = (*this)(r, k);
      for (int c = 0; c < o.cols_; ++c) out(r, c) += a * o(k, c);
    }
  return out;
}

Mat Mat::transposed() const {
  Mat out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Mat Mat::scaled(double s) const {
  Mat out = *this;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) *= s;
  return out;
}

Mat Mat::plus_scaled_identity(double s) const {
  Mat out = *this;
  for (int i = 0; i < rows_; ++i) out(i, i) += s;
  return out;
}

double Mat::trace() const {
  double s = 0.0;
  for (int i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

double Mat::frobenius() const {
  double s = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) s += (*this)(r, c) * (*this)(r, c);
  return std::sqrt(s);
}

double Mat::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int c = r + 1; c < cols_; ++c)
      worst = std::max(worst, std::fabs((*this)(r, c) - (*this)(c, r)));
  return worst;
}

Mat operator+(const Mat& a, const Mat& b) {
  Mat out = a;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) += b(r, c);
  return out;
}

Mat operator-(const Mat& a, const Mat& b) {
  Mat out = a;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) -= b(r, c);
  return out;
}

bool operator==(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      if (a(r, c) != b(r, c)) return false;
  return true;
}

SpdMatrix::SpdMatrix(const Mat& m) : m_(m) {
  if (m.rows() != m.cols()) throw std::domain_error("SpdMatrix: matrix is not square");
  double scale = std::max(1.0, m.frobenius());
  if (m.max_asymmetry() > 1e-12 * scale)
    throw std::domain_error("SpdMatrix: matrix is not symmetric (max asymmetry " +
                            std::to_string(m.max_asymmetry()) + ")");
  // Symmetrize the representation so downstream algebra sees an exactly
  // symmetric matrix, then verify positive definiteness by eigenvalues.
  for (int r = 0; r < m_.rows(); ++r)
    for (int c = r + 1; c < m_.cols(); ++c) {
      double v = 0.5 * (m_(r, c) + m_(c, r));
      m_(r, c) = v;
      m_(c, r) = v;
    }
  EigenSym es = jacobi_eigen(m_);
  if (es.values[0] <= 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", es.values[0]);
    throw std::domain_error(std::string("SpdMatrix: not positive definite, eigenvalue ") + buf);
  }
}

EigenSym jacobi_eigen(const Mat& sym) {
  int n = sym.rows();
  Mat a = sym;
  Mat v = Mat::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-300) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  // Sort ascending by eigenvalue, permuting vector columns alongside.
  EigenSym out;
  out.values = Vec(n);
  out.vectors = Mat(n, n);
  std::array<int, kMaxDim> order{};
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a(order[static_cast<size_t>(j)], order[static_cast<size_t>(j)]) <
          a(order[static_cast<size_t>(i)], order[static_cast<size_t>(i)]))
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  for (int i = 0; i < n; ++i) {
    int src = order[static_cast<size_t>(i)];
    out.values[i] = a(src, src);
    for (int r = 0; r < n; ++r) out.vectors(r, i) = v(r, src);
  }
  return out;
}

SpdMatrix spd_sqrt(const SpdMatrix& m) {
  EigenSym es = jacobi_eigen(m.mat());
  int n = m.dim();
  if (es.values[0] <= 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", es.values[0]);
    throw std::domain_error(std::string("spd_sqrt: not positive definite, eigenvalue ") + buf);
  }
  Mat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += es.vectors(i, k) * std::sqrt(es.values[k]) * es.vectors(j, k);
      r(i, j) = s;
    }
  // Round tiny asymmetries from the accumulation so SpdMatrix accepts it.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (r(i, j) + r(j, i));
      r(i, j) = v;
      r(j, i) = v;
    }
  return SpdMatrix(r);
}

Mat cholesky(const Mat& sym) {
  int n = sym.rows();
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = sym(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0)
      throw std::domain_error("cholesky: matrix not positive definite at pivot " +
                              std::to_string(j));
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = sym(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vec cholesky_solve(const Mat& l, const Vec& b) {
  int n = l.rows();
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

Mat invert_spd(const Mat& sym) {
  Mat l = cholesky(sym);
  int n = sym.rows();
  Mat inv(n, n);
  for (int c = 0; c < n; ++c) {
    Vec e(n);
    e[c] = 1.0;
    Vec x = cholesky_solve(l, e);
    for (int r = 0; r < n; ++r) inv(r, c) = x[r];
  }
  // Exact symmetry for downstream SPD consumers.
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      double v = 0.5 * (inv(r, c) + inv(c, r));
      inv(r, c) = v;
      inv(c, r) = v;
    }
  return inv;
}

double logdet_from_cholesky(const Mat& l) {
  double s = 0.0;
  for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ")";
  return os.str();
}

}  // namespace mixlab
