#include "opmean/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace opmean {

Matrix::Matrix(int n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("Matrix: data size does not match dimension");
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix r = a;
  r += b;
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix r = a;
  r -= b;
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  const int n = a.n();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix r = a;
  r *= s;
  return r;
}

Matrix transpose(const Matrix& a) {
  const int n = a.n();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = a(j, i);
  return r;
}

Matrix sym_part(const Matrix& a) {
  const int n = a.n();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = 0.5 * (a(i, j) + a(j, i));
  return r;
}

double frob_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double asym_defect(const Matrix& a) {
  const int n = a.n();
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

Vector mat_vec(const Matrix& a, const Vector& x) {
  const int n = a.n();
  Vector y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const Vector& x, const Vector& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double vec_norm(const Vector& x) { return std::sqrt(dot(x, x)); }

double quad_form(const Matrix& a, const Vector& x) { return dot(x, mat_vec(a, x)); }

double trace(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.n(); ++i) s += a(i, i);
  return s;
}

Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  const int n = a.n();
  Matrix r(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      r(i, j) = a(i, j);
      r(i, j + n) = b(i, j);
      r(i + n, j) = c(i, j);
      r(i + n, j + n) = d(i, j);
    }
  return r;
}

}  // namespace opmean
