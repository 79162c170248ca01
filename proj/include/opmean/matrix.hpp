#ifndef OPMEAN_MATRIX_HPP
#define OPMEAN_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace opmean {

using Vector = std::vector<double>;

// Dense square real matrix, row-major. Small n only (desk scale).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), data_(static_cast<size_t>(n) * n, 0.0) {}
  Matrix(int n, std::vector<double> data);

  static Matrix identity(int n);

  int n() const { return n_; }
  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

 private:
  int n_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Matrix transpose(const Matrix& a);
// (A + A^T)/2
Matrix sym_part(const Matrix& a);
double frob_norm(const Matrix& a);
double max_abs(const Matrix& a);
// max_ij |A_ij - A_ji|
double asym_defect(const Matrix& a);

Vector mat_vec(const Matrix& a, const Vector& x);
double dot(const Vector& x, const Vector& y);
double vec_norm(const Vector& x);
// x^T A x
double quad_form(const Matrix& a, const Vector& x);
double trace(const Matrix& a);

// [[a, b], [c, d]] as a 2n x 2n matrix
Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

}  // namespace opmean

#endif
