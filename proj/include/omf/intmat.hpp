#pragma once

// Small dense matrices over Z and Q with the exact-arithmetic kernels the
// lattice layer needs: Smith normal form with transforms, determinants,
// saturated integer kernels, rational inverses and characteristic
// polynomials. Sizes here are tiny (rank <= 8), so clarity beats cleverness.

#include <gmpxx.h>

#include <vector>

namespace omf {

struct IMat {
  int rows = 0, cols = 0;
  std::vector<mpz_class> a;

  IMat() = default;
  IMat(int r, int c) : rows(r), cols(c), a(r * c) {}
  mpz_class& at(int i, int j) { return a[i * cols + j]; }
  const mpz_class& at(int i, int j) const { return a[i * cols + j]; }
  static IMat identity(int n);
  bool operator==(const IMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

struct QMat {
  int rows = 0, cols = 0;
  std::vector<mpq_class> a;
  QMat() = default;
  QMat(int r, int c) : rows(r), cols(c), a(r * c) {}
  mpq_class& at(int i, int j) { return a[i * cols + j]; }
  const mpq_class& at(int i, int j) const { return a[i * cols + j]; }
};

IMat mul(const IMat& x, const IMat& y);
IMat transpose(const IMat& x);
IMat add(const IMat& x, const IMat& y);
IMat scale(const IMat& x, const mpz_class& c);
std::vector<mpz_class> mul_vec(const IMat& m, const std::vector<mpz_class>& v);

QMat to_q(const IMat& x);
QMat mul(const QMat& x, const QMat& y);
QMat transpose(const QMat& x);
std::vector<mpq_class> mul_vec(const QMat& m, const std::vector<mpq_class>& v);

// exact determinant (fraction-free Gauss)
mpz_class det(const IMat& m);
mpq_class det(const QMat& m);

// rational inverse; throws on singular
QMat inverse(const QMat& m);
QMat inverse(const IMat& m);

struct SNF {
  IMat U, D, V;  // U*M*V = D, U,V unimodular, diag d1 | d2 | ...
};
SNF smith_normal_form(const IMat& m);

// basis (as columns) of {x in Z^cols : m x = 0}; saturated by construction
IMat kernel_basis(const IMat& m);

// characteristic polynomial of a square matrix, coefficients low-to-high
std::vector<mpz_class> char_poly(const IMat& m);

// signature (#positive, #negative eigenvalues) of a symmetric nondegenerate
// integer matrix, by rational symmetric reduction (law of inertia)
std::pair<int, int> signature(const IMat& gram);

}  // namespace omf
