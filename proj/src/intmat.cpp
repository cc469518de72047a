#include "omf/intmat.hpp"

#include <stdexcept>

namespace omf {

IMat IMat::identity(int n) {
  IMat m(n, n);
  for (int i = 0; i < n; i++) m.at(i, i) = 1;
  return m;
}

IMat mul(const IMat& x, const IMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("IMat mul: shape");
  IMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; i++)
    for (int k = 0; k < x.cols; k++) {
      if (x.at(i, k) == 0) continue;
      for (int j = 0; j < y.cols; j++) r.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return r;
}

IMat transpose(const IMat& x) {
  IMat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; i++)
    for (int j = 0; j < x.cols; j++) r.at(j, i) = x.at(i, j);
  return r;
}

IMat add(const IMat& x, const IMat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("IMat add: shape");
  IMat r(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); i++) r.a[i] = x.a[i] + y.a[i];
  return r;
}

IMat scale(const IMat& x, const mpz_class& c) {
  IMat r = x;
  for (auto& v : r.a) v *= c;
  return r;
}

std::vector<mpz_class> mul_vec(const IMat& m, const std::vector<mpz_class>& v) {
  if ((int)v.size() != m.cols) throw std::invalid_argument("mul_vec: shape");
  std::vector<mpz_class> r(m.rows);
  for (int i = 0; i < m.rows; i++)
    for (int j = 0; j < m.cols; j++) r[i] += m.at(i, j) * v[j];
  return r;
}

QMat to_q(const IMat& x) {
  QMat r(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); i++) r.a[i] = mpq_class(x.a[i]);
  return r;
}

QMat mul(const QMat& x, const QMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("QMat mul: shape");
  QMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; i++)
    for (int k = 0; k < x.cols; k++) {
      if (x.at(i, k) == 0) continue;
      for (int j = 0; j < y.cols; j++) r.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return r;
}

QMat transpose(const QMat& x) {
  QMat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; i++)
    for (int j = 0; j < x.cols; j++) r.at(j, i) = x.at(i, j);
  return r;
}

std::vector<mpq_class> mul_vec(const QMat& m, const std::vector<mpq_class>& v) {
  if ((int)v.size() != m.cols) throw std::invalid_argument("mul_vec: shape");
  std::vector<mpq_class> r(m.rows);
  for (int i = 0; i < m.rows; i++)
    for (int j = 0; j < m.cols; j++) r[i] += m.at(i, j) * v[j];
  return r;
}

mpq_class det(const QMat& m0) {
  if (m0.rows != m0.cols) throw std::invalid_argument("det: not square");
  QMat m = m0;
  int n = m.rows;
  mpq_class d = 1;
  for (int c = 0; c < n; c++) {
    int piv = -1;
    for (int r = c; r < n; r++)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; j++) std::swap(m.at(piv, j), m.at(c, j));
      d = -d;
    }
    d *= m.at(c, c);
    mpq_class inv = 1 / m.at(c, c);
    for (int r = c + 1; r < n; r++) {
      if (m.at(r, c) == 0) continue;
      mpq_class f = m.at(r, c) * inv;
      for (int j = c; j < n; j++) m.at(r, j) -= f * m.at(c, j);
    }
  }
  return d;
}

mpz_class det(const IMat& m) {
  mpq_class d = det(to_q(m));
  if (d.get_den() != 1) throw std::logic_error("det: non-integer");
  return d.get_num();
}

QMat inverse(const QMat& m0) {
  if (m0.rows != m0.cols) throw std::invalid_argument("inverse: not square");
  int n = m0.rows;
  QMat m = m0, inv(n, n);
  for (int i = 0; i < n; i++) inv.at(i, i) = 1;
  for (int c = 0; c < n; c++) {
    int piv = -1;
    for (int r = c; r < n; r++)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("inverse: singular");
    if (piv != c)
      for (int j = 0; j < n; j++) {
        std::swap(m.at(piv, j), m.at(c, j));
        std::swap(inv.at(piv, j), inv.at(c, j));
      }
    mpq_class p = m.at(c, c);
    for (int j = 0; j < n; j++) {
      m.at(c, j) /= p;
      inv.at(c, j) /= p;
    }
    for (int r = 0; r < n; r++) {
      if (r == c || m.at(r, c) == 0) continue;
      mpq_class f = m.at(r, c);
      for (int j = 0; j < n; j++) {
        m.at(r, j) -= f * m.at(c, j);
        inv.at(r, j) -= f * inv.at(c, j);
      }
    }
  }
  return inv;
}

QMat inverse(const IMat& m) { return inverse(to_q(m)); }

// row op on D tracked in U; col op tracked in V
SNF smith_normal_form(const IMat& m) {
  SNF s;
  s.D = m;
  s.U = IMat::identity(m.rows);
  s.V = IMat::identity(m.cols);
  IMat& D = s.D;
  auto row_swap = [&](int i, int j) {
    for (int c = 0; c < D.cols; c++) std::swap(D.at(i, c), D.at(j, c));
    for (int c = 0; c < s.U.cols; c++) std::swap(s.U.at(i, c), s.U.at(j, c));
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < D.rows; r++) std::swap(D.at(r, i), D.at(r, j));
    for (int r = 0; r < s.V.rows; r++) std::swap(s.V.at(r, i), s.V.at(r, j));
  };
  auto row_add = [&](int dst, int src, const mpz_class& f) {
    for (int c = 0; c < D.cols; c++) D.at(dst, c) += f * D.at(src, c);
    for (int c = 0; c < s.U.cols; c++) s.U.at(dst, c) += f * s.U.at(src, c);
  };
  auto col_add = [&](int dst, int src, const mpz_class& f) {
    for (int r = 0; r < D.rows; r++) D.at(r, dst) += f * D.at(r, src);
    for (int r = 0; r < s.V.rows; r++) s.V.at(r, dst) += f * s.V.at(r, src);
  };
  auto row_neg = [&](int i) {
    for (int c = 0; c < D.cols; c++) D.at(i, c) = -D.at(i, c);
    for (int c = 0; c < s.U.cols; c++) s.U.at(i, c) = -s.U.at(i, c);
  };

  int n = std::min(D.rows, D.cols);
  for (int t = 0; t < n; t++) {
    // find nonzero entry of least absolute value in the trailing block
    int pi = -1, pj = -1;
    mpz_class best;
    for (int i = t; i < D.rows; i++)
      for (int j = t; j < D.cols; j++) {
        if (D.at(i, j) == 0) continue;
        mpz_class v = abs(D.at(i, j));
        if (pi < 0 || v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < D.rows; i++) {
        if (D.at(i, t) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), D.at(i, t).get_mpz_t(), D.at(t, t).get_mpz_t());
        row_add(i, t, -q);
        if (D.at(i, t) != 0) {
          row_swap(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < D.cols; j++) {
        if (D.at(t, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), D.at(t, j).get_mpz_t(), D.at(t, t).get_mpz_t());
        col_add(j, t, -q);
        if (D.at(t, j) != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
    }
    if (D.at(t, t) < 0) row_neg(t);
  }
  // enforce divisibility chain
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t + 1 < n; t++) {
      if (D.at(t, t) == 0 && D.at(t + 1, t + 1) != 0) {
        row_swap(t, t + 1);
        col_swap(t, t + 1);
        changed = true;
        continue;
      }
      if (D.at(t, t) == 0 || D.at(t + 1, t + 1) == 0) continue;
      if (D.at(t + 1, t + 1) % D.at(t, t) == 0) continue;
      // standard 2x2 gcd repair
      col_add(t, t + 1, 1);
      bool clean = false;
      while (!clean) {
        clean = true;
        mpz_class q;
        if (D.at(t + 1, t) != 0) {
          mpz_fdiv_q(q.get_mpz_t(), D.at(t + 1, t).get_mpz_t(), D.at(t, t).get_mpz_t());
          row_add(t + 1, t, -q);
          if (D.at(t + 1, t) != 0) {
            row_swap(t, t + 1);
            clean = false;
            continue;
          }
        }
        if (D.at(t, t + 1) != 0) {
          mpz_fdiv_q(q.get_mpz_t(), D.at(t, t + 1).get_mpz_t(), D.at(t, t).get_mpz_t());
          col_add(t + 1, t, -q);
          if (D.at(t, t + 1) != 0) {
            col_swap(t, t + 1);
            clean = false;
          }
        }
      }
      if (D.at(t, t) < 0) row_neg(t);
      if (D.at(t + 1, t + 1) < 0) row_neg(t + 1);
      changed = true;
    }
  }
  return s;
}

IMat kernel_basis(const IMat& m) {
  SNF s = smith_normal_form(m);
  int n = std::min(m.rows, m.cols);
  std::vector<int> zero_cols;
  for (int j = 0; j < m.cols; j++) {
    bool z = (j >= n) || (s.D.at(j, j) == 0);
    if (z) zero_cols.push_back(j);
  }
  IMat k(m.cols, (int)zero_cols.size());
  for (size_t t = 0; t < zero_cols.size(); t++)
    for (int i = 0; i < m.cols; i++) k.at(i, (int)t) = s.V.at(i, zero_cols[t]);
  return k;
}

// det(xI - M) by evaluation at n+1 integer points + exact interpolation
std::vector<mpz_class> char_poly(const IMat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("char_poly: not square");
  int n = m.rows;
  std::vector<mpq_class> xs(n + 1), ys(n + 1);
  for (int k = 0; k <= n; k++) {
    IMat a = m;
    for (int i = 0; i < n; i++) a.at(i, i) = mpz_class(k) - a.at(i, i);
    // det(kI - M) with sign fix: a = kI - M composed rowwise above requires care
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++)
        if (i != j) a.at(i, j) = -m.at(i, j);
    xs[k] = k;
    ys[k] = mpq_class(det(a));
  }
  // Lagrange interpolation over Q
  std::vector<mpq_class> poly(n + 1, 0);
  for (int k = 0; k <= n; k++) {
    std::vector<mpq_class> basis = {1};
    mpq_class denom = 1;
    for (int j = 0; j <= n; j++) {
      if (j == k) continue;
      std::vector<mpq_class> nb(basis.size() + 1, 0);
      for (size_t t = 0; t < basis.size(); t++) {
        nb[t] -= basis[t] * xs[j];
        nb[t + 1] += basis[t];
      }
      basis = nb;
      denom *= xs[k] - xs[j];
    }
    mpq_class f = ys[k] / denom;
    for (size_t t = 0; t < basis.size(); t++) poly[t] += basis[t] * f;
  }
  std::vector<mpz_class> out(n + 1);
  for (int t = 0; t <= n; t++) {
    if (poly[t].get_den() != 1) throw std::logic_error("char_poly: non-integer coeff");
    out[t] = poly[t].get_num();
  }
  return out;
}

std::pair<int, int> signature(const IMat& gram) {
  if (gram.rows != gram.cols) throw std::invalid_argument("signature: not square");
  QMat m = to_q(gram);
  int n = m.rows, pos = 0, neg = 0;
  std::vector<bool> used(n, false);
  for (int step = 0; step < n; step++) {
    // pick an unused index with nonzero diagonal, fixing up if needed
    int p = -1;
    for (int i = 0; i < n; i++)
      if (!used[i] && m.at(i, i) != 0) {
        p = i;
        break;
      }
    if (p < 0) {
      // all remaining diagonals zero: find off-diagonal pair and mix
      int a = -1, b = -1;
      for (int i = 0; i < n && a < 0; i++) {
        if (used[i]) continue;
        for (int j = i + 1; j < n; j++) {
          if (used[j]) continue;
          if (m.at(i, j) != 0) {
            a = i;
            b = j;
            break;
          }
        }
      }
      if (a < 0) break;  // degenerate remainder
      for (int j = 0; j < n; j++) m.at(a, j) += m.at(b, j);
      for (int i = 0; i < n; i++) m.at(i, a) += m.at(i, b);
      p = a;
    }
    used[p] = true;
    if (m.at(p, p) > 0) pos++; else neg++;
    mpq_class d = m.at(p, p);
    for (int i = 0; i < n; i++) {
      if (used[i] || m.at(i, p) == 0) continue;
      mpq_class f = m.at(i, p) / d;
      for (int j = 0; j < n; j++) m.at(i, j) -= f * m.at(p, j);
      for (int j = 0; j < n; j++) m.at(j, i) -= f * m.at(j, p);
    }
  }
  return {pos, neg};
}

}  // namespace omf
