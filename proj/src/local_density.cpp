#include "omf/local_density.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "omf/arith.hpp"

namespace omf {

int JordanDecomposition::total_rank() const {
  int r = 0;
  for (auto& b : blocks) r += b.rank;
  return r;
}

namespace {

int val_p(const mpz_class& x, uint64_t p) {
  if (x == 0) return 1 << 20;  // effectively infinite
  return padic_val(x, p);
}

// symmetric congruence: subtract f * (row/col piv) from row/col i, working
// with exact integers scaled so divisions stay exact mod p^K
struct Work {
  std::vector<std::vector<mpz_class>> a;
  mpz_class mod;  // p^K
  int n;
  void reduce() {
    for (auto& row : a)
      for (auto& v : row) {
        v %= mod;
        if (v < 0) v += mod;
      }
  }
};

mpz_class inv_mod(const mpz_class& u, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::logic_error("inv_mod: not invertible");
  return r;
}

// classification of an even unimodular 2x2 over Z_2 by det mod 8: U-type
// (det = 7) has chi +1, V-type (det = 3) has chi -1
int even2x2_chi(const mpz_class& alpha, const mpz_class& beta, const mpz_class& gamma) {
  mpz_class det = alpha * gamma - beta * beta;
  mpz_class m = det % 8;
  if (m < 0) m += 8;
  if (m == 7) return 1;
  if (m == 3) return -1;
  throw std::logic_error("even2x2_chi: unexpected determinant class");
}

}  // namespace

JordanDecomposition jordan_decompose(const GramLattice& L, uint64_t p) {
  int n = L.gram.rows;
  mpz_class d = det(L.gram);
  int K = padic_val(d, p) + 6;
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), (unsigned long)p, (unsigned long)K);

  Work w;
  w.n = n;
  w.mod = mod;
  w.a.assign(n, std::vector<mpz_class>(n));
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) w.a[i][j] = L.gram.at(i, j);
  w.reduce();

  std::vector<int> alive(n);
  for (int i = 0; i < n; i++) alive[i] = i;

  struct Odd1 { int scale; mpz_class unit; };
  struct Even2 { int scale; mpz_class al, be, ga; };  // scaled-down entries
  std::vector<Odd1> odds;
  std::vector<Even2> evens;

  auto swap_idx = [&](int i, int j) { std::swap(alive[i], alive[j]); };

  while (!alive.empty()) {
    int m = (int)alive.size();
    // locate min valuation
    int minval = 1 << 20, pi = -1, pj = -1;
    for (int i = 0; i < m; i++)
      for (int j = i; j < m; j++) {
        int v = val_p(w.a[alive[i]][alive[j]], p);
        if (v < minval) {
          minval = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0 || minval >= K) throw std::logic_error("jordan: exhausted precision");
    bool diag_hit = false;
    int di = -1;
    for (int i = 0; i < m; i++)
      if (val_p(w.a[alive[i]][alive[i]], p) == minval) {
        diag_hit = true;
        di = i;
        break;
      }
    if (p != 2 && !diag_hit) {
      // mix row pj into pi to expose a diagonal of min valuation (2 is a unit)
      int r = alive[pi], c = alive[pj];
      for (int t = 0; t < n; t++) w.a[r][t] = (w.a[r][t] + w.a[c][t]) % w.mod;
      for (int t = 0; t < n; t++) w.a[t][r] = (w.a[t][r] + w.a[t][c]) % w.mod;
      diag_hit = true;
      di = pi;
    }
    if (diag_hit) {
      swap_idx(0, di);
      int r = alive[0];
      mpz_class piv = w.a[r][r];
      mpz_class pa;
      mpz_ui_pow_ui(pa.get_mpz_t(), (unsigned long)p, (unsigned long)minval);
      mpz_class unit = (piv / pa) % w.mod;
      mpz_class uinv = inv_mod(unit, w.mod);
      for (int t = 1; t < m; t++) {
        int c = alive[t];
        if (w.a[r][c] == 0) continue;
        // f = a[r][c] / piv, exact in Z_p
        mpz_class f = ((w.a[r][c] / pa) % w.mod) * uinv % w.mod;
        for (int s = 0; s < n; s++)
          w.a[c][s] = (w.a[c][s] - f * w.a[r][s]) % w.mod;
        for (int s = 0; s < n; s++)
          w.a[s][c] = (w.a[s][c] - f * w.a[s][r]) % w.mod;
        w.reduce();
      }
      odds.push_back({minval, unit});
      alive.erase(alive.begin());
    } else {
      // p = 2, off-diagonal pivot: split an even 2x2
      swap_idx(0, pi);
      swap_idx(1, pj == 0 ? pi : pj);
      int r0 = alive[0], r1 = alive[1];
      mpz_class pa;
      mpz_ui_pow_ui(pa.get_mpz_t(), (unsigned long)p, (unsigned long)minval);
      mpz_class al = w.a[r0][r0] / pa, be = w.a[r0][r1] / pa, ga = w.a[r1][r1] / pa;
      mpz_class blockdet = (al * ga - be * be) % w.mod;
      if (blockdet < 0) blockdet += w.mod;
      mpz_class dinv = inv_mod(blockdet, w.mod);
      for (int t = 2; t < m; t++) {
        int c = alive[t];
        mpz_class b0 = w.a[r0][c] / pa, b1 = w.a[r1][c] / pa;
        // (f0, f1) = M2^{-1} (b0, b1)
        mpz_class f0 = ((ga * b0 - be * b1) % w.mod) * dinv % w.mod;
        mpz_class f1 = ((-be * b0 + al * b1) % w.mod) * dinv % w.mod;
        for (int s = 0; s < n; s++)
          w.a[c][s] = (w.a[c][s] - f0 * w.a[r0][s] - f1 * w.a[r1][s]) % w.mod;
        for (int s = 0; s < n; s++)
          w.a[s][c] = (w.a[s][c] - f0 * w.a[s][r0] - f1 * w.a[s][r1]) % w.mod;
        w.reduce();
      }
      evens.push_back({minval, al % 8, be % 8, ga % 8});
      alive.erase(alive.begin(), alive.begin() + 2);
    }
  }

  if (p != 2) {
    // all summands are diagonal; chi from (-1)^{r/2} det
    std::map<int, std::vector<mpz_class>> units;
    for (auto& o : odds) units[o.scale].push_back(o.unit);
    JordanDecomposition dec;
    dec.p = p;
    for (auto& [s, us] : units) {
      JordanBlock b;
      b.scale_exp = s;
      b.rank = (int)us.size();
      b.even_rank = b.rank;
      b.odd = false;
      if (b.rank % 2 == 1) {
        b.chi = 0;
      } else {
        mpz_class prod = 1;
        for (auto& u : us) prod = prod * u;
        mpz_class arg = (b.rank / 2) % 2 == 0 ? prod : -prod;
        b.chi = kronecker(arg, mpz_class((unsigned long)p));
      }
      dec.blocks.push_back(b);
    }
    return dec;
  }

  // p = 2: collect per scale, reduce odd parts to rank <= 2
  std::map<int, std::pair<std::vector<mpz_class>, std::vector<int>>> parts;
  // second: list of chi signs of even 2x2 summands
  for (auto& o : odds) {
    mpz_class u = o.unit % 8;
    if (u < 0) u += 8;
    parts[o.scale].first.push_back(u);
  }
  for (auto& e : evens) parts[e.scale].second.push_back(even2x2_chi(e.al, e.be, e.ga));

  JordanDecomposition dec;
  dec.p = 2;
  for (auto& [s, pr] : parts) {
    auto& odd_units = pr.first;
    auto& even_chis = pr.second;
    // reduce odd part: <a> + <b> + <c> = <w> + (U or V), w = a+b+c mod 8,
    // type by det * w^{-1} mod 8 (7 -> U, 3 -> V)
    while (odd_units.size() >= 3) {
      mpz_class a = odd_units.back(); odd_units.pop_back();
      mpz_class b = odd_units.back(); odd_units.pop_back();
      mpz_class c = odd_units.back(); odd_units.pop_back();
      mpz_class det3 = (a * b * c) % 8;
      mpz_class wsum = (a + b + c) % 8;
      mpz_class winv = inv_mod(wsum, mpz_class(8));
      mpz_class cls = (det3 * winv) % 8;
      if (cls == 7)
        even_chis.push_back(1);
      else if (cls == 3)
        even_chis.push_back(-1);
      else
        throw std::logic_error("odd part reduction: bad class");
      odd_units.push_back(wsum);
    }
    JordanBlock b;
    b.scale_exp = s;
    b.even_rank = 2 * (int)even_chis.size();
    b.rank = b.even_rank + (int)odd_units.size();
    b.odd = !odd_units.empty();
    b.chi = 1;
    for (int c : even_chis) b.chi *= c;
    if (b.even_rank == 0) b.chi = 1;  // trivial even part counts as hyperbolic
    for (auto& u : odd_units) b.odd_units_mod8.push_back((int)u.get_si());
    std::sort(b.odd_units_mod8.begin(), b.odd_units_mod8.end());
    dec.blocks.push_back(b);
  }
  std::sort(dec.blocks.begin(), dec.blocks.end(),
            [](const JordanBlock& x, const JordanBlock& y) { return x.scale_exp < y.scale_exp; });
  return dec;
}

int chi_unimodular(const JordanBlock& b, uint64_t p) {
  if (p == 2) return b.chi;
  return b.chi;
}

mpq_class p_product(uint64_t p, int n) {
  mpq_class r = 1;
  mpz_class pk = 1;
  mpz_class p2((unsigned long)p);
  p2 = p2 * p2;
  for (int i = 1; i <= n; i++) {
    pk *= p2;
    mpq_class term(pk - 1, pk);
    term.canonicalize();
    r *= term;
  }
  return r;
}

static mpq_class pow_q(const mpq_class& b, int e) {
  mpq_class r = 1;
  mpq_class a = e >= 0 ? b : mpq_class(1) / b;
  int n = e >= 0 ? e : -e;
  for (int i = 0; i < n; i++) r *= a;
  return r;
}

mpq_class alpha_p(const JordanDecomposition& dec) {
  uint64_t p = dec.p;
  int m = dec.total_rank();
  // w = sum_j j n_j ((n_j+1)/2 + sum_{k>j} n_k)
  mpq_class w = 0;
  for (size_t i = 0; i < dec.blocks.size(); i++) {
    const auto& b = dec.blocks[i];
    mpq_class later = 0;
    for (size_t k = i + 1; k < dec.blocks.size(); k++) later += dec.blocks[k].rank;
    w += mpq_class(b.scale_exp) * b.rank * (mpq_class(b.rank + 1, 2) + later);
  }
  if (w.get_den() != 1) throw std::logic_error("alpha_p: non-integer w");
  long wi = w.get_num().get_si();
  mpq_class pq((unsigned long)p);

  if (p != 2) {
    int s = (int)dec.blocks.size();
    mpq_class P = 1, E = 1;
    for (auto& b : dec.blocks) {
      P *= p_product(p, b.rank / 2);
      if (b.chi != 0) {
        // (1 + chi p^{-rank/2})^{-1}
        mpq_class t = 1 + mpq_class(b.chi) * pow_q(pq, -(b.rank / 2));
        E /= t;
      }
    }
    return pow_q(mpq_class(2), s - 1) * pow_q(pq, wi) * P * E;
  }

  // p = 2
  std::map<int, const JordanBlock*> at;
  int lo = 1 << 20, hi = -(1 << 20);
  for (auto& b : dec.blocks) {
    at[b.scale_exp] = &b;
    lo = std::min(lo, b.scale_exp);
    hi = std::max(hi, b.scale_exp);
  }
  auto trivial = JordanBlock{};
  trivial.chi = 1;
  auto blk = [&](int j) -> const JordanBlock& {
    auto it = at.find(j);
    return it == at.end() ? trivial : *it->second;
  };
  auto is_even_or_trivial = [&](int j) { return !blk(j).odd; };

  mpq_class P = 1;
  for (auto& b : dec.blocks) P *= p_product(2, b.even_rank / 2);

  long q = 0;
  for (auto& b : dec.blocks) {
    if (!b.odd) continue;
    if (!blk(b.scale_exp + 1).odd)
      q += b.rank;
    else
      q += b.rank + 1;
  }

  mpq_class E2 = 1;
  for (int j = lo - 1; j <= hi + 1; j++) {
    const JordanBlock& b = blk(j);
    bool nbrs_even = is_even_or_trivial(j - 1) && is_even_or_trivial(j + 1);
    bool exception = (b.odd_units_mod8.size() == 2) &&
                     ((b.odd_units_mod8[0] - b.odd_units_mod8[1]) % 4 == 0);
    mpq_class Ej;
    if (nbrs_even && !exception)
      Ej = mpq_class(1, 2) * (1 + mpq_class(b.chi) * pow_q(mpq_class(2), -(b.even_rank / 2)));
    else
      Ej = mpq_class(1, 2);
    E2 /= Ej;
  }
  return pow_q(mpq_class(2), m - 1 + wi - q) * P * E2;
}

// ---- counting oracle over Z/q, q = p^r, rank <= 3 ----

namespace {

struct ModCtx {
  uint32_t q;
  uint32_t s[3][3];
  int n;
};

// one linear congruence c . z = rhs (mod q); returns solutions for z[k]
// given others, appended via callback
inline bool solve_lin(uint32_t c, uint32_t rhs, uint32_t q, uint32_t sols[],
                      int& nsols) {
  // c z = rhs (mod q): g = gcd(c, q) must divide rhs; g solutions
  uint32_t g = (uint32_t)gcd_u64(c, q);
  if (rhs % g != 0) return false;
  uint32_t q2 = q / g, c2 = c / g, r2 = rhs / g;
  // inverse of c2 mod q2
  int64_t t = 0, newt = 1;
  int64_t rr = q2, newr = c2 % q2;
  while (newr != 0) {
    int64_t quot = rr / newr;
    int64_t tmp = t - quot * newt;
    t = newt;
    newt = tmp;
    tmp = rr - quot * newr;
    rr = newr;
    newr = tmp;
  }
  uint32_t inv = (uint32_t)((t % (int64_t)q2 + q2) % q2);
  uint32_t z0 = q2 == 1 ? 0 : (uint32_t)((uint64_t)inv * (r2 % q2) % q2);
  nsols = 0;
  for (uint32_t k = 0; k < g; k++) sols[nsols++] = (z0 + k * q2) % q;
  return true;
}

}  // namespace

unsigned long long alpha_p_oracle_count(const GramLattice& L, uint64_t p, int r,
                                        int shards, int shard) {
  int n = L.gram.rows;
  if (n > 3) throw std::invalid_argument("alpha_p_oracle: rank > 3");
  mpz_class qz;
  mpz_ui_pow_ui(qz.get_mpz_t(), (unsigned long)p, (unsigned long)r);
  if (qz > 128) throw std::invalid_argument("alpha_p_oracle: p^r > 128");
  uint32_t q = (uint32_t)qz.get_ui();
  ModCtx cx;
  cx.q = q;
  cx.n = n;
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      mpz_class v = L.gram.at(i, j) % qz;
      if (v < 0) v += qz;
      cx.s[i][j] = (uint32_t)v.get_ui();
    }
  auto Q = [&](const uint32_t x[]) {
    uint64_t v = 0;
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) v += (uint64_t)cx.s[i][j] * x[i] % q * x[j];
    return (uint32_t)(v % q);
  };
  auto Brow = [&](const uint32_t x[], uint32_t out[]) {
    for (int j = 0; j < n; j++) {
      uint64_t v = 0;
      for (int i = 0; i < n; i++) v += (uint64_t)x[i] * cx.s[i][j];
      out[j] = (uint32_t)(v % q);
    }
  };

  unsigned long long count = 0;
  if (n == 1) {
    uint32_t x[1];
    for (uint32_t a = 0; a < q; a++) {
      if ((int)(a % (uint32_t)shards) != shard % shards) continue;
      x[0] = a;
      if (Q(x) == cx.s[0][0]) count++;
    }
    return count;
  }
  if (n == 2) {
    uint32_t x[2], y[2], gx[2];
    for (uint32_t a = 0; a < q; a++) {
      if ((int)(a % (uint32_t)shards) != shard % shards) continue;
      for (uint32_t b = 0; b < q; b++) {
        x[0] = a;
        x[1] = b;
        if (Q(x) != cx.s[0][0]) continue;
        Brow(x, gx);
        // B(x,y) = s01 and Q(y) = s11
        uint32_t sols[128];
        int ns;
        for (uint32_t yc = 0; yc < q; yc++) {
          // pick pivot on y0 coefficient gx[0]; enumerate y1 = yc
          uint32_t rhs = (uint32_t)(((uint64_t)cx.s[0][1] + q - (uint64_t)gx[1] * yc % q) % q);
          if (!solve_lin(gx[0], rhs, q, sols, ns)) continue;
          for (int t = 0; t < ns; t++) {
            y[0] = sols[t];
            y[1] = yc;
            if (Q(y) == cx.s[1][1]) count++;
          }
        }
      }
    }
    return count;
  }
  // n == 3: nested variable elimination on the linear constraints
  uint32_t x[3], y[3], z[3], gx[3], gy[3];
  uint32_t sols[128], zs[128];
  int ns, nz;
  for (uint32_t a = 0; a < q; a++) {
    if ((int)(a % (uint32_t)shards) != shard % shards) continue;
    for (uint32_t b = 0; b < q; b++)
      for (uint32_t c = 0; c < q; c++) {
        x[0] = a; x[1] = b; x[2] = c;
        if (Q(x) != cx.s[0][0]) continue;
        Brow(x, gx);
        // pivot for the y-congruence B(x,y) = s01
        int piv = 0;
        uint64_t bestg = gcd_u64(gx[0], q);
        for (int t = 1; t < 3; t++) {
          uint64_t g = gcd_u64(gx[t], q);
          if (g < bestg) {
            bestg = g;
            piv = t;
          }
        }
        int o1 = (piv + 1) % 3, o2 = (piv + 2) % 3;
        for (uint32_t u = 0; u < q; u++)
          for (uint32_t v = 0; v < q; v++) {
            y[o1] = u;
            y[o2] = v;
            uint32_t rhs = (uint32_t)(((uint64_t)cx.s[0][1] + 2ull * q * q -
                                       (uint64_t)gx[o1] * u % q - (uint64_t)gx[o2] * v % q) % q);
            if (!solve_lin(gx[piv], rhs, q, sols, ns)) continue;
            for (int t = 0; t < ns; t++) {
              y[piv] = sols[t];
              if (Q(y) != cx.s[1][1]) continue;
              // z: two linear congruences, then the quadratic check.
              // enumerate one free coordinate, solve B(x,z) for a second,
              // check B(y,z) and Q(z).
              Brow(y, gy);
              int zp = 0;
              uint64_t bg = gcd_u64(gx[0], q);
              for (int tt = 1; tt < 3; tt++) {
                uint64_t g = gcd_u64(gx[tt], q);
                if (g < bg) {
                  bg = g;
                  zp = tt;
                }
              }
              int z1 = (zp + 1) % 3, z2 = (zp + 2) % 3;
              for (uint32_t u2 = 0; u2 < q; u2++)
                for (uint32_t v2 = 0; v2 < q; v2++) {
                  z[z1] = u2;
                  z[z2] = v2;
                  uint32_t rhs2 = (uint32_t)(((uint64_t)cx.s[0][2] + 2ull * q * q -
                                              (uint64_t)gx[z1] * u2 % q -
                                              (uint64_t)gx[z2] * v2 % q) % q);
                  if (!solve_lin(gx[zp], rhs2, q, zs, nz)) continue;
                  for (int t2 = 0; t2 < nz; t2++) {
                    z[zp] = zs[t2];
                    uint64_t by = 0;
                    for (int i2 = 0; i2 < 3; i2++) by += (uint64_t)gy[i2] * z[i2] % q;
                    if (by % q != cx.s[1][2]) continue;
                    if (Q(z) == cx.s[2][2]) count++;
                  }
                }
            }
          }
      }
  }
  return count;
}

mpq_class alpha_p_oracle(const GramLattice& L, uint64_t p, int r) {
  unsigned long long c = alpha_p_oracle_count(L, p, r, 1, 0);
  int n = L.gram.rows;
  // (1/2) p^{-r n(n-1)/2} count
  mpz_class pr;
  mpz_ui_pow_ui(pr.get_mpz_t(), (unsigned long)p, (unsigned long)(r * n * (n - 1) / 2));
  mpq_class v(mpz_class(std::to_string(c)), 2 * pr);
  v.canonicalize();
  return v;
}

std::string genus_symbol(const JordanDecomposition& dec) {
  std::ostringstream os;
  for (auto& b : dec.blocks) {
    os << dec.p << "^" << b.scale_exp << ": rank " << b.rank << " ("
       << (b.odd ? "odd" : "even") << ", chi=" << b.chi;
    if (!b.odd_units_mod8.empty()) {
      os << ", units";
      for (int u : b.odd_units_mod8) os << " " << u;
    }
    os << ")\n";
  }
  return os.str();
}

}  // namespace omf
