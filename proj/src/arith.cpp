#include "omf/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace omf {

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

static uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return (uint64_t)((__uint128_t)a * b % m);
}

static uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, s++;
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; i++) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Pollard-Brent rho; n odd composite, not a prime power of small primes
static uint64_t pollard_rho(uint64_t n) {
  if ((n & 1) == 0) return 2;
  uint64_t c = 1;
  while (true) {
    uint64_t x = 2, y = 2, d = 1;
    uint64_t count = 0;
    while (d == 1) {
      x = (mulmod_u64(x, x, n) + c) % n;
      y = (mulmod_u64(y, y, n) + c) % n;
      y = (mulmod_u64(y, y, n) + c) % n;
      d = gcd_u64(x > y ? x - y : y - x, n);
      if (++count > (1ull << 22)) break;
    }
    if (d != 1 && d != n) return d;
    c++;
  }
}

static void factor_rec(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

Factorization factorize(uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n = 0");
  Factorization f;
  f.value = n;
  std::vector<uint64_t> ps;
  for (uint64_t p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      ps.push_back(p);
      n /= p;
    }
  }
  factor_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  for (size_t i = 0; i < ps.size();) {
    size_t j = i;
    while (j < ps.size() && ps[j] == ps[i]) j++;
    f.factors.push_back({ps[i], (int)(j - i)});
    i = j;
  }
  return f;
}

int nu(uint64_t n) {
  if (n == 0) throw std::invalid_argument("nu: n = 0");
  return (int)factorize(n).factors.size();
}

int padic_val(const mpz_class& n, uint64_t p) {
  if (n == 0) throw std::invalid_argument("padic_val: n = 0");
  mpz_class a = abs(n), q, r;
  int v = 0;
  mpz_class P(mpz_class((unsigned long)p));
  while (true) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), P.get_mpz_t());
    if (r != 0) break;
    a = q;
    v++;
  }
  return v;
}

mpq_class padic_abs(const mpz_class& n, uint64_t p) {
  int v = padic_val(n, p);
  mpz_class pv;
  mpz_ui_pow_ui(pv.get_mpz_t(), (unsigned long)p, (unsigned long)v);
  mpq_class r(1, pv);
  r.canonicalize();
  return r;
}

int kronecker(const mpz_class& D, const mpz_class& p) {
  return mpz_kronecker(D.get_mpz_t(), p.get_mpz_t());
}

// solutions of x^2 = theta (mod p^a) with x a unit
static uint64_t local_sqrt_count(const mpz_class& theta, uint64_t p, int a) {
  mpz_class pa;
  mpz_ui_pow_ui(pa.get_mpz_t(), (unsigned long)p, (unsigned long)a);
  mpz_class t = theta % pa;
  if (t < 0) t += pa;
  if (p == 2) {
    if (t % 2 == 0) return 0;  // unit square is odd
    if (a == 1) return 1;
    if (a == 2) return (t % 4 == 1) ? 2 : 0;
    return (t % 8 == 1) ? 4 : 0;
  }
  if (t % (unsigned long)p == 0) return 0;
  return kronecker(t, mpz_class((unsigned long)p)) == 1 ? 2 : 0;
}

uint64_t count_unit_sqrt(const mpz_class& theta, uint64_t M) {
  if (M < 1) throw std::invalid_argument("count_unit_sqrt: M = 0");
  if (M == 1) return 1;
  uint64_t count = 1;
  for (auto& [p, a] : factorize(M).factors) {
    count *= local_sqrt_count(theta, p, a);
    if (count == 0) return 0;
  }
  return count;
}

uint64_t count_unit_sqrt_naive(const mpz_class& theta, uint64_t M) {
  if (M < 1) throw std::invalid_argument("count_unit_sqrt_naive: M = 0");
  mpz_class Mz((unsigned long)M);
  mpz_class t = theta % Mz;
  if (t < 0) t += Mz;
  uint64_t target = t.get_ui();
  uint64_t count = 0;
  for (uint64_t x = 0; x < M; x++) {
    if (gcd_u64(x, M) != 1) continue;
    if (mulmod_u64(x, x, M) == target) count++;
  }
  return count;
}

}  // namespace omf
