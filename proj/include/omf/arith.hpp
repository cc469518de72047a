#pragma once

// Integer number theory shared by all modules: deterministic 64-bit
// factorization, prime-divisor counts, p-adic valuations, Kronecker
// symbols and counting of unit square roots modulo M.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace omf {

struct Factorization {
  uint64_t value = 1;
  std::vector<std::pair<uint64_t, int>> factors;  // (prime, exponent), primes increasing
};

// n >= 1; n = 0 rejected.
Factorization factorize(uint64_t n);

// number of distinct prime divisors
int nu(uint64_t n);

// deterministic Miller-Rabin, valid for all 64-bit inputs
bool is_prime_u64(uint64_t n);

// p-adic valuation of n != 0
int padic_val(const mpz_class& n, uint64_t p);

// |n|_p = p^{-v_p(n)}, n != 0
mpq_class padic_abs(const mpz_class& n, uint64_t p);

// Kronecker symbol (D/p)
int kronecker(const mpz_class& D, const mpz_class& p);

// #{x mod M : gcd(x,M)=1, x^2 = theta mod M}; multiplicative formula
uint64_t count_unit_sqrt(const mpz_class& theta, uint64_t M);
// brute-force reference (M <= ~10^6 sensible)
uint64_t count_unit_sqrt_naive(const mpz_class& theta, uint64_t M);

uint64_t gcd_u64(uint64_t a, uint64_t b);

}  // namespace omf
