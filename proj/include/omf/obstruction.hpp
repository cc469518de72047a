#pragma once

// Reflective-obstruction bounds: the global dimension inequality, the
// refined per-d census, and validation against the shipped exception lists.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "omf/interval.hpp"

namespace omf {

struct ObstructionConstants {
  int a = 2;
  int n = 4;
  mpq_class c_prime;                   // leading coefficient of the weight sum
  std::array<mpq_class, 6> e_coeffs;   // per-class constants, pi^2 divided out
  CertifiedReal d0, d1, d2;
};

ObstructionConstants global_constants(int a, mpfr_prec_t prec = 192);

// certified sign of d^{5/2} D0 - d^2 D1 - d^{1/4} D2
Sign global_predicate(const mpz_class& d, int a, mpfr_prec_t start_prec = 128,
                      mpfr_prec_t max_prec = 4096);

// ((D1 + D2)/D0)^2, optionally with the five-significant-figure printed
// constants substituted for the certified ones
CertifiedReal global_threshold(int a, mpfr_prec_t prec, bool printed_constants = false);

// smallest d with a certified positive global predicate
mpz_class smallest_global_pass(int a);

// Which quantities the refined census evaluates exactly and which stay at
// the counting-lemma bounds. The default reproduces the published
// exception lists; see README.
struct RefinementConfig {
  bool lhs_exact_euler = true;     // prod (1 - p^-6) exact vs zeta(6)^{-1}
  bool lhs_chi_product_exact = true;  // (1 + chi p^-3)^{-1} term = 1 vs zeta(6)/zeta(3)
  bool lhs_exact_alpha = true;     // exact alpha_2, alpha_3 vs worst-case 3/5120
  bool lhs_exact_branch = true;    // exact index branch vs uniform 1/2
  bool rhs_exact_J = false;        // exact l-counts vs lemma bounds
  bool rhs_exact_volK = false;     // exact K-volumes vs their pi^{-2} bounds
  bool rhs_parity_classes = true;  // drop B3/B6 for even d
  int start_prec = 128;
  int max_prec = 4096;
};

struct CensusRecord {
  uint64_t d = 0;
  int a = 0;
  bool global_pass = false;
  int refined = 0;  // 1 pass, 0 fail, -1 indeterminate
  std::string lhs_lo, lhs_hi, rhs_lo, rhs_hi;
  bool in_appendix = false;
};

// smallest-prime-factor sieve for fast factorization across a census range
struct Sieve {
  std::vector<uint32_t> spf;
  explicit Sieve(uint32_t n);
  // (prime, exponent) pairs ascending
  void factor(uint32_t n, std::vector<std::pair<uint32_t, int>>& out) const;
};

CensusRecord refined_predicate(uint64_t d, int a, const RefinementConfig& cfg,
                               const Sieve& sieve, const std::set<uint64_t>* appendix = nullptr);

struct CensusSummary {
  uint64_t lo = 0, hi = 0;
  int a = 0;
  uint64_t total = 0;
  uint64_t pass = 0, fail = 0, indeterminate = 0;
  uint64_t appendix_size = 0;
  uint64_t pass_and_appendix = 0;   // must be 0 (soundness)
  uint64_t fail_not_appendix = 0;   // conservatism gap
  std::string to_json() const;
};

struct CensusResult {
  std::vector<CensusRecord> records;
  CensusSummary summary;
};

CensusResult census(uint64_t lo, uint64_t hi, int a, const RefinementConfig& cfg,
                    const std::set<uint64_t>* appendix, int workers = 1);

std::string census_csv(const std::vector<CensusRecord>& records);

enum class AppendixId { I, II };
// newline-delimited ascending decimal; validates strict order, count, range
std::vector<uint64_t> load_appendix(const std::string& path, AppendixId which);

}  // namespace omf
