#pragma once

// Branch-divisor machinery: the congruence classifier for reflective
// vectors, the six reflective classes, perpendicular-lattice genus data and
// the counting bounds feeding the obstruction census.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omf/lattice.hpp"

namespace omf {

struct CongruenceInstance {
  uint64_t r = 0, s = 0;  // s > 1
  uint64_t k = 0, l = 0;  // residues mod 2r, 2s
  uint64_t m = 0;         // order of (k, l); computed when 0
  uint64_t u = 0;         // m or 2m
};

enum class CongCase { c1a, c1b, c2a, c2b, none };

uint64_t order_mod(uint64_t x, uint64_t mod);  // additive order
CongCase classify_congruence(const CongruenceInstance& inst);
bool congruence_oracle(const CongruenceInstance& inst);

enum class BTag { B1 = 1, B2, B3, B4, B5, B6 };

struct ReflectiveClass {
  BTag tag;
  bool plus_sigma;   // +sigma vs -sigma
  uint64_t r, s;     // K-lattice coordinates: L = 2U + <-2r> + <-2s>
  uint64_t u, m;     // vector invariants
  uint64_t k;        // k-pattern: 0 or r (mod 2r)
  int j_case;        // 1: odd-l sqrt-1, 2: even-l 2l1^2=2, 3: even-l sqrt-1
  bool odd_d_only;
};

std::vector<ReflectiveClass> reflective_classes(const mpz_class& d, int n = 2);

struct KGenus {
  bool possible = true;
  std::vector<mpz_class> group;  // invariant factors ascending
  QMat gram;                     // q-values mod 2 on canonical generators
};

KGenus k_genus(uint64_t u, uint64_t m, uint64_t r, uint64_t s, uint64_t k, uint64_t l);

struct OqCount {
  uint64_t solutions_mod_4r;  // unit square roots of theta mod 4r
  uint64_t oq_order;          // |O(q)| = solutions taken mod 2r
  bool bound_ok;              // against 2^{nu(2r)-1} / 2^{nu(2r)}
};
OqCount oq_count(uint64_t r, const mpz_class& theta);

// exact number of l mod 2s in each reflective case
uint64_t jj_count(uint64_t s, int j_case);
uint64_t jj_count_naive(uint64_t s, int j_case);
// the counting-lemma upper bound for the same case
uint64_t jj_bound(uint64_t s, int j_case);

// 4 |O(q)| for a cyclic discriminant form of order 2r; for C2 + C_r shapes
// brute force under the cap, else the 2^{nu(2r)} bound
uint64_t ii_bound_cyclic(uint64_t r);
uint64_t ii_bound_for_class(const ReflectiveClass& cls, const mpz_class& d,
                            bool exact_small = true);

// construct an explicit primitive z in 2U + <-2r> + <-2s> with the given
// (u, m, k, l) if one exists with small search radius; for tests
std::optional<std::vector<mpz_class>> find_reflective_vector(
    uint64_t r, uint64_t s, uint64_t u, uint64_t m, uint64_t k, uint64_t l);

}  // namespace omf
