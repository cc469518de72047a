#pragma once

// Volume constants for orthogonal modular varieties: the closed forms for
// the rank-6 lattice family and its rank-5 branch-divisor complements,
// with certified enclosures for everything transcendental.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "omf/interval.hpp"

namespace omf {

// prod_{k=1}^n pi^{-k/2} Gamma(k/2) = coeff * pi^power, exact
std::pair<mpq_class, int> gamma_half_product(int n);

enum class LDirection { exact_unknown, lower_bounded, upper_bounded };

struct StructuredVolume {
  mpq_class rational_coeff;  // exact rational part, finite Euler factors folded in
  int pi_power = 0;
  unsigned long long sqrt_of = 1;  // extra factor sqrt(sqrt_of)
  bool has_l_factor = false;       // L(s, (disc/.))^{-1} factor, bounded not evaluated
  int l_s = 0;
  mpz_class l_disc;
  LDirection l_dir = LDirection::exact_unknown;
  std::vector<std::pair<uint64_t, mpq_class>> euler_factors;  // per-prime record

  // enclosure of the full value; for the L-factor the two-sided bounds
  // zeta(2s)/zeta(s) <= L <= zeta(s) are used
  CertifiedReal enclosure(mpfr_prec_t prec) const;
  std::string to_json() const;
};

// exact alpha_2(L(d)), alpha_3(L(d)) from the closed-form case analysis
mpq_class alpha2_L(const mpz_class& d);
mpq_class alpha3_L(const mpz_class& d);

// Vol_HM(O(L)) for L = 2U + <-6> + <-2d>
StructuredVolume vol_O_L(const mpz_class& d, LDirection dir = LDirection::lower_bounded);

enum class KFamily { k2s2s_0l = 1, k2ss_0l = 2, k2s2s_rl = 3 };

// Vol_HM(O(K)) closed forms; for family 3 chi values per odd prime dividing
// 2r are supplied (+1/-1); by default +1 (the value realized by these
// complements; validated in tests)
StructuredVolume vol_O_K(KFamily fam, uint64_t r,
                         const std::vector<std::pair<uint64_t, int>>& chi_data = {});

// E_L = 3 pi^3 / (705438720 zeta(3)^2)
CertifiedReal E_L_enclosure(mpfr_prec_t prec);

// lower bound for Vol_HM(Gamma): (12d)^{5/2} E_L, halved unless 3 | d
CertifiedReal vol_gamma_lower(const mpz_class& d, mpfr_prec_t prec);

// certified [zeta(2s)/zeta(s), zeta(s)]
std::pair<CertifiedReal, CertifiedReal> lf_bounds(int s, mpfr_prec_t prec);

// leading term vol * k^m
CertifiedReal leading_dimension(const StructuredVolume& vol, int m, long k, mpfr_prec_t prec);

}  // namespace omf
