#include "omf/hm_volume.hpp"

#include <json.hpp>

#include <stdexcept>

#include "omf/arith.hpp"
#include "omf/local_density.hpp"

namespace omf {

std::pair<mpq_class, int> gamma_half_product(int n) {
  if (n < 1) throw std::invalid_argument("gamma_half_product: n < 1");
  // Gamma(k/2): even k exact factorial; odd k = (k-2)!!/2^{(k-1)/2} sqrt(pi)
  mpq_class coeff = 1;
  int pi_half_power = 0;  // power of pi^{1/2}
  for (int k = 1; k <= n; k++) {
    pi_half_power -= k;  // pi^{-k/2}
    if (k % 2 == 0) {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), k / 2 - 1);
      coeff *= mpq_class(f);
    } else {
      mpz_class dd = 1;  // (k-2)!! for odd k (empty for k = 1)
      for (int t = k - 2; t >= 1; t -= 2) dd *= t;
      mpz_class two_pow;
      mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, (unsigned long)((k - 1) / 2));
      mpq_class g(dd, two_pow);
      g.canonicalize();
      coeff *= g;
      pi_half_power += 1;  // sqrt(pi)
    }
  }
  if (pi_half_power % 2 != 0)
    throw std::logic_error("gamma_half_product: odd power of sqrt(pi)");
  return {coeff, pi_half_power / 2};
}

CertifiedReal StructuredVolume::enclosure(mpfr_prec_t prec) const {
  CertifiedReal v = CertifiedReal::from_mpq(rational_coeff, prec);
  if (pi_power != 0) v = v * CertifiedReal::pi(prec).pow_int(pi_power);
  if (sqrt_of != 1)
    v = v * CertifiedReal::from_mpz(mpz_class(std::to_string(sqrt_of)), prec).sqrt();
  if (has_l_factor) {
    // L(s, chi)^{-1} lies between 1/zeta(s) and zeta(s)/zeta(2s)
    auto [lo, hi] = lf_bounds(l_s, prec);
    v = v * CertifiedReal::hull(hi.inv(), lo.inv());
  }
  return v;
}

std::string StructuredVolume::to_json() const {
  nlohmann::json j;
  j["rational_coeff"] = rational_coeff.get_str();
  j["pi_power"] = pi_power;
  j["sqrt_of"] = sqrt_of;
  if (has_l_factor) {
    j["l_factor"] = {{"s", l_s},
                     {"discriminant", l_disc.get_str()},
                     {"direction", l_dir == LDirection::lower_bounded   ? "lower-bounded"
                                   : l_dir == LDirection::upper_bounded ? "upper-bounded"
                                                                        : "exact-unknown"}};
  }
  auto arr = nlohmann::json::array();
  for (auto& [p, f] : euler_factors) arr.push_back({{"p", p}, {"factor", f.get_str()}});
  j["euler_product"] = arr;
  CertifiedReal enc = enclosure(192);
  j["enclosure"] = {{"lo", enc.lo_string()}, {"hi", enc.hi_string()}};
  return j.dump(2);
}

mpq_class alpha2_L(const mpz_class& d) {
  int a = padic_val(12 * d, 2);  // = 2 + v2(d)
  mpq_class P2 = p_product(2, 2);
  mpz_class dm4 = d % 4;
  if (dm4 < 0) dm4 += 4;
  mpz_class c;
  if (a == 2)
    mpz_ui_pow_ui(c.get_mpz_t(), 2, dm4 == 3 ? 9 : 8);
  else if (a == 3 || a == 4)
    mpz_ui_pow_ui(c.get_mpz_t(), 2, (unsigned long)(7 + a));
  else
    mpz_ui_pow_ui(c.get_mpz_t(), 2, (unsigned long)(8 + a));
  return mpq_class(c) * P2;
}

mpq_class alpha3_L(const mpz_class& d) {
  int a = padic_val(12 * d, 3);  // = 1 + v3(d)
  mpq_class P32 = p_product(3, 2);
  if (a == 1) return mpq_class(6) * P32;
  if (a == 2) {
    // 2 * 3^3 * P3(2) P3(1) (1+3^-2)^{-1} (1 + chi/3)^{-1},
    // chi = kronecker(-4 d/3, 3)
    mpz_class u = -4 * (d / 3);
    int chi = kronecker(u, mpz_class(3));
    mpq_class r = mpq_class(2 * 27) * P32 * p_product(3, 1);
    r /= mpq_class(10, 9);
    r /= (1 + mpq_class(chi, 3));
    return r;
  }
  mpz_class p3a1;
  mpz_ui_pow_ui(p3a1.get_mpz_t(), 3, (unsigned long)(a + 1));
  mpq_class r = mpq_class(4) * mpq_class(p3a1) * P32;
  r /= mpq_class(10, 9);
  return r;
}

StructuredVolume vol_O_L(const mpz_class& d, LDirection dir) {
  if (d <= 1) throw std::invalid_argument("vol_O_L: d <= 1");
  mpz_class twelved = 12 * d;
  StructuredVolume v;
  v.pi_power = 3;
  v.sqrt_of = mpz_class(twelved).get_ui();
  v.has_l_factor = true;
  v.l_s = 3;
  v.l_disc = -twelved;
  v.l_dir = dir;
  // (12d)^2 / 137781 * 2^{-nu(12d)} * prod_{p|12d} (1-p^{-6})
  //   * |12d|_3^{-1} |12d|_2^{-1} alpha_3^{-1} alpha_2^{-1}
  mpq_class R = mpq_class(twelved * twelved, 137781);
  R.canonicalize();
  auto f = factorize(twelved.get_ui());
  mpz_class two_nu;
  mpz_ui_pow_ui(two_nu.get_mpz_t(), 2, f.factors.size());
  R /= mpq_class(two_nu);
  for (auto& [p, e] : f.factors) {
    mpz_class p6;
    mpz_ui_pow_ui(p6.get_mpz_t(), (unsigned long)p, 6);
    mpq_class factor(p6 - 1, p6);
    factor.canonicalize();
    // kronecker(-12d, p) = 0 for p | 12d, so the (1 + chi p^{-3})^{-1} term is 1
    v.euler_factors.push_back({p, factor});
    R *= factor;
  }
  mpz_class a3pow, a2pow;
  mpz_ui_pow_ui(a3pow.get_mpz_t(), 3, (unsigned long)padic_val(twelved, 3));
  mpz_ui_pow_ui(a2pow.get_mpz_t(), 2, (unsigned long)padic_val(twelved, 2));
  R *= mpq_class(a3pow) * mpq_class(a2pow);
  R /= alpha3_L(d) * alpha2_L(d);
  v.rational_coeff = R;
  return v;
}

StructuredVolume vol_O_K(KFamily fam, uint64_t r,
                         const std::vector<std::pair<uint64_t, int>>& chi_data) {
  if (r < 1) throw std::invalid_argument("vol_O_K: r < 1");
  StructuredVolume v;
  v.pi_power = 0;
  uint64_t twor = 2 * r;
  auto f = factorize(twor);
  mpz_class two_nu;
  mpz_ui_pow_ui(two_nu.get_mpz_t(), 2, f.factors.size());
  if (fam == KFamily::k2s2s_0l || fam == KFamily::k2ss_0l) {
    mpq_class R(mpz_class((unsigned long)twor) * mpz_class((unsigned long)twor), 450);
    R.canonicalize();
    R /= mpq_class(two_nu);
    // alpha_2(K)^{-1} |2r|_2^{-1}: 2/45 when r odd (a = 1), else 1/36
    int a = padic_val(mpz_class((unsigned long)twor), 2);
    mpq_class c2 = (a == 1) ? mpq_class(2, 45) : mpq_class(1, 36);
    R *= c2;
    for (auto& [p, e] : f.factors) {
      mpz_class p2;
      mpz_ui_pow_ui(p2.get_mpz_t(), (unsigned long)p, 2);
      mpq_class factor(p2 + 1, p2);
      factor.canonicalize();
      v.euler_factors.push_back({p, factor});
      R *= factor;
    }
    v.rational_coeff = R;
    return v;
  }
  // family 3: (2r)^2/14400 2^{-nu(2r)} prod_{p | 2r}(1 + chi(N0) p^{-2}),
  // with the p = 2 factor fixed at +1 by the closed form
  mpq_class R(mpz_class((unsigned long)twor) * mpz_class((unsigned long)twor), 14400);
  R.canonicalize();
  R /= mpq_class(two_nu);
  for (auto& [p, e] : f.factors) {
    int chi = 1;
    if (p != 2) {
      for (auto& [cp, cv] : chi_data)
        if (cp == p) chi = cv;
    }
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), (unsigned long)p, 2);
    mpq_class factor(p2 + chi, p2);
    factor.canonicalize();
    v.euler_factors.push_back({p, factor});
    R *= factor;
  }
  v.rational_coeff = R;
  return v;
}

CertifiedReal E_L_enclosure(mpfr_prec_t prec) {
  CertifiedReal pi3 = CertifiedReal::pi(prec).pow_int(3);
  CertifiedReal z3 = CertifiedReal::zeta(3, prec);
  CertifiedReal num = CertifiedReal::from_long(3, prec) * pi3;
  CertifiedReal den = CertifiedReal::from_mpz(mpz_class("705438720"), prec) * z3 * z3;
  return num / den;
}

CertifiedReal vol_gamma_lower(const mpz_class& d, mpfr_prec_t prec) {
  mpz_class twelved = 12 * d;
  CertifiedReal base = CertifiedReal::from_mpz(twelved * twelved, prec) *
                       CertifiedReal::from_mpz(twelved, prec).sqrt();
  CertifiedReal r = base * E_L_enclosure(prec);
  if (d % 3 != 0) r = r * CertifiedReal::from_mpq(mpq_class(1, 2), prec);
  return r;
}

std::pair<CertifiedReal, CertifiedReal> lf_bounds(int s, mpfr_prec_t prec) {
  if (s < 2) throw std::invalid_argument("lf_bounds: s < 2");
  CertifiedReal zs = CertifiedReal::zeta((unsigned long)s, prec);
  CertifiedReal z2s = CertifiedReal::zeta((unsigned long)(2 * s), prec);
  return {z2s / zs, zs};
}

CertifiedReal leading_dimension(const StructuredVolume& vol, int m, long k, mpfr_prec_t prec) {
  CertifiedReal enc = vol.enclosure(prec);
  return enc * CertifiedReal::from_long(k, prec).pow_int(m);
}

}  // namespace omf
