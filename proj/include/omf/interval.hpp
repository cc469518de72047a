#pragma once

// Certified real arithmetic: closed intervals [lo, hi] with MPFR endpoints
// and directed (outward) rounding. Every operation keeps the true value
// inside the enclosure. Comparisons against 0 are three-valued; callers
// escalate precision on indeterminate.

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <stdexcept>
#include <string>

namespace omf {

enum class Sign { negative, positive, indeterminate };

class CertifiedReal {
 public:
  explicit CertifiedReal(mpfr_prec_t prec = 128);
  CertifiedReal(const CertifiedReal& o);
  CertifiedReal(CertifiedReal&& o) noexcept;
  CertifiedReal& operator=(const CertifiedReal& o);
  CertifiedReal& operator=(CertifiedReal&& o) noexcept;
  ~CertifiedReal();

  mpfr_prec_t precision() const { return prec_; }
  const mpfr_t& lo() const { return lo_; }
  const mpfr_t& hi() const { return hi_; }

  static CertifiedReal from_long(long v, mpfr_prec_t prec);
  static CertifiedReal from_mpz(const mpz_class& v, mpfr_prec_t prec);
  static CertifiedReal from_mpq(const mpq_class& v, mpfr_prec_t prec);
  static CertifiedReal from_endpoints(const mpq_class& lo, const mpq_class& hi,
                                      mpfr_prec_t prec);

  static CertifiedReal pi(mpfr_prec_t prec);
  static CertifiedReal log2(mpfr_prec_t prec);
  // zeta(s) for integer s >= 2
  static CertifiedReal zeta(unsigned long s, mpfr_prec_t prec);
  // Gamma(k/2) for integer k >= 1
  static CertifiedReal gamma_half(unsigned long k, mpfr_prec_t prec);

  CertifiedReal operator+(const CertifiedReal& o) const;
  CertifiedReal operator-(const CertifiedReal& o) const;
  CertifiedReal operator*(const CertifiedReal& o) const;
  // divisor interval must not contain 0
  CertifiedReal operator/(const CertifiedReal& o) const;
  CertifiedReal neg() const;
  CertifiedReal sqrt() const;   // requires lo >= 0
  CertifiedReal inv() const;    // requires 0 not inside
  CertifiedReal pow_int(long e) const;

  // smallest interval containing both
  static CertifiedReal hull(const CertifiedReal& a, const CertifiedReal& b);

  Sign sign() const;
  bool contains(const mpq_class& v) const;
  bool contains_interval(const CertifiedReal& inner) const;
  // hi - lo as an upper-bounded double (coarse; for diagnostics)
  double width_upper() const;
  double mid_double() const;
  std::string to_string(int digits = 17) const;
  std::string lo_string(int digits = 12) const;
  std::string hi_string(int digits = 12) const;

 private:
  mpfr_t lo_, hi_;
  mpfr_prec_t prec_;
};

// Named-constant enclosure per the library's public contract.
// name: "pi", "log2", "zeta(k)" with k >= 2, "gamma_half(k)" with k >= 1.
CertifiedReal certified_constant(const std::string& name, mpfr_prec_t prec);

// Evaluate `make` at doubling precision until the sign is determinate.
// Returns indeterminate only after max_prec fails.
Sign certified_sign(const std::function<CertifiedReal(mpfr_prec_t)>& make,
                    mpfr_prec_t start_prec = 128, mpfr_prec_t max_prec = 4096);

}  // namespace omf
