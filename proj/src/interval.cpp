#include "omf/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace omf {

CertifiedReal::CertifiedReal(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

CertifiedReal::CertifiedReal(const CertifiedReal& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

CertifiedReal::CertifiedReal(CertifiedReal&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

CertifiedReal& CertifiedReal::operator=(const CertifiedReal& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.prec_);
    mpfr_set_prec(hi_, o.prec_);
    prec_ = o.prec_;
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

CertifiedReal& CertifiedReal::operator=(CertifiedReal&& o) noexcept {
  if (this != &o) {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
  }
  return *this;
}

CertifiedReal::~CertifiedReal() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

CertifiedReal CertifiedReal::from_long(long v, mpfr_prec_t prec) {
  CertifiedReal r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_mpz(const mpz_class& v, mpfr_prec_t prec) {
  CertifiedReal r(prec);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_mpq(const mpq_class& v, mpfr_prec_t prec) {
  CertifiedReal r(prec);
  mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::from_endpoints(const mpq_class& lo,
                                            const mpq_class& hi,
                                            mpfr_prec_t prec) {
  if (lo > hi) throw std::invalid_argument("from_endpoints: lo > hi");
  CertifiedReal r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::pi(mpfr_prec_t prec) {
  CertifiedReal r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::log2(mpfr_prec_t prec) {
  CertifiedReal r(prec);
  mpfr_const_log2(r.lo_, MPFR_RNDD);
  mpfr_const_log2(r.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::zeta(unsigned long s, mpfr_prec_t prec) {
  if (s < 2) throw std::invalid_argument("zeta: need s >= 2");
  CertifiedReal r(prec);
  mpfr_zeta_ui(r.lo_, s, MPFR_RNDD);
  mpfr_zeta_ui(r.hi_, s, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::gamma_half(unsigned long k, mpfr_prec_t prec) {
  if (k < 1) throw std::invalid_argument("gamma_half: need k >= 1");
  CertifiedReal r(prec);
  if (k % 2 == 0) {
    // Gamma(k/2) = (k/2 - 1)! exactly
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), k / 2 - 1);
    return from_mpz(f, prec);
  }
  mpfr_t x;
  mpfr_init2(x, prec + 8);
  mpfr_set_ui(x, k, MPFR_RNDN);
  mpfr_div_ui(x, x, 2, MPFR_RNDN);  // exact: k/2 is dyadic
  mpfr_gamma(r.lo_, x, MPFR_RNDD);
  mpfr_gamma(r.hi_, x, MPFR_RNDU);
  mpfr_clear(x);
  return r;
}

CertifiedReal CertifiedReal::operator+(const CertifiedReal& o) const {
  CertifiedReal r(std::max(prec_, o.prec_));
  mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::operator-(const CertifiedReal& o) const {
  CertifiedReal r(std::max(prec_, o.prec_));
  mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::operator*(const CertifiedReal& o) const {
  CertifiedReal r(std::max(prec_, o.prec_));
  mpfr_t t;
  mpfr_init2(t, r.prec_);
  const mpfr_t* a[2] = {&lo_, &hi_};
  const mpfr_t* b[2] = {&o.lo_, &o.hi_};
  bool first = true;
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 2; j++) {
      mpfr_mul(t, *a[i], *b[j], MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, *a[i], *b[j], MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return r;
}

CertifiedReal CertifiedReal::inv() const {
  if (mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0)
    throw std::domain_error("inv: interval contains 0");
  CertifiedReal r(prec_);
  mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
  mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::operator/(const CertifiedReal& o) const {
  return *this * o.inv();
}

CertifiedReal CertifiedReal::neg() const {
  CertifiedReal r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw std::domain_error("sqrt: negative lower bound");
  CertifiedReal r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

CertifiedReal CertifiedReal::pow_int(long e) const {
  if (e == 0) return from_long(1, prec_);
  if (e < 0) return pow_int(-e).inv();
  CertifiedReal acc = *this;
  CertifiedReal result = from_long(1, prec_);
  long n = e;
  while (n > 0) {
    if (n & 1) result = result * acc;
    acc = acc * acc;
    n >>= 1;
  }
  return result;
}

CertifiedReal CertifiedReal::hull(const CertifiedReal& a, const CertifiedReal& b) {
  CertifiedReal r(std::max(a.prec_, b.prec_));
  mpfr_set(r.lo_, mpfr_cmp(a.lo_, b.lo_) <= 0 ? a.lo_ : b.lo_, MPFR_RNDD);
  mpfr_set(r.hi_, mpfr_cmp(a.hi_, b.hi_) >= 0 ? a.hi_ : b.hi_, MPFR_RNDU);
  return r;
}

Sign CertifiedReal::sign() const {
  if (mpfr_sgn(lo_) > 0) return Sign::positive;
  if (mpfr_sgn(hi_) < 0) return Sign::negative;
  return Sign::indeterminate;
}

bool CertifiedReal::contains(const mpq_class& v) const {
  return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

bool CertifiedReal::contains_interval(const CertifiedReal& inner) const {
  return mpfr_cmp(lo_, inner.lo_) <= 0 && mpfr_cmp(hi_, inner.hi_) >= 0;
}

double CertifiedReal::width_upper() const {
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_sub(t, hi_, lo_, MPFR_RNDU);
  double w = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(t);
  return w;
}

double CertifiedReal::mid_double() const {
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_add(t, lo_, hi_, MPFR_RNDN);
  mpfr_div_ui(t, t, 2, MPFR_RNDN);
  double m = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return m;
}

static std::string mpfr_to_str(const mpfr_t& x, int digits, mpfr_rnd_t rnd) {
  char buf[256];
  std::string fmt = "%." + std::to_string(digits) + "R*e";
  mpfr_snprintf(buf, sizeof(buf), fmt.c_str(), rnd, x);
  return std::string(buf);
}

std::string CertifiedReal::to_string(int digits) const {
  return "[" + mpfr_to_str(lo_, digits, MPFR_RNDD) + ", " +
         mpfr_to_str(hi_, digits, MPFR_RNDU) + "]";
}

std::string CertifiedReal::lo_string(int digits) const {
  return mpfr_to_str(lo_, digits, MPFR_RNDD);
}

std::string CertifiedReal::hi_string(int digits) const {
  return mpfr_to_str(hi_, digits, MPFR_RNDU);
}

CertifiedReal certified_constant(const std::string& name, mpfr_prec_t prec) {
  if (prec < 53) throw std::invalid_argument("certified_constant: precision < 53");
  if (name == "pi") return CertifiedReal::pi(prec);
  if (name == "log2") return CertifiedReal::log2(prec);
  unsigned long k = 0;
  if (sscanf(name.c_str(), "zeta(%lu)", &k) == 1 && k >= 2)
    return CertifiedReal::zeta(k, prec);
  if (sscanf(name.c_str(), "gamma_half(%lu)", &k) == 1 && k >= 1)
    return CertifiedReal::gamma_half(k, prec);
  throw std::invalid_argument("certified_constant: unsupported name " + name);
}

Sign certified_sign(const std::function<CertifiedReal(mpfr_prec_t)>& make,
                    mpfr_prec_t start_prec, mpfr_prec_t max_prec) {
  for (mpfr_prec_t p = start_prec; p <= max_prec; p *= 2) {
    Sign s = make(p).sign();
    if (s != Sign::indeterminate) return s;
  }
  return Sign::indeterminate;
}

}  // namespace omf
