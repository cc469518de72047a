#include "omf/obstruction.hpp"

#include <json.hpp>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "omf/arith.hpp"
#include "omf/branch.hpp"
#include "omf/hm_volume.hpp"

namespace omf {

ObstructionConstants global_constants(int a, mpfr_prec_t prec) {
  if (a != 2 && a != 3) throw std::invalid_argument("global_constants: a must be 2 or 3");
  ObstructionConstants oc;
  oc.a = a;
  int c = oc.n - a;
  oc.c_prime = mpq_class(4 * c * c * c + 6 * c * c + 4 * c + 1, 8);
  oc.c_prime.canonicalize();
  oc.e_coeffs = {mpq_class(32, 675), mpq_class(64, 675), mpq_class(1, 15),
                 mpq_class(16, 75),  mpq_class(32, 75),  mpq_class(3, 20)};
  CertifiedReal pi2 = CertifiedReal::pi(prec).pow_int(2);
  CertifiedReal cp = CertifiedReal::from_mpq(oc.c_prime, prec);
  mpq_class c123 = oc.e_coeffs[0] + oc.e_coeffs[1] + oc.e_coeffs[2];
  mpq_class c456 = oc.e_coeffs[3] + oc.e_coeffs[4] + oc.e_coeffs[5];
  oc.d1 = CertifiedReal::from_mpq(c123, prec) / pi2 * cp;
  oc.d2 = CertifiedReal::from_long(10, prec) * CertifiedReal::from_mpq(c456, prec) / pi2 * cp;
  // D0 = 12^{5/2} (E_L / 2) (n-a)^4
  CertifiedReal twelve52 = CertifiedReal::from_long(144, prec) *
                           CertifiedReal::from_long(12, prec).sqrt();
  mpz_class na4 = 1;
  for (int i = 0; i < 4; i++) na4 *= c;
  oc.d0 = twelve52 * E_L_enclosure(prec) * CertifiedReal::from_mpq(mpq_class(na4, 2), prec);
  return oc;
}

static CertifiedReal global_value(const mpz_class& d, int a, mpfr_prec_t prec) {
  ObstructionConstants oc = global_constants(a, prec);
  CertifiedReal dq = CertifiedReal::from_mpz(d, prec);
  CertifiedReal d52 = dq.pow_int(2) * dq.sqrt();
  CertifiedReal d14 = dq.sqrt().sqrt();
  return d52 * oc.d0 - dq.pow_int(2) * oc.d1 - d14 * oc.d2;
}

Sign global_predicate(const mpz_class& d, int a, mpfr_prec_t start_prec,
                      mpfr_prec_t max_prec) {
  if (d <= 1) throw std::invalid_argument("global_predicate: d <= 1");
  return certified_sign([&](mpfr_prec_t p) { return global_value(d, a, p); }, start_prec,
                        max_prec);
}

CertifiedReal global_threshold(int a, mpfr_prec_t prec, bool printed_constants) {
  if (printed_constants) {
    // the five-significant-figure values as printed
    mpq_class d0 = (a == 2) ? mpq_class(36417, 100000000) : mpq_class(22761, 1000000000);
    mpq_class d1 = (a == 2) ? mpq_class(17197, 100000) : mpq_class(39684, 1000000);
    mpq_class d2 = (a == 2) ? mpq_class(65036, 10000) : mpq_class(15008, 10000);
    CertifiedReal num = CertifiedReal::from_mpq(d1 + d2, prec);
    CertifiedReal den = CertifiedReal::from_mpq(d0, prec);
    CertifiedReal r = num / den;
    return r * r;
  }
  ObstructionConstants oc = global_constants(a, prec);
  CertifiedReal r = (oc.d1 + oc.d2) / oc.d0;
  return r * r;
}

mpz_class smallest_global_pass(int a) {
  // bracket from the certified threshold then binary search on the predicate
  CertifiedReal thr = global_threshold(a, 256);
  mpfr_t hi_f;
  mpfr_init2(hi_f, 64);
  mpfr_set(hi_f, thr.hi(), MPFR_RNDU);
  mpz_class hi;
  mpfr_get_z(hi.get_mpz_t(), hi_f, MPFR_RNDU);
  mpfr_clear(hi_f);
  hi += 10;
  mpz_class lo = 2;
  // predicate is monotone in d beyond the threshold region
  while (lo < hi) {
    mpz_class mid = (lo + hi) / 2;
    Sign s = global_predicate(mid, a);
    if (s == Sign::positive)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// ---- sieve ----

Sieve::Sieve(uint32_t n) : spf(n + 1, 0) {
  for (uint32_t i = 2; i <= n; i++) {
    if (spf[i] == 0) {
      for (uint64_t j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = i;
    }
  }
}

void Sieve::factor(uint32_t n, std::vector<std::pair<uint32_t, int>>& out) const {
  out.clear();
  while (n > 1) {
    uint32_t p = spf[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      e++;
    }
    out.push_back({p, e});
  }
}

// ---- refined predicate ----

namespace {

struct DInfo {
  uint64_t d;
  std::vector<std::pair<uint32_t, int>> fd;  // factorization of d
  int v2 = 0, v3 = 0;
  int nu_d = 0, nu_2d = 0, nu_12d = 0;
  bool odd = false, div3 = false;
};

DInfo analyze(uint64_t d, const Sieve& sieve) {
  DInfo i;
  i.d = d;
  sieve.factor((uint32_t)d, i.fd);
  i.nu_d = (int)i.fd.size();
  for (auto& [p, e] : i.fd) {
    if (p == 2) i.v2 = e;
    if (p == 3) i.v3 = e;
  }
  i.odd = (i.v2 == 0);
  i.div3 = (i.v3 > 0);
  i.nu_2d = i.nu_d + (i.odd ? 1 : 0);
  bool has3 = i.v3 > 0;
  i.nu_12d = i.nu_d + (i.odd ? 1 : 0) + (has3 ? 0 : 1);
  return i;
}

// exact G(d) = |12d|_3^-1 |12d|_2^-1 alpha_3(L)^-1 alpha_2(L)^-1
mpq_class exact_G(const DInfo& I) {
  int a2 = 2 + I.v2, a3 = 1 + I.v3;
  // 2-part: |12d|_2^{-1} / alpha_2 = 2^{a2} / (2^{c2} P2(2))
  static const mpq_class P22 = p_product(2, 2);
  static const mpq_class P32 = p_product(3, 2);
  static const mpq_class P31 = p_product(3, 1);
  int c2;
  if (a2 == 2)
    c2 = (I.d % 4 == 3) ? 9 : 8;
  else if (a2 == 3 || a2 == 4)
    c2 = 7 + a2;
  else
    c2 = 8 + a2;
  mpq_class part2 = mpq_class(1) / P22;
  {
    mpz_class num = 1, den = 1;
    int e = a2 - c2;  // negative
    mpz_ui_pow_ui(den.get_mpz_t(), 2, (unsigned long)(-e));
    part2 *= mpq_class(num, den);
  }
  // 3-part
  mpq_class part3;
  if (a3 == 1) {
    part3 = mpq_class(3) / (mpq_class(6) * P32);
  } else if (a3 == 2) {
    mpz_class u = -4 * mpz_class((unsigned long)(I.d / 3));
    int chi = kronecker(u, mpz_class(3));
    // alpha_3 = 2*27*P32*P31*(10/9)^{-1}*(1+chi/3)^{-1}; |12d|_3^{-1} = 9
    part3 = mpq_class(9) * mpq_class(10, 9) * (1 + mpq_class(chi, 3)) /
            (mpq_class(54) * P32 * P31);
  } else {
    // alpha_3 = 4*3^{a3+1}*P32*(10/9)^{-1}; ratio = 3^{a3} * (10/9) / (4*3^{a3+1}*P32)
    part3 = mpq_class(10, 9) / (mpq_class(12) * P32);
  }
  return part2 * part3;
}

// worst-case lower bound for G over all branches
mpq_class bound_G() { return mpq_class(3, 5120); }

struct RhsParts {
  mpq_class rational;  // pi-free part
  mpq_class pi_inv2;   // coefficient of pi^{-2}
};

// per-d right-hand side, as configured
RhsParts rhs_parts(const DInfo& I, int a, const RefinementConfig& cfg) {
  RhsParts R;
  uint64_t d = I.d;
  // I-factors (cyclic classes; exact equals the counting bound)
  mpz_class cnt2d = 1;
  mpz_ui_pow_ui(cnt2d.get_mpz_t(), 2, (unsigned long)(I.odd ? I.nu_2d - 1 : I.nu_2d));
  mpq_class I12 = 4 * mpq_class(cnt2d);
  mpq_class I3 = 4 * mpq_class(cnt2d) * (I.odd ? 2 : 1);  // bound 4*2^{nu(2d)}
  mpq_class I45 = 8;
  mpq_class I6 = 16;

  // J-factors
  mpq_class J1, J2, J3, J4, J5, J6;
  if (cfg.rhs_exact_J) {
    J1 = jj_count(3, 2);
    J2 = jj_count(3, 1);
    J3 = jj_count(3, 3);
    J4 = jj_count(d, 2);
    J5 = jj_count(d, 1);
    J6 = jj_count(d, 3);
  } else {
    J1 = jj_bound(3, 2);   // 2
    J2 = jj_bound(3, 1);   // 4
    J3 = jj_bound(3, 3);   // 4
    J4 = jj_bound(d, 2);
    J5 = jj_bound(d, 1);
    // the per-class constant for the sixth class uses the sharp odd-d count
    J6 = mpz_class(1) << I.nu_d;
  }

  bool use_b36 = I.odd || !cfg.rhs_parity_classes;

  mpz_class twod((unsigned long)(2 * d));
  mpz_class nu2d_pow = 1;
  mpz_ui_pow_ui(nu2d_pow.get_mpz_t(), 2, (unsigned long)I.nu_2d);

  if (cfg.rhs_exact_volK) {
    // family 1/2 volume at r = d
    mpq_class vol12(twod * twod, 450);
    vol12.canonicalize();
    vol12 /= mpq_class(nu2d_pow);
    vol12 *= I.odd ? mpq_class(2, 45) : mpq_class(1, 36);
    mpq_class euler = 1;
    for (auto& [p, e] : I.fd) {
      mpz_class p2 = mpz_class((unsigned long)p) * (unsigned long)p;
      euler *= mpq_class(p2 + 1, p2);
    }
    if (I.odd) {
      mpz_class four(4);
      euler *= mpq_class(4 + 1, 4);  // p = 2 divides 2d
    }
    vol12 *= euler;
    // family 3 volume at r = d (chi(N0) = +1 at odd p; p = 2 factor 5/4)
    mpq_class vol3(twod * twod, 14400);
    vol3.canonicalize();
    vol3 /= mpq_class(nu2d_pow);
    mpq_class euler3 = mpq_class(5, 4);
    for (auto& [p, e] : I.fd) {
      if (p == 2) continue;
      mpz_class p2 = mpz_class((unsigned long)p) * (unsigned long)p;
      euler3 *= mpq_class(p2 + 1, p2);
    }
    vol3 *= euler3;
    // r = 3 volumes: exact constants
    mpq_class vol45(1, 810);
    mpq_class vol6(1, 1152);
    R.rational += I12 * J1 * vol12 + I12 * J2 * vol12;
    if (use_b36) R.rational += I3 * J3 * vol3;
    R.rational += I45 * J4 * vol45 + I45 * J5 * vol45;
    if (use_b36) R.rational += I6 * J6 * vol6;
  } else {
    // counting-lemma volume bounds carry pi^{-2}
    mpq_class vb12(twod * twod, 675);
    vb12.canonicalize();
    vb12 /= mpq_class(nu2d_pow);
    mpq_class vb3(twod * twod, 960);
    vb3.canonicalize();
    vb3 /= mpq_class(nu2d_pow);
    mpq_class vb45(1, 75);
    mpq_class vb6(3, 320);
    R.pi_inv2 += I12 * J1 * vb12 + I12 * J2 * vb12;
    if (use_b36) R.pi_inv2 += I3 * J3 * vb3;
    R.pi_inv2 += I45 * J4 * vb45 + I45 * J5 * vb45;
    if (use_b36) R.pi_inv2 += I6 * J6 * vb6;
  }
  int c = 4 - a;
  mpq_class cp(4 * c * c * c + 6 * c * c + 4 * c + 1, 8);
  R.rational *= cp;
  R.pi_inv2 *= cp;
  return R;
}

// pi-free rational multiplier of the LHS; the transcendental part is
// pi^3 / zeta(3) (or with extra zeta(6)-bound factors under bound configs)
struct LhsParts {
  mpq_class rational;
  bool with_chi_bound = false;   // multiply by zeta(6)/zeta(3)
  bool with_euler_bound = false; // multiply by zeta(6)^{-1}
  uint64_t sqrt_arg = 1;
};

LhsParts lhs_parts(const DInfo& I, int a, const RefinementConfig& cfg) {
  LhsParts L;
  uint64_t d = I.d;
  mpz_class twelved(12 * mpz_class((unsigned long)d));
  L.sqrt_arg = 12 * d;
  mpq_class R(twelved * twelved, 137781);
  R.canonicalize();
  // index branch: 2^{nu(2d) - nu(12d)} = 1 if 3 | d else 1/2
  if (cfg.lhs_exact_branch) {
    if (!I.div3) R /= 2;
  } else {
    R /= 2;
  }
  // Euler product over p | 12d
  if (cfg.lhs_exact_euler) {
    mpq_class F = 1;
    auto mulp = [&](uint64_t p) {
      mpz_class p6;
      mpz_ui_pow_ui(p6.get_mpz_t(), (unsigned long)p, 6);
      F *= mpq_class(p6 - 1, p6);
    };
    if (I.v2 == 0) mulp(2);
    if (I.v3 == 0) mulp(3);
    for (auto& [p, e] : I.fd) mulp(p);
    R *= F;
  } else {
    L.with_euler_bound = true;
  }
  if (!cfg.lhs_chi_product_exact) L.with_chi_bound = true;
  R *= cfg.lhs_exact_alpha ? exact_G(I) : bound_G();
  int c = 4 - a;
  mpz_class na4 = 1;
  for (int i = 0; i < 4; i++) na4 *= c;
  R *= mpq_class(na4);
  L.rational = R;
  return L;
}

struct ConstCache {
  mpfr_prec_t prec;
  CertifiedReal pi3_over_z3;
  CertifiedReal z6_over_z3;
  CertifiedReal inv_z6;
  CertifiedReal pi_inv2;
  explicit ConstCache(mpfr_prec_t p)
      : prec(p),
        pi3_over_z3(CertifiedReal::pi(p).pow_int(3) / CertifiedReal::zeta(3, p)),
        z6_over_z3(CertifiedReal::zeta(6, p) / CertifiedReal::zeta(3, p)),
        inv_z6(CertifiedReal::zeta(6, p).inv()),
        pi_inv2(CertifiedReal::pi(p).pow_int(-2)) {}
};

}  // namespace

CensusRecord refined_predicate(uint64_t d, int a, const RefinementConfig& cfg,
                               const Sieve& sieve, const std::set<uint64_t>* appendix) {
  CensusRecord rec;
  rec.d = d;
  rec.a = a;
  rec.in_appendix = appendix && appendix->count(d) > 0;
  DInfo I = analyze(d, sieve);
  LhsParts Lp = lhs_parts(I, a, cfg);
  RhsParts Rp = rhs_parts(I, a, cfg);

  static thread_local std::vector<std::pair<mpfr_prec_t, ConstCache>> cache;
  auto get_cache = [&](mpfr_prec_t p) -> ConstCache& {
    for (auto& [cp, c] : cache)
      if (cp == p) return c;
    cache.emplace_back(p, ConstCache(p));
    return cache.back().second;
  };

  Sign verdict = Sign::indeterminate;
  for (mpfr_prec_t p = cfg.start_prec; p <= cfg.max_prec; p *= 2) {
    ConstCache& C = get_cache(p);
    CertifiedReal lhs = CertifiedReal::from_mpq(Lp.rational, p) * C.pi3_over_z3 *
                        CertifiedReal::from_mpz(mpz_class((unsigned long)Lp.sqrt_arg), p).sqrt();
    if (Lp.with_euler_bound) lhs = lhs * C.inv_z6;
    if (Lp.with_chi_bound) lhs = lhs * C.z6_over_z3;
    CertifiedReal rhs = CertifiedReal::from_mpq(Rp.rational, p);
    if (Rp.pi_inv2 != 0)
      rhs = rhs + CertifiedReal::from_mpq(Rp.pi_inv2, p) * C.pi_inv2;
    Sign s = (lhs - rhs).sign();
    rec.lhs_lo = lhs.lo_string();
    rec.lhs_hi = lhs.hi_string();
    rec.rhs_lo = rhs.lo_string();
    rec.rhs_hi = rhs.hi_string();
    if (s != Sign::indeterminate) {
      verdict = s;
      break;
    }
  }
  rec.refined = verdict == Sign::positive ? 1 : verdict == Sign::negative ? 0 : -1;
  rec.global_pass = global_predicate(mpz_class((unsigned long)d), a) == Sign::positive;
  return rec;
}

std::string CensusSummary::to_json() const {
  nlohmann::json j;
  j["range"] = {lo, hi};
  j["a"] = a;
  j["total"] = total;
  j["pass"] = pass;
  j["fail"] = fail;
  j["indeterminate"] = indeterminate;
  j["appendix_size"] = appendix_size;
  j["pass_and_appendix"] = pass_and_appendix;
  j["fail_not_appendix"] = fail_not_appendix;
  return j.dump(2);
}

CensusResult census(uint64_t lo, uint64_t hi, int a, const RefinementConfig& cfg,
                    const std::set<uint64_t>* appendix, int workers) {
  if (lo < 49) throw std::invalid_argument("census: lo < 49");
  if (hi < lo) throw std::invalid_argument("census: empty range");
  if (workers < 1) workers = 1;
  CensusResult res;
  uint64_t total = hi - lo + 1;
  res.records.resize(total);
  Sieve sieve((uint32_t)hi);
  const uint64_t chunk = 1024;
  std::atomic<uint64_t> next{0};
  auto work = [&]() {
    while (true) {
      uint64_t start = next.fetch_add(chunk);
      if (start >= total) break;
      uint64_t end = std::min(start + chunk, total);
      for (uint64_t i = start; i < end; i++)
        res.records[i] = refined_predicate(lo + i, a, cfg, sieve, appendix);
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < workers; t++) threads.emplace_back(work);
  for (auto& t : threads) t.join();

  auto& s = res.summary;
  s.lo = lo;
  s.hi = hi;
  s.a = a;
  s.total = total;
  for (auto& r : res.records) {
    if (r.refined == 1)
      s.pass++;
    else if (r.refined == 0)
      s.fail++;
    else
      s.indeterminate++;
    if (r.in_appendix) {
      s.appendix_size++;
      if (r.refined == 1) s.pass_and_appendix++;
    } else if (r.refined == 0) {
      s.fail_not_appendix++;
    }
  }
  return res;
}

std::string census_csv(const std::vector<CensusRecord>& records) {
  std::ostringstream os;
  os << "d,a,global_pass,refined_pass,lhs_lo,lhs_hi,rhs_lo,rhs_hi,in_appendix\n";
  for (auto& r : records) {
    os << r.d << "," << r.a << "," << (r.global_pass ? "true" : "false") << ","
       << (r.refined == 1 ? "true" : r.refined == 0 ? "false" : "indeterminate") << ","
       << r.lhs_lo << "," << r.lhs_hi << "," << r.rhs_lo << "," << r.rhs_hi << ","
       << (r.in_appendix ? "true" : "false") << "\n";
  }
  return os.str();
}

std::vector<uint64_t> load_appendix(const std::string& path, AppendixId which) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_appendix: cannot open " + path);
  std::vector<uint64_t> vals;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) throw std::runtime_error("load_appendix: blank line " + std::to_string(lineno));
    for (char c : line)
      if (c < '0' || c > '9')
        throw std::runtime_error("load_appendix: malformed line " + std::to_string(lineno));
    uint64_t v = std::stoull(line);
    if (!vals.empty()) {
      if (v == vals.back()) throw std::runtime_error("load_appendix: duplicate value " + line);
      if (v < vals.back()) throw std::runtime_error("load_appendix: not ascending at line " + std::to_string(lineno));
    }
    vals.push_back(v);
  }
  uint64_t expect_count = which == AppendixId::I ? 1367 : 18765;
  uint64_t expect_min = which == AppendixId::I ? 90 : 1170;
  uint64_t expect_max = which == AppendixId::I ? 18504 : 252288;
  if (vals.empty() || vals.front() < expect_min || vals.back() > expect_max)
    throw std::runtime_error("load_appendix: out-of-range value");
  if (vals.size() != expect_count)
    throw std::runtime_error("load_appendix: expected " + std::to_string(expect_count) +
                             " values, found " + std::to_string(vals.size()));
  return vals;
}

}  // namespace omf
