#include "omf/branch.hpp"

#include <numeric>
#include <stdexcept>

#include "omf/arith.hpp"

namespace omf {

uint64_t order_mod(uint64_t x, uint64_t mod) {
  if (mod == 0) throw std::invalid_argument("order_mod: mod = 0");
  return mod / gcd_u64(x % mod, mod);
}

static uint64_t computed_m(const CongruenceInstance& i) {
  return std::lcm(order_mod(i.k, 2 * i.r), order_mod(i.l, 2 * i.s));
}

bool congruence_oracle(const CongruenceInstance& inst) {
  if (inst.s <= 1) throw std::invalid_argument("congruence_oracle: s <= 1");
  uint64_t m = inst.m ? inst.m : computed_m(inst);
  if (inst.u != m && inst.u != 2 * m)
    throw std::invalid_argument("congruence_oracle: u not in {m, 2m}");
  mpz_class r((unsigned long)inst.r), s((unsigned long)inst.s), k((unsigned long)inst.k),
      l((unsigned long)inst.l), M((unsigned long)m), u((unsigned long)inst.u);
  // (1) ur | mk
  if ((M * k) % (u * r) != 0) return false;
  // (2) 2rsu | m^2 k l
  if ((M * M * k * l) % (2 * r * s * u) != 0) return false;
  // (3) us | m^2 l^2 and 2s | m^2 l^2/(us) - 2
  mpz_class num = M * M * l * l;
  if (num % (u * s) != 0) return false;
  mpz_class val = num / (u * s) - 2;
  if (val % (2 * s) != 0) return false;
  return true;
}

CongCase classify_congruence(const CongruenceInstance& inst) {
  if (inst.s <= 1) throw std::invalid_argument("classify_congruence: s <= 1");
  uint64_t m = inst.m ? inst.m : computed_m(inst);
  if (inst.u != m && inst.u != 2 * m) return CongCase::none;
  uint64_t r = inst.r, s = inst.s, k = inst.k % (2 * r), l = inst.l % (2 * s);
  uint64_t ml = order_mod(l, 2 * s);
  mpz_class L((unsigned long)l), S((unsigned long)s);
  bool l_odd = (l % 2) == 1;
  if (k == 0) {
    if (inst.u == m) {
      if (l_odd) {
        // l^2 = 1 mod s, with m = 2s
        if ((L * L - 1) % S == 0 && m == 2 * s) return CongCase::c1a;
      } else {
        // l^2 = 2 mod 2s, with m = s
        if ((L * L - 2) % (2 * S) == 0 && m == s) return CongCase::c1a;
      }
      return CongCase::none;
    }
    // u = 2m: l = 2 l1 with 2 l1^2 = 2 mod 2s, m = s
    if (!l_odd) {
      mpz_class l1 = L / 2;
      if ((2 * l1 * l1 - 2) % (2 * S) == 0 && m == s) return CongCase::c1b;
    }
    return CongCase::none;
  }
  if (k == r) {
    if (inst.u != m) return CongCase::none;
    if (l_odd && ml % 2 == 0) {
      if ((2 * L * L - 2) % (2 * S) == 0 && m == 2 * s) return CongCase::c2a;
    }
    if (!l_odd && ml % 2 == 1) {
      if ((L * L - 1) % S == 0 && ml == s) return CongCase::c2b;
    }
    return CongCase::none;
  }
  return CongCase::none;
}

std::vector<ReflectiveClass> reflective_classes(const mpz_class& d, int n) {
  if (d <= 48) throw std::invalid_argument("reflective_classes: d <= 48");
  if (n != 2) throw std::invalid_argument("reflective_classes: n != 2");
  uint64_t du = mpz_class(d).get_ui();
  bool odd = (d % 2) != 0;
  std::vector<ReflectiveClass> out;
  out.push_back({BTag::B1, true, du, 3, 6, 3, 0, 2, false});
  out.push_back({BTag::B2, true, du, 3, 6, 6, 0, 1, false});
  if (odd) out.push_back({BTag::B3, true, du, 3, 6, 6, du, 3, true});
  out.push_back({BTag::B4, false, 3, du, 2 * du, du, 0, 2, false});
  out.push_back({BTag::B5, false, 3, du, 2 * du, 2 * du, 0, 1, false});
  if (odd) out.push_back({BTag::B6, false, 3, du, 2 * du, 2 * du, 3, 3, true});
  return out;
}

KGenus k_genus(uint64_t u, uint64_t m, uint64_t r, uint64_t s, uint64_t k, uint64_t l) {
  KGenus g;
  auto qmod2 = [](const mpq_class& v0) {
    mpq_class v = v0;
    while (v < 0) v += 2;
    while (v >= 2) v -= 2;
    return v;
  };
  auto qmod1 = [](const mpq_class& v0) {
    mpq_class v = v0;
    while (v < 0) v += 1;
    while (v >= 1) v -= 1;
    return v;
  };
  bool case1 = (u == m && m == 2 * s && k == 0) || (u == 2 * m && m == s && k == 0);
  if (case1) {
    g.group = {mpz_class(2 * mpz_class((unsigned long)r))};
    g.gram = QMat(1, 1);
    g.gram.at(0, 0) = qmod2(mpq_class(1, 2 * (unsigned long)r));
    return g;
  }
  if (u == m && m == 2 * s && k == r % (2 * r) && l % 2 == 0) {
    if (r % 2 == 0 || s % 2 == 0) {
      g.possible = false;  // excluded for rank reasons
      return g;
    }
    g.group = {mpz_class(2), mpz_class((unsigned long)r)};
    g.gram = QMat(2, 2);
    mpz_class L((unsigned long)l), R((unsigned long)r), S((unsigned long)s);
    g.gram.at(0, 0) = qmod2(mpq_class(-L * L + 1, 2 * S));
    g.gram.at(1, 1) = qmod2(mpq_class(-S * R + 1, 2 * R));
    g.gram.at(0, 1) = g.gram.at(1, 0) = qmod1(mpq_class(-L, 2));
    return g;
  }
  if ((u == m && m == s && k == 0) || (u == m && m == 2 * s && k == r % (2 * r) && l % 2 == 1)) {
    g.possible = false;
    return g;
  }
  throw std::invalid_argument("k_genus: parameters match no case");
}

OqCount oq_count(uint64_t r, const mpz_class& theta) {
  uint64_t fourr = 4 * r;
  mpz_class t = theta % (unsigned long)fourr;
  if (t < 0) t += (unsigned long)fourr;
  uint64_t sols;
  mpz_class g;
  mpz_gcd_ui(g.get_mpz_t(), t.get_mpz_t(), fourr);
  if (g == 1) {
    // x^2 theta = theta <=> x^2 = 1 (mod 4r)
    sols = count_unit_sqrt(mpz_class(1), fourr);
  } else {
    sols = 0;
    uint64_t tu = t.get_ui();
    for (uint64_t x = 0; x < fourr; x++) {
      if (gcd_u64(x, fourr) != 1) continue;
      if ((x * x % fourr) * tu % fourr == tu % fourr) sols++;
    }
  }
  OqCount c;
  c.solutions_mod_4r = sols;
  c.oq_order = sols / 2;
  uint64_t bound = (r % 2 == 1) ? (1ull << (nu(2 * r) - 1)) : (1ull << nu(2 * r));
  c.bound_ok = c.oq_order <= bound;
  return c;
}

uint64_t jj_count(uint64_t s, int j_case) {
  if (s < 1) throw std::invalid_argument("jj_count: s = 0");
  if (s == 1) return 1;  // single residue class
  auto f = factorize(s);
  int a = 0;
  uint64_t nu_odd = 0;
  for (auto& [p, e] : f.factors) {
    if (p == 2)
      a = e;
    else
      nu_odd++;
  }
  uint64_t odd_part = 1ull << nu_odd;
  switch (j_case) {
    case 1: {
      uint64_t c2 = a == 0 ? 1 : a == 1 ? 2 : a == 2 ? 4 : 8;
      return c2 * odd_part;
    }
    case 2: {
      uint64_t c2 = a <= 1 ? 1 : a == 2 ? 2 : 4;
      return c2 * odd_part;
    }
    case 3:
      return a == 0 ? odd_part : 0;
  }
  throw std::invalid_argument("jj_count: bad case");
}

uint64_t jj_count_naive(uint64_t s, int j_case) {
  if (s == 1) return 1;
  uint64_t count = 0;
  for (uint64_t l = 0; l < 2 * s; l++) {
    switch (j_case) {
      case 1:
        if (l % 2 == 1 && (l * l) % s == 1 % s) count++;
        break;
      case 2:
        if (l % 2 == 0) {
          uint64_t l1 = l / 2;
          if ((2 * l1 * l1) % (2 * s) == 2 % (2 * s)) count++;
        }
        break;
      case 3:
        if (l % 2 == 0 && (l * l) % s == 1 % s) count++;
        break;
    }
  }
  return count;
}

uint64_t jj_bound(uint64_t s, int j_case) {
  if (s == 1) return 1;
  int n = nu(s);
  int a = padic_val(mpz_class((unsigned long)s), 2);
  switch (j_case) {
    case 1:
      if (a == 0) return 1ull << (n + 1);
      if (a == 1) return 1ull << n;
      if (a == 2) return 1ull << (n + 1);
      return 1ull << (n + 2);
    case 2:
      if (a == 0) return 1ull << n;
      if (a == 1) return n >= 1 ? 1ull << (n - 1) : 1;
      if (a == 2) return 1ull << n;
      return 1ull << (n + 1);
    case 3:
      return 1ull << (n + 1);
  }
  throw std::invalid_argument("jj_bound: bad case");
}

uint64_t ii_bound_cyclic(uint64_t r) { return 4 * oq_count(r, mpz_class(1)).oq_order; }

uint64_t ii_bound_for_class(const ReflectiveClass& cls, const mpz_class& d, bool exact_small) {
  uint64_t du = mpz_class(d).get_ui();
  switch (cls.tag) {
    case BTag::B1:
    case BTag::B2:
      return ii_bound_cyclic(du);
    case BTag::B4:
    case BTag::B5:
      return ii_bound_cyclic(3);
    case BTag::B3: {
      // group C2 + C_d, d odd
      if (exact_small && 2 * du <= 10000) {
        // representative l in case 3 at s = 3: l = 2
        KGenus g = k_genus(6, 6, du, 3, du, 2);
        FiniteQuadForm f;
        f.invariant_factors = g.group;
        f.gram_q = g.gram;
        return 4 * quad_form_aut_count(f);
      }
      return 4ull << nu(2 * du);
    }
    case BTag::B6: {
      if (exact_small) {
        uint64_t l = 0;
        for (uint64_t cand = 2; cand < 2 * du; cand += 2)
          if ((cand * cand) % du == 1 % du) {
            l = cand;
            break;
          }
        if (l) {
          KGenus g = k_genus(2 * du, 2 * du, 3, du, 3, l);
          FiniteQuadForm f;
          f.invariant_factors = g.group;
          f.gram_q = g.gram;
          return 4 * quad_form_aut_count(f);
        }
      }
      return 4ull << nu(6);
    }
  }
  throw std::logic_error("ii_bound_for_class");
}

std::optional<std::vector<mpz_class>> find_reflective_vector(
    uint64_t r, uint64_t s, uint64_t u, uint64_t m, uint64_t k, uint64_t l) {
  // z = (m x1, m y1, m x2, m y2, zv, zw) with zv = -mk/2r + m t,
  // zw = -ml/2s + m t'; require z^2 = -u, z primitive
  mpz_class R((unsigned long)r), S((unsigned long)s), M((unsigned long)m),
      K((unsigned long)k), L((unsigned long)l), U((unsigned long)u);
  if ((M * K) % (2 * R) != 0 || (M * L) % (2 * S) != 0) return std::nullopt;
  mpz_class zv0 = -(M * K) / (2 * R), zw0 = -(M * L) / (2 * S);
  GramLattice Lat = direct_sum(
      direct_sum(hyperbolic_plane(), hyperbolic_plane()),
      direct_sum(rank_one(-2 * R), rank_one(-2 * S)));
  const long B = 4;
  for (long t = -B; t <= B; t++)
    for (long tp = -B; tp <= B; tp++) {
      mpz_class zv = zv0 + M * t, zw = zw0 + M * tp;
      // need 2 x1 y1 m^2 + 2 x2 y2 m^2 = -u + 2r zv^2 + 2s zw^2
      mpz_class rhs = -U + 2 * R * zv * zv + 2 * S * zw * zw;
      if (rhs % (2 * M * M) != 0) continue;
      mpz_class prod_target = rhs / (2 * M * M);  // x1 y1 + x2 y2
      for (long x1 = -B; x1 <= B; x1++)
        for (long y1 = -B; y1 <= B; y1++) {
          mpz_class rem = prod_target - mpz_class(x1) * y1;
          for (long x2 = -B; x2 <= B; x2++) {
            if (x2 == 0) {
              if (rem != 0) continue;
              std::vector<mpz_class> z = {M * x1, M * y1, 0, 0, zv, zw};
              mpz_class content = 0;
              for (auto& c : z) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
              if (content != 1) continue;
              if (divisor(z, Lat) == M && inner(z, z, Lat) == -U) return z;
              continue;
            }
            if (rem % x2 != 0) continue;
            mpz_class y2 = rem / x2;
            if (abs(y2) > 2 * B) continue;
            std::vector<mpz_class> z = {M * x1, M * y1, M * x2, M * y2, zv, zw};
            mpz_class content = 0;
            for (auto& c : z) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
            if (content != 1) continue;
            if (divisor(z, Lat) == M && inner(z, z, Lat) == -U) return z;
          }
        }
    }
  return std::nullopt;
}

}  // namespace omf
