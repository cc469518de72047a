#pragma once

// Integral lattices with even bilinear forms: discriminant groups and
// forms, reflections, spinor norms, membership in the modular group, and
// fixed/perp sublattices of finite-order isometries.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omf/intmat.hpp"

namespace omf {

struct GramLattice {
  IMat gram;            // symmetric, even diagonal, nonzero determinant
  int sig_pos = 0, sig_neg = 0;
};

GramLattice make_lattice(const IMat& gram);
GramLattice hyperbolic_plane();               // U
GramLattice lattice_A2();                     // [[2,1],[1,2]]
GramLattice direct_sum(const GramLattice& a, const GramLattice& b);
GramLattice rescale(const GramLattice& a, const mpz_class& c);
GramLattice rank_one(const mpz_class& g);     // <g>
// L = 2U + <-2d> + <-2(n+1)>, basis order (e1,f1,e2,f2,v,w)
GramLattice lattice_L(const mpz_class& d, int n = 2);

struct FiniteQuadForm {
  // invariant factors > 1, ascending, each dividing the next
  std::vector<mpz_class> invariant_factors;
  // q-values on generators (diagonal, mod 2Z in [0,2)) and pairings
  // (off-diagonal, mod 1Z in [0,1))
  QMat gram_q;
  mpz_class order() const;
};

FiniteQuadForm discriminant_form(const GramLattice& L);
bool is_p_elementary(const FiniteQuadForm& f, const mpz_class& p);
// brute-force isomorphism test for small groups (order cap)
bool quad_forms_isomorphic(const FiniteQuadForm& a, const FiniteQuadForm& b,
                           unsigned long order_cap = 10000);
// |O(q)| by brute force over generator images (order cap)
unsigned long quad_form_aut_count(const FiniteQuadForm& f,
                                  unsigned long order_cap = 10000);

// gcd of pairings (z, x) over lattice basis vectors x; z must be nonzero
// and primitive
mpz_class divisor(const std::vector<mpz_class>& z, const GramLattice& L);

mpz_class inner(const std::vector<mpz_class>& x, const std::vector<mpz_class>& y,
                const GramLattice& L);

struct Isometry {
  IMat m;
};

// checks g^T G g = G
bool is_isometry(const IMat& g, const GramLattice& L);
// reflection in z; throws if not integral on L
Isometry reflection(const std::vector<mpz_class>& z, const GramLattice& L);
// sign of the real spinor norm via reflection factorization over Q
int spinor_norm_sign(const IMat& g, const GramLattice& L);

// membership in the modular group of lattice_L(d, n)
bool gamma_membership(const IMat& g, const mpz_class& d, int n = 2);

// characteristic polynomial as cyclotomic multiset {order -> multiplicity};
// throws if a non-cyclotomic factor appears
std::map<int, int> char_poly_type(const IMat& g);

// 4x4 isometry of 2U from a pair of determinant-1 integer 2x2 matrices
IMat delta_embed(const IMat& A, const IMat& B);
// extension to lattice_L(d,n): acts as identity on the complement
IMat delta_embed_L(const IMat& A, const IMat& B);

struct SplitResult {
  GramLattice T, S;     // invariant and perp-invariant lattices
  IMat T_basis, S_basis;  // columns = basis vectors in L-coordinates
};
SplitResult invariant_split(const IMat& g, const GramLattice& L);

// orthogonal complement of the span of given columns, saturated
std::pair<GramLattice, IMat> orth_complement(const IMat& vectors, const GramLattice& L);

std::string lattice_to_json(const GramLattice& L);
GramLattice lattice_from_json(const std::string& text);

}  // namespace omf
