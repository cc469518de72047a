#pragma once

// p-adic Jordan decompositions and local densities alpha_p, plus a direct
// counting oracle over Z/p^r for small ranks.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "omf/lattice.hpp"

namespace omf {

struct JordanBlock {
  int scale_exp = 0;          // j: block is p^j-modular
  int rank = 0;               // n_j
  bool odd = false;           // p = 2 only: has an odd (diagonal) part
  int even_rank = 0;          // rank of the even part (p = 2); = rank for odd p
  int chi = 0;                // chi(N_j) for odd p; chi(N_j^even) for p = 2
  std::vector<int> odd_units_mod8;  // p = 2: reduced odd part, size <= 2
};

struct JordanDecomposition {
  uint64_t p = 0;
  std::vector<JordanBlock> blocks;  // sorted by scale_exp
  int total_rank() const;
};

JordanDecomposition jordan_decompose(const GramLattice& L, uint64_t p);

// chi of a unimodular block reduced mod p (0 for odd rank)
int chi_unimodular(const JordanBlock& b, uint64_t p);

// P_p(n) = prod_{i=1}^n (1 - p^{-2i})
mpq_class p_product(uint64_t p, int n);

// exact local density from a decomposition
mpq_class alpha_p(const JordanDecomposition& dec);

// finite-level counting approximation; rank <= 3, p^r <= 128.
// shards/shard split the outer enumeration deterministically.
mpq_class alpha_p_oracle(const GramLattice& L, uint64_t p, int r);
unsigned long long alpha_p_oracle_count(const GramLattice& L, uint64_t p, int r,
                                        int shards = 1, int shard = 0);

// "p^j: rank n (even|odd, chi=...)" lines
std::string genus_symbol(const JordanDecomposition& dec);

}  // namespace omf
