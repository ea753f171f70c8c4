#pragma once

#include <string>

#include "ktrace/hermitian.hpp"

namespace ktrace {

struct MixedDiscriminantValue {
  int n = 0;
  double value = 0.0;
  double imag_residue = 0.0;
  std::string args_desc;
};

// Definition route: (1/n!) sum over permutations of the determinant whose
// column j is column j of A^(sigma(j)). Budget n <= 8.
MixedDiscriminantValue mixed_disc_bruteforce(const std::vector<CMatrix>& as);

// Exterior-algebra route for D(A^1..A^k, I..I): (n-k)!/n! times the wedge
// trace of the symmetrized operator.
MixedDiscriminantValue mixed_disc_via_wedge(const std::vector<CMatrix>& as,
                                            int n);

// D(A,B,rest)^2 - D(A,A,rest) * D(B,B,rest); nonnegative for PD arguments.
double af_gap(const HermitianMatrix& a, const HermitianMatrix& b,
              const std::vector<HermitianMatrix>& rest);

// D(A[l],B[k-l],rest)^k - D(A[k],rest)^l * D(B[k],rest)^(k-l) with
// k = n - rest.size().
double general_af_gap(const HermitianMatrix& a, const HermitianMatrix& b,
                      const std::vector<HermitianMatrix>& rest, int l);

// Chord gap of tau -> D((tau A + (1-tau) B)[k], rest)^(1/k).
double bm_concavity_gap(const HermitianMatrix& a, const HermitianMatrix& b,
                        const std::vector<HermitianMatrix>& rest, double tau);

}  // namespace ktrace
