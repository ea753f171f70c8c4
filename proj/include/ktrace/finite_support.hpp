#pragma once

#include "ktrace/hermitian.hpp"

namespace ktrace {

struct Atom {
  double probability;
  HermitianMatrix matrix;
};

// One independent random matrix with finite support.
struct FiniteSupportMatrix {
  std::vector<Atom> atoms;

  int dim() const { return atoms.empty() ? 0 : atoms.front().matrix.dim(); }
  HermitianMatrix mean() const;
};

// Product of per-summand support sizes, saturating at the given cap.
std::int64_t joint_support_size(const std::vector<FiniteSupportMatrix>& summands,
                                std::int64_t cap);

// Calls visit(probability, atom_indices) for every point of the joint
// support of independent summands.
void for_each_joint_atom(
    const std::vector<FiniteSupportMatrix>& summands,
    const std::function<void(double, const std::vector<int>&)>& visit);

}  // namespace ktrace
