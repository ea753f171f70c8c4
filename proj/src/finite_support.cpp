#include "ktrace/finite_support.hpp"

#include "ktrace/errors.hpp"

namespace ktrace {

HermitianMatrix FiniteSupportMatrix::mean() const {
  if (atoms.empty()) {
    throw ArgumentError("FiniteSupportMatrix::mean: no atoms");
  }
  CMatrix acc = CMatrix::Zero(dim(), dim());
  for (const auto& atom : atoms) acc += atom.probability * atom.matrix.mat();
  return hermitian_unchecked((acc + acc.adjoint()) / 2.0);
}

std::int64_t joint_support_size(
    const std::vector<FiniteSupportMatrix>& summands, std::int64_t cap) {
  std::int64_t total = 1;
  for (const auto& s : summands) {
    total *= std::int64_t(s.atoms.size());
    if (total > cap || total <= 0) return cap + 1;
  }
  return total;
}

void for_each_joint_atom(
    const std::vector<FiniteSupportMatrix>& summands,
    const std::function<void(double, const std::vector<int>&)>& visit) {
  int m = int(summands.size());
  std::vector<int> idx(m, 0);
  for (;;) {
    double p = 1.0;
    for (int i = 0; i < m; ++i) p *= summands[i].atoms[idx[i]].probability;
    visit(p, idx);
    int pos = m - 1;
    while (pos >= 0 && idx[pos] + 1 == int(summands[pos].atoms.size())) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
    ++idx[pos];
  }
}

}  // namespace ktrace
