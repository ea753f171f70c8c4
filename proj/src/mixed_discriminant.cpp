#include "ktrace/mixed_discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ktrace/errors.hpp"
#include "ktrace/wedge.hpp"

namespace ktrace {

namespace {

void check_square_list(const std::vector<CMatrix>& as, int n,
                       const char* who) {
  for (const auto& a : as) {
    if (a.rows() != n || a.cols() != n) {
      throw ArgumentError(std::string(who) + ": all matrices must be " +
                          std::to_string(n) + "x" + std::to_string(n));
    }
  }
}

std::vector<CMatrix> pad_with_identity(const std::vector<CMatrix>& as,
                                       int n) {
  std::vector<CMatrix> full = as;
  while (int(full.size()) < n) full.push_back(CMatrix::Identity(n, n));
  return full;
}

double mixed_disc(const std::vector<HermitianMatrix>& args) {
  std::vector<CMatrix> as;
  as.reserve(args.size());
  for (const auto& a : args) as.push_back(a.mat());
  return mixed_disc_bruteforce(as).value;
}

std::vector<HermitianMatrix> assemble(const HermitianMatrix& a, int copies_a,
                                      const HermitianMatrix& b, int copies_b,
                                      const std::vector<HermitianMatrix>& rest) {
  std::vector<HermitianMatrix> args;
  args.reserve(copies_a + copies_b + rest.size());
  for (int i = 0; i < copies_a; ++i) args.push_back(a);
  for (int i = 0; i < copies_b; ++i) args.push_back(b);
  for (const auto& r : rest) args.push_back(r);
  return args;
}

}  // namespace

MixedDiscriminantValue mixed_disc_bruteforce(const std::vector<CMatrix>& as) {
  int n = int(as.size());
  if (n == 0) throw ArgumentError("mixed_disc_bruteforce: empty list");
  if (n > 8) {
    throw ResourceError("mixed_disc_bruteforce: n = " + std::to_string(n) +
                        " exceeds the n! budget; use mixed_disc_via_wedge");
  }
  check_square_list(as, n, "mixed_disc_bruteforce");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  CompensatedSum re, im;
  CMatrix interleaved(n, n);
  do {
    for (int j = 0; j < n; ++j) interleaved.col(j) = as[perm[j]].col(j);
    Complex det = interleaved.determinant();
    re.add(det.real());
    im.add(det.imag());
  } while (std::next_permutation(perm.begin(), perm.end()));
  double fact = factorial(n);
  MixedDiscriminantValue v;
  v.n = n;
  v.value = re.value() / fact;
  v.imag_residue = std::abs(im.value()) / fact;
  v.args_desc = "bruteforce(n=" + std::to_string(n) + ")";
  return v;
}

MixedDiscriminantValue mixed_disc_via_wedge(const std::vector<CMatrix>& as,
                                            int n) {
  int k = int(as.size());
  if (k < 1 || k > n) {
    throw ArgumentError("mixed_disc_via_wedge: need 1 <= k <= n");
  }
  check_square_list(as, n, "mixed_disc_via_wedge");
  SubsetBasis basis(n, k);
  Complex tr = wedge_trace(mixed_operator(as, basis));
  // trace M^(k)(A^1..A^k) = n!/(n-k)! * D(A^1..A^k, I..I)
  double scale = std::exp(log_falling_factorial(n, k));
  Complex val = tr / scale;
  MixedDiscriminantValue v;
  v.n = n;
  v.value = val.real();
  v.imag_residue = std::abs(val.imag());
  v.args_desc =
      "wedge(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")";
  return v;
}

double af_gap(const HermitianMatrix& a, const HermitianMatrix& b,
              const std::vector<HermitianMatrix>& rest) {
  double d_ab = mixed_disc(assemble(a, 1, b, 1, rest));
  double d_aa = mixed_disc(assemble(a, 2, b, 0, rest));
  double d_bb = mixed_disc(assemble(a, 0, b, 2, rest));
  return d_ab * d_ab - d_aa * d_bb;
}

double general_af_gap(const HermitianMatrix& a, const HermitianMatrix& b,
                      const std::vector<HermitianMatrix>& rest, int l) {
  int n = a.dim();
  int k = n - int(rest.size());
  if (l < 0 || l > k) {
    throw ArgumentError("general_af_gap: split l outside [0, k]");
  }
  double d_mix = mixed_disc(assemble(a, l, b, k - l, rest));
  double d_a = mixed_disc(assemble(a, k, b, 0, rest));
  double d_b = mixed_disc(assemble(a, 0, b, k, rest));
  return std::pow(d_mix, k) - std::pow(d_a, l) * std::pow(d_b, k - l);
}

double bm_concavity_gap(const HermitianMatrix& a, const HermitianMatrix& b,
                        const std::vector<HermitianMatrix>& rest, double tau) {
  if (tau < 0.0 || tau > 1.0) {
    throw ArgumentError("bm_concavity_gap: tau outside [0, 1]");
  }
  int n = a.dim();
  int k = n - int(rest.size());
  if (k < 1) throw ArgumentError("bm_concavity_gap: rest list too long");
  HermitianMatrix mix = a.scaled(tau) + b.scaled(1.0 - tau);
  // PSD arguments keep every discriminant nonnegative in exact arithmetic;
  // tiny negative round-off is floored before the k-th root.
  auto root = [k](double v) { return std::pow(std::max(v, 0.0), 1.0 / k); };
  double lhs = root(mixed_disc(assemble(mix, k, mix, 0, rest)));
  double ra = root(mixed_disc(assemble(a, k, b, 0, rest)));
  double rb = root(mixed_disc(assemble(a, 0, b, k, rest)));
  return lhs - tau * ra - (1.0 - tau) * rb;
}

}  // namespace ktrace
