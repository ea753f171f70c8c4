#include "ktrace/common.hpp"

#include <cmath>

#include "ktrace/errors.hpp"

namespace ktrace {

std::int64_t binomial_int(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    if (r > (std::int64_t{1} << 62) / (n - k + i)) {
      throw ResourceError("binomial_int: C(" + std::to_string(n) + "," +
                          std::to_string(k) + ") overflows");
    }
    r = r * (n - k + i) / i;
  }
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  double rounded = std::round(r);
  if (rounded >= 9.007199254740992e15) {
    throw ResourceError("binomial: C(" + std::to_string(n) + "," +
                        std::to_string(k) + ") exceeds exact double range");
  }
  return rounded;
}

double log_binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    throw ArgumentError("log_binomial: need 0 <= k <= n");
  }
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_falling_factorial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    throw ArgumentError("log_falling_factorial: need 0 <= k <= n");
  }
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += std::log(double(n - i));
  return s;
}

double factorial(int n) {
  if (n < 0) throw ArgumentError("factorial: negative argument");
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  out.push_back(idx);
  while (next_k_subset(idx, n)) out.push_back(idx);
  return out;
}

bool next_k_subset(std::vector<int>& idx, int n) {
  int k = int(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace ktrace
