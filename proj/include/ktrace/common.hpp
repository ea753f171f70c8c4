#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace ktrace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Exact binomial coefficient; throws ResourceError once the value would
// leave the exactly-representable integer range of double.
double binomial(int n, int k);
std::int64_t binomial_int(int n, int k);

double log_binomial(int n, int k);

// ln of the falling factorial n * (n-1) * ... * (n-k+1).
double log_falling_factorial(int n, int k);

double factorial(int n);

// Relative-comparison scale: max(|a|, |b|, 1).
inline double comparison_scale(double a, double b) {
  double s = std::abs(a) > std::abs(b) ? std::abs(a) : std::abs(b);
  return s > 1.0 ? s : 1.0;
}

// Sum with Neumaier compensation; immune to order-of-magnitude spread.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Enumerates k-element subsets of {0,...,n-1} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int n, int k);

// Next permutation-free subset walk used by hot loops: advances `idx`
// (size k, strictly increasing, values < n); returns false after the last.
bool next_k_subset(std::vector<int>& idx, int n);

}  // namespace ktrace
