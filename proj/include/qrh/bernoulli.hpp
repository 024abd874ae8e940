#pragma once

#include <vector>

#include "qrh/value.hpp"

namespace qrh {

struct MultiBernoulliQuery {
  int N = 1;
  int k = 0;
  cplx x{};
  std::vector<cplx> a;  // size N, all nonzero
};

// B_j / j! for j = 0..n (B_1 = -1/2 convention). Cached; thread-safe.
const std::vector<double>& bernoulli_over_factorial(int n);

// Classical Bernoulli number B_j (double precision).
double bernoulli_number(int j);

// Monomial coefficients c_0..c_k of B_{N,k}(x|a) = sum_m c_m x^m.
std::vector<cplx> multi_bernoulli_coefficients(int k, const std::vector<cplx>& a);

cplx multi_bernoulli(const MultiBernoulliQuery& q);
cplx multi_bernoulli(int k, cplx x, const std::vector<cplx>& a);

// B_k(x) = B_{1,k}(x|1).
cplx classical_bernoulli(int k, cplx x);

}  // namespace qrh

namespace qrh {

// B_{N,j}(x|a) for j = 0..J from a single series product.
std::vector<cplx> multi_bernoulli_sequence(int J, cplx x, const std::vector<cplx>& a);

}  // namespace qrh
