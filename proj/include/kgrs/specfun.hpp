#pragma once

#include <complex>
#include <vector>

namespace kgrs::specfun {

// Gauss-Hermite rule: integrates f(x) e^{-x^2} exactly for polynomial f of
// degree <= 2K-1. Nodes are strictly increasing and symmetric about 0, all
// weights positive, sum of weights = sqrt(pi).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Normalized Hermite function e_n(z) = (2^n n! sqrt(pi))^{-1/2} H_n(z) e^{-z^2/2},
// evaluated by the normalized three-term recurrence
//   e_{n+1} = z sqrt(2/(n+1)) e_n - sqrt(n/(n+1)) e_{n-1}
// so that H_n and n! are never formed. Requires n <= 500; throws if an
// intermediate magnitude exceeds 1e300 (possible for large |Im z| * n).
std::complex<double> hermite_function(int n, std::complex<double> z);
double hermite_function(int n, double x);

QuadratureRule gauss_hermite_rule(int point_count);

// Terminating Gauss series sum_{k=0}^{m} (-m)_k (b)_k / ((c)_k k!) z^k with
// incremental Pochhammer updates. Throws if a required (c)_k factor vanishes.
double hyp2f1_terminating(int m, double b, double c, double z);

// |[phi_n, phi_m]| for phi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-3x^2/4}:
// zero when n+m is odd, otherwise
//   exp( (1/2)[(n+m+1)(ln2 - ln3) - ln pi - lnGamma(n+1) - lnGamma(m+1)]
//        + lnGamma((n+m+1)/2) ) * | 2F1(-m, -n; (1-m-n)/2; 3/2) |
// with all Gamma/factorial combinations kept in log space. Requires n, m <= 60.
double indefinite_gram_closed_form(int n, int m);

}  // namespace kgrs::specfun
