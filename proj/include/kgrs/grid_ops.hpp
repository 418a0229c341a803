#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kgrs/grid.hpp"

namespace kgrs {

// <f,g> = h sum_k f(x_k) conj(g(x_k)); linear in the first argument.
Complex inner(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);
double sup_norm(const GridFunction& f);

// (Pf)(x_k) = f(x_{M-1-k}); exact involution on the midpoint layout.
GridFunction parity_apply(const GridFunction& f);

// Signed frequency set xi_j = 2 pi j / (M h), j = -M/2 .. M/2-1.
std::vector<double> frequencies(const Grid& grid);

// Discrete approximation of the unitary transform
//   (Ff)(xi) = (2 pi)^{-1/2} \int e^{-i x xi} f(x) dx
// including the h/sqrt(2 pi) scaling and the node-offset phase corrections,
// so it matches the continuum transform on band-limited, domain-contained
// functions within truncation error. Values are ordered by signed frequency.
std::vector<Complex> forward_transform(const GridFunction& f);
GridFunction inverse_transform(const Grid& grid, std::span<const Complex> spectrum);

// F^{-1}[symbol(xi) F f]. Spectral bins with |Ff| below spectral_floor times
// the peak are zeroed first: they carry only rounding noise, which exponentially
// growing symbols such as e^{-a xi} would otherwise amplify above the signal.
GridFunction fourier_multiplier_apply(const GridFunction& f,
                                      const std::function<Complex(double)>& symbol,
                                      double spectral_floor = 1e-14);

GridFunction multiply_apply(const GridFunction& f, const std::function<Complex(double)>& weight);

// Grid samples of the Hermite function e_n; shift gives e_n(x + i*shift).
GridFunction hermite_sample(int n, const Grid& grid, double imag_shift = 0.0);

}  // namespace kgrs
