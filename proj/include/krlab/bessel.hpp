#pragma once

#include <vector>

namespace krlab::spectral {

/// J_0(x) .. J_{order_max}(x) for real x by Miller's downward recurrence,
/// normalized with J_0 + 2*sum J_{2k} = 1. Absolute error ~1e-14 for
/// order_max <= 200 and |x| <= 4*pi.
std::vector<double> bessel_j_sequence(int order_max, double x);

/// Integer-order J_n(x), any sign of n and x.
double bessel_j(int n, double x);

}  // namespace krlab::spectral
