#pragma once

#include <vector>

namespace mtd {

// Bessel function of the first kind, integer order nu >= 0, x >= 0.
// Power series for small arguments, Miller backward recurrence otherwise;
// accuracy target 1e-12 relative.
double bessel_j(int nu, double x);

// Derivative J_nu'(x) via the standard recurrence.
double bessel_j_prime(int nu, double x);

// First `count` positive roots of J_nu, ascending. Brackets come from the
// interlacing with the order nu-1 roots; refinement is bisection plus a
// Newton polish to 1e-13 absolute.
std::vector<double> bessel_roots(int nu, int count);

}  // namespace mtd
