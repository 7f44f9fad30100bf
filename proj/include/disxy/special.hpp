#pragma once

namespace disxy {

// Modified Bessel function K0 for x > 0. Power series in long double for
// x <= 9, asymptotic expansion above; relative error below 1e-10 on both
// sides of the switch.
double bessel_k0(double x);

inline constexpr double kBesselK0Switch = 9.0;

}  // namespace disxy
