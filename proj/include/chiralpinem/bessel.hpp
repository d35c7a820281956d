#pragma once

#include <vector>

namespace chiralpinem::bessel {

/// First zero of J0.
inline constexpr double j0_first_zero = 2.4048255576957728;

/// Fills out[0..nmax] with J_n(x) for n = 0..nmax, x >= 0, using Miller's
/// downward recurrence normalized by J0 + 2*sum J_{2k} = 1. Accurate to
/// ~1e-13 absolute over the range used here (x up to a few tens).
void j_array(double x, int nmax, std::vector<double>& out);

double j0(double x);
double j1(double x);

/// J_n for any integer order; negative orders via J_{-n} = (-1)^n J_n.
double jn(int n, double x);

/// Smallest L >= max(1, l_min) such that 1 - sum_{|l| <= L} J_l(x)^2 < tail,
/// i.e. the truncation order at which the Bessel sum rule is satisfied to
/// the requested tail for this argument.
int truncation_order(double x, double tail, int l_min = 1);

}  // namespace chiralpinem::bessel
