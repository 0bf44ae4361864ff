#pragma once

namespace conwave {

// Euler Beta function B(alpha, beta) via log-gamma; relative accuracy about
// 1e-13. Rejects non-positive arguments. Test oracle for endpoint-weighted
// radial moments: int_0^1 y^(N-1) (1-y^2)^c dy = (1/2) B(N/2, c+1).
double beta_value(double alpha, double beta);

// Digamma function, series/asymptotic hybrid, x > 0.
double digamma(double x);

// d/d(beta) B(alpha, beta) = B(alpha, beta) (psi(beta) - psi(alpha + beta)).
// Oracle for log-weighted moments:
//   int_0^1 y^(N-1) (1-y^2)^c log(1-y^2) dy = (1/2) d/dc B(N/2, c+1).
double beta_derivative_second(double alpha, double beta);

// Surface area of the unit sphere S^(N-1) in R^N: 2 pi^(N/2) / Gamma(N/2).
double sphere_area(int N);

} // namespace conwave
