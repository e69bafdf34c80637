#pragma once

namespace leaders::concerns {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. Uses the power
/// series for x < a + 1 and a Lentz continued fraction for Q otherwise.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without
/// cancellation in the tail.
double gamma_q(double a, double x);

/// Upper-tail probability of the chi-square distribution.
double chi_square_sf(double statistic, int df);

}  // namespace leaders::concerns
