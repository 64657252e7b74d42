#pragma once

namespace repnet {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

/// Upper tail P(X >= x) of a chi-squared variable with `df` degrees of freedom.
double chi_squared_sf(double x, double df);
/// Upper tail P(F >= f) of an F(df1, df2) variable.
double f_sf(double f, double df1, double df2);

}  // namespace repnet
