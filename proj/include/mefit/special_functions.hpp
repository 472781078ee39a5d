#pragma once

namespace mefit {

/// Regularized lower incomplete gamma P(a, x), for a > 0, x >= 0.
/// Series expansion for x < a+1, continued fraction otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b), for a, b > 0 and x in [0, 1].
/// Continued fraction (modified Lentz), switched at the symmetry point
/// so it always converges fast.
double regularized_incomplete_beta(double x, double a, double b);

/// Upper tail of the chi-square distribution with df degrees of freedom:
/// P(X > x) = Q(df/2, x/2).  Requires x >= 0, df >= 1.
double chisq_upper_tail(double x, int df);

/// Upper tail of the F(df1, df2) distribution:
/// P(F > x) = I_t(df2/2, df1/2) with t = df2 / (df2 + df1 x).
/// Requires x >= 0, df1 >= 1, df2 >= 1.
double f_upper_tail(double x, int df1, int df2);

}  // namespace mefit
