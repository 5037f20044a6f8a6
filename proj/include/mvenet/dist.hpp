#pragma once

namespace mvenet::dist {

/// A tail probability in [0, 1]. Values below 1e-300 are clamped to zero
/// and flagged instead of carrying underflow noise.
struct TailProbability {
    double value = 1.0;
    bool clamped = false;

    operator double() const noexcept { return value; }
};

/// ln Gamma(x) for x > 0 (Lanczos, g = 607/128). Throws std::domain_error
/// for x <= 0.
double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b).
double reg_incomplete_beta(double a, double b, double x);

/// Upper tail P(F(d1, d2) > f).
TailProbability f_sf(double f, double d1, double d2);

/// Two-sided tail P(|T(df)| > |t|).
TailProbability t_sf(double t, double df);

}  // namespace mvenet::dist
