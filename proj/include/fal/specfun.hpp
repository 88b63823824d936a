#pragma once

#include <complex>

namespace fal {

using cplx = std::complex<double>;

// Euler-Mascheroni constant gamma_0.
double euler_gamma();

// Gamma(z) for complex z away from the poles 0, -1, -2, ...
// Lanczos approximation (g = 7, 9 terms) evaluated in long double, extended
// to Re(z) < 1/2 by the reflection formula. Relative error stays below
// 1e-13 for |z| <= 50 away from the poles.
// Throws PoleError at non-positive integers.
cplx gamma(cplx z);
// Real restriction (throws PoleError on poles). Named distinctly because
// libc already claims ::gamma(double).
double gamma_real(double x);

// Riemann zeta(s), s != 1, via Euler-Maclaurin summation with an
// automatically deepened truncation point for large |Im s|. Relative error
// <= 1e-12 on Re(s) in [-5, 5], |Im(s)| <= 100; the functional equation
// extends the range to Re(s) < -5.
// Throws PoleError at s = 1.
cplx zeta(cplx s);

// Tail sum zeta(s, N) := sum_{n > N} n^{-s} for Re(s) > 1 (and by analytic
// continuation of the Euler-Maclaurin formula, for any s != 1). Needed by
// series accelerations that sum the head directly.
cplx zeta_tail(cplx s, int n_head);

// Internal knob used by the consistency tests: evaluate zeta with the given
// base truncation N instead of the default (30).
cplx zeta_with_depth(cplx s, int n_base);

// log(1 + u) for complex u, accurate in a relative sense down to |u| near
// the underflow threshold. std::log(1.0 + u) rounds u against 1 first and
// is useless below |u| ~ 1e-10; there is no std::log1p for complex.
// Requires Re(u) > -1 or Im(u) != 0 (principal branch away from the cut).
cplx log1p_cplx(cplx u);

} // namespace fal
