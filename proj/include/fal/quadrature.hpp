#pragma once

#include "fal/specfun.hpp"

#include <cstdint>
#include <functional>

namespace fal {

struct QuadResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

// Adaptive quadrature on [a, b] for complex-valued integrands with at worst
// an integrable endpoint singularity. Tanh-sinh (double-exponential) panels
// after Mori, refined by globally adaptive bisection: the panel with the
// largest inter-level difference is split until the total meets `tol` (an
// absolute tolerance), so interior kinks are isolated automatically.
// Left-endpoint singularities are resolved to full precision (nodes are
// addressed by their distance to the endpoint); a singularity at the right
// endpoint is limited to ~sqrt(eps) accuracy because the integrand receives
// x itself rather than b - x. Throws NoConvergence once `budget` evaluations
// are exhausted.
QuadResult integrate_adaptive(const std::function<cplx(double)>& f, double a,
                              double b, double tol,
                              std::int64_t budget = 1'000'000);

// Oscillatory tail integral  int_{Y0}^inf e^{+-iy} w(y) dy  for w analytic
// and O(y^{-1-delta}) in the quarter-plane swept by rotating the contour
// upward (sign +1) or downward (sign -1):
//     int_{Y0}^inf e^{+-iy} w(y) dy = +-i e^{+-i Y0} int_0^inf e^{-s} w(Y0 +- is) ds.
// The rotated integral is evaluated through the substitution u = e^{-s},
// which turns the exponential weight into a bounded integrand on (0, 1].
// Throws DomainError if w returns a non-finite value on the ray.
cplx oscillatory_tail(const std::function<cplx(cplx)>& w, double Y0, int sign,
                      double tol);

// Same computation with the quadrature bookkeeping (error estimate and
// evaluation count) passed through.
QuadResult oscillatory_tail_result(const std::function<cplx(cplx)>& w, double Y0,
                                   int sign, double tol);

} // namespace fal
