#pragma once

#include "fal/fourier.hpp"

#include <array>
#include <string>

namespace fal {

// One term of the scale family t^alpha |log t|^p, t -> 0+. Every expansion's
// main term and error bound are recorded as members of this family, which
// keeps the calculus of expansions decidable by exponent arithmetic alone.
struct LogPowerScale {
    double alpha = 0.0;
    double p = 0.0;

    bool operator==(const LogPowerScale&) const = default;
};

// Strict asymptotic dominance: a is larger than b as t -> 0+, i.e. a has the
// smaller power, or equal powers and the larger log exponent.
bool dominates(const LogPowerScale& a, const LogPowerScale& b);

// Small-frequency expansion of a phase integral
//   I(t) = i c1 t + c2 t^2 + c_star t^main.alpha |log t|^main.p
//          + O(t^3 + t^err.alpha |log t|^err.p).
// c1 is kept complex so that families whose linear coefficient carries an
// imaginary part (the floor phase at lambda = 1) fit the same record; plain
// real cases have Im(c1) = 0 exactly. has_t3_error marks records whose
// generic t^3 error term is not absorbed by the family part (err.alpha >= 3).
struct Expansion {
    cplx c1{0.0, 0.0};
    double c2 = 0.0;
    cplx c_star{0.0, 0.0};
    LogPowerScale main;
    LogPowerScale err;
    bool has_t3_error = false;
};

// Evaluates the displayed main terms i c1 t + c2 t^2 + c_star t^a |log t|^p
// at a frequency t in (0, 1). Throws DomainError outside that interval.
cplx eval_main_terms(const Expansion& e, double t);

// Expansion of a phase with finite moments up to order alpha in (0, 3]:
// c1 = int phi dmu when alpha >= 1, c2 = -1/2 int phi^2 dmu when alpha >= 2,
// no singular term. The moments and the calibration value K = int |phi|^alpha
// dmu are computed once by quadrature (tolerance 1e-10) when the record is
// built; K is reported through *k_value when requested. Throws DomainError
// for alpha outside (0, 3] and MomentDiverges when a required moment fails
// to converge numerically.
Expansion taylor_expansion(const PhiSpec& phi, const MeasureSpec& mu, double alpha,
                           double* k_value = nullptr);

// Polar data of a Mellin symbol with a simple pole of residue varrho at
// depth alpha in (0, 3), log-order xi, valid in a strip of half-width rho.
struct MellinPolarData {
    double alpha = 0.5;
    double xi = 1.0;
    double rho = 0.5;
    cplx varrho{0.0, 0.0};
};

// Singular coefficient generated by a Mellin pole:
//   alpha = 1: -varrho / Gamma(xi+1),
//   alpha = 2: +varrho / (2 Gamma(xi+1)),
//   otherwise: varrho Gamma(-alpha) / Gamma(xi).
// Throws DomainError for alpha outside (0, 3) or rho outside (0, 1), and
// PoleError when the generic branch lands on a pole of Gamma (xi a
// non-positive integer).
cplx mellin_cstar(const MellinPolarData& d);

// Expansion of the power-log phase a x^{-beta} |log x|^lambda over mu:
// main scale (1/beta, lambda/beta + upsilon) with upsilon = 1 exactly at
// beta = 1/2 and beta = 1, error scale (1/beta, main.p - 1 + 0.01). The
// moments c1 (when beta < 1) and c2 (when beta < 1/2) are computed by
// quadrature. Throws DomainError for a = 0, beta <= 1/3, or lambda < 0.
Expansion power_log_expansion(double a, double beta, double lambda,
                              const MeasureSpec& mu);

// Expansion of floor(1/x)^lambda over the Gauss-Kuzmin measure:
//   lambda = 1/2        : main (2, 1), c_star = -1/log 2,
//   1/2 < lambda != 1   : main (1/lambda, 0),
//                         c_star = -e^{-pi i/(2 lambda)} Gamma(1 - 1/lambda)/log 2,
//   lambda = 1          : main (1, 1), c_star = i/log 2,
//                         c1 = -(gamma_0 - pi i/2)/log 2, err (2 - 0.01, 0).
// c1 is the numeric moment for lambda < 1 and zero for lambda >= 1 (the
// moment diverges). Throws DomainError for lambda < 1/2.
Expansion floor_power_expansion(double lambda);

// Expansion of a sum phi_1 + phi_2 from the expansions of its parts. The
// arguments are sorted internally so the dominating main term leads; c1 and
// c2 add, c_star and the main scale come from the dominant part, and the
// error scale follows the addition rule for log-power classes. Throws
// HypothesisViolation, naming the failed inequality, when the records do not
// satisfy the standing hypotheses (each error bounded by its main term, and
// t^2 bounded by the dominant main term).
Expansion add_expansions(const Expansion& e1, const Expansion& e2);

// Main terms of the two-frequency integral E(t1, t2) of e^{i(t1 phi_1 + t2 phi_2)}:
//   1 + i c1(phi_1) t1 + i c1(phi_2) t2 + c_star t^alpha |log t|^p
// with the singular term taken from the dominant expansion at its own
// frequency. Preconditions as in add_expansions; each frequency lies in
// [0, 1) and a zero frequency drops its contribution entirely.
cplx two_frequency_main_terms(const Expansion& e1, const Expansion& e2,
                              double t1, double t2);

// Expansion of the Dedekind phase (the Birkhoff pair sum over the Gauss map):
// purely linear main term i c1 t = -(pi/log 2) t with c1 = i pi/log 2, error
// scale (2, 2).
Expansion dedekind_expansion();

// Main terms of the Estermann two-frequency correlation at t = (t1, t2):
//   1 + i<t, mu> - (1/(3 log 2)) sum_j <t, u_j>^2 |log <t, u_j>|^3,
// u_1 = (1, 1), u_2 = (1, -1); a vanishing inner product drops its term (the
// scale vanishes in the limit). mu defaults to the cached mu_vector().
// Throws DomainError unless 0 < ||t|| < 1.
cplx estermann_main_terms(double t1, double t2);
cplx estermann_main_terms(double t1, double t2, const std::array<double, 2>& mu);

// Linear-in-t coefficient vector of the Estermann correlation with remainder
// calE = 0: mu_j = int (Phi_j^{(1)}(x) + Phi_j^{(2)}(T x)) dmu(x), evaluated
// through the Gauss-map branch series (branch_depth exact branches plus the
// telescoped tail density 1/((branch_depth + 1 + y) log 2)). The second
// coordinate vanishes by the mirror symmetry of the components; the computed
// value certifies the branch series against that cancellation. The constant
// zeta(1/2)^2 carried by both components may be dropped (linearity checks);
// the default call is cached after its first evaluation. Accuracy 1e-8;
// throws NoConvergence if the quadrature fails.
std::array<double, 2> mu_vector(bool drop_zeta_constant = false,
                                int branch_depth = 32, double tol = 1e-10);

// Limit of the telescoping partial sums A_N = gamma_0 + (N+1)log(N+1)
// - N log(N+2) - H_N -> -1, evaluated at N = 1e6 and 2e6 with compensated
// summation and one Richardson step (the 2/N term cancels). Throws
// NoConvergence if the two stages disagree beyond the 1e-8 target.
double constant_A();

// H(s) = sum_{n>=1} n^s (log(1 + 1/(n(n+2))) - 1/n^2) for Re(s) <= 1.99,
// absolute accuracy 1e-10: 300 exact head terms plus the tail summed through
// the asymptotic coefficients of the summand against zeta tail sums. Near
// s = 1 it satisfies zeta(2-s) + H(s) = 1/(1-s) + A + O(s-1) with A = -1.
// Throws DomainError for Re(s) > 1.99.
cplx H_series(cplx s);

// Stable JSON rendering of an Expansion: object with fields c1 ([re, im]),
// c2, c_star ([re, im]), alpha, p_main, p_err, has_t3, plus err_alpha when
// the error scale lives at a different power than the main scale.
std::string expansion_to_json(const Expansion& e);

} // namespace fal
