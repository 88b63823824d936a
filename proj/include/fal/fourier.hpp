#pragma once

#include "fal/quadrature.hpp"

#include <functional>
#include <string>

namespace fal {

enum class PhiFamily { PowerLog, FloorPower, Dedekind, EstermannComponent, Custom };

// Descriptor of an observable phi on (0,1]: the singular behaviour at 0 is
// tracked explicitly so the oracle can split off and re-sum the oscillatory
// part analytically.
//
//   PowerLog            a * x^{-beta} * log(1/x)^lambda
//   FloorPower          floor(1/x)^lambda
//   Dedekind            floor(1/x) - floor(1/T(x)),  T the Gauss map
//   EstermannComponent  x^{-1/2} (a log(1/x) + b) + c0  (+ bounded remainder)
//   Custom              arbitrary callable; needs a growth bound |phi| <= C x^{-beta}
//                       before fourier_integral_numeric will touch it
struct PhiSpec {
    PhiFamily family = PhiFamily::Custom;
    double a = 0.0;      // amplitude of the x^{-beta} log^lambda part
    double beta = 0.0;   // singularity exponent at 0
    double lambda = 0.0; // log power (PowerLog) / floor exponent (FloorPower)
    double b = 0.0;      // secondary x^{-beta} amplitude (EstermannComponent)
    double c0 = 0.0;     // additive constant (EstermannComponent)
    double growth_const = -1.0; // |phi(x)| <= growth_const * x^{-beta}; < 0 = unknown
    std::function<double(double)> remainder; // bounded extra part, may be empty
    std::function<double(double)> callable;  // Custom family payload

    double operator()(double x) const; // pointwise value on (0,1]

    static PhiSpec power_log(double a, double beta, double lambda);
    static PhiSpec floor_power(double lambda);
    static PhiSpec dedekind();
    // Scalar pairing <theta, Phi_j> of the two-component Estermann observable,
    // j in {1,2}; calE is the bounded remainder of the Estermann zeta function
    // at the relevant cusp (empty = 0, evaluated at (-1)^j x).
    static PhiSpec estermann_component(int j, double theta1, double theta2,
                                       std::function<cplx(double)> calE = {});
    static PhiSpec custom(std::function<double(double)> f, double beta = 0.0,
                          double growth_const = -1.0);
};

// Probability measure on [0,1] given by a density; the density must integrate
// to 1 (checked to 1e-10 at construction) and be nonnegative.
struct MeasureSpec {
    std::function<double(double)> density;
    double f0;        // density value at 0
    std::string name; // "lebesgue" | "gauss-kuzmin" | custom tag

    MeasureSpec(std::function<double(double)> density, double f0, std::string name);

    static MeasureSpec lebesgue();
    static MeasureSpec gauss_kuzmin();
};

// I[phi](t) = int_0^1 (e^{it phi(x)} - 1) dmu(x) for t in (0,1), with
// |I - value| <= error_estimate.  Family-specific strategy:
//   FloorPower over any measure: exact level-set series over {floor(1/x)=n}
//     with the tail re-summed analytically.
//   PowerLog / EstermannComponent: split at the x0 with t|phi(x0)| = 1,
//     adaptive quadrature on [x0,1], substitution y = t*phi(x) plus a rotated
//     contour on (0,x0].
//   Dedekind: level-set double series over Gauss-map cylinders.
//   Custom: direct quadrature; requires the growth bound, otherwise throws
//     UnsupportedFamily.
QuadResult fourier_integral_numeric(const PhiSpec& phi, const MeasureSpec& mu,
                                    double t, double tol = 1e-10);

// |int g(T x) dmu(x) - int g(x) dmu(x)| over the Gauss-Kuzmin measure,
// with the left side computed through the inverse-branch series
// x = 1/(n+y): weights 1/((n+y)(n+y+1) log 2), tail summed in closed form.
// Zero up to quadrature error by T-invariance of the measure.
double verify_gk_invariance(const std::function<double(double)>& g, double tol);

// Characteristic function of the full two-component Estermann observable
// Phi(x) = Phi_1(x) + Phi_2(T x) at a frequency pair:
//   E(t1,t2) = int exp(i<(t1,t2), Phi(x)>) dmu_GK(x).
// The T-composed part is reduced with the inverse-branch series; used as the
// numeric reference for the Estermann main-term formulas.
cplx estermann_cf_numeric(double t1, double t2, double tol = 1e-9);

} // namespace fal
