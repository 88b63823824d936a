#pragma once

#include "fal/asym.hpp"
#include "fal/cf.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fal {

// Counter-based SplitMix64: output k of the stream with the given seed is a
// pure function of (seed, k), so sample streams can be cut into blocks and
// filled in any order or thread count with bit-identical results.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k);

// Uniform draw in the open interval (0, 1) at stream position k.
double uniform_at(std::uint64_t seed, std::uint64_t k);

// A batch of experiment samples plus how they were produced: provenance is
// one of "iid-gk" | "rational-birkhoff" | "dedekind", and seed_or_q records
// the RNG seed (Monte Carlo) or the denominator bound (enumeration), which
// is all it takes to reproduce the values exactly.
struct SampleSet {
    std::vector<double> values;
    std::string provenance;
    std::uint64_t seed_or_q = 0;
};

// One verification sweep over a strictly decreasing geometric t-grid: oracle
// values, expansion-predicted main terms, residuals |numeric - predicted|,
// and the fitted residual orders r(t) ~ C t^slope |log t|^log_exponent.
struct SweepReport {
    std::vector<double> t_grid;
    std::vector<cplx> numeric;
    std::vector<cplx> predicted;
    std::vector<double> residuals;
    double fitted_slope = 0.0;
    double fitted_log_exponent = 0.0;
};

// (1/N) sum_k e^{i t v_k}; |result| <= 1, and exactly 1 at t = 0.
cplx empirical_cf(const SampleSet& s, double t);

// N sums of r i.i.d. Gauss-Kuzmin draws pushed through phi, sample i built
// from stream positions i*r .. i*r + r - 1 of the seeded counter stream.
// r = 0 yields the degenerate all-zero sample set.
SampleSet sample_iid_gk_sums(const PhiSpec& phi, int r, std::size_t n,
                             std::uint64_t seed);

// |empirical_cf(sums) - (1 + I[phi](t))^r|, the two sides of the i.i.d.
// identity E e^{it Sum} = (1 + I(t))^r with I from the numeric oracle.
// t = 0 is the exact degenerate case (both sides 1). Throws DomainError for
// r < 0 or n < 1000; oracle errors propagate.
double iid_sum_cf_check(const PhiSpec& phi, int r, double t, std::size_t n,
                        std::uint64_t seed);

// Model characteristic function exp(r * main_terms(e, t/scaling)
// - i t centering). Throws DomainError when t/scaling is outside (0, 1) or
// r < 0.
cplx predicted_limit_cf(const Expansion& e, int r, double scaling,
                        double centering, double t);

// sup-norm distance between the empirical CDF of s and the model cdf,
// taking both one-sided gaps at every sample point. cdf must be monotone.
double ks_distance(const SampleSet& s,
                   const std::function<double(double)>& cdf);

// Standard Cauchy CDF 1/2 + atan(x)/pi.
double cauchy_cdf(double x);

// Dedekind sums over all reduced p/q with q <= Q (sum_{q<=Q} phi_Euler(q)
// samples), normalized to 2 pi s(p,q) / log q so the predicted limit law is
// standard Cauchy; the normalization follows from the Dedekind expansion's
// linear coefficient -pi/log 2 together with the typical continued-fraction
// length (12 log 2/pi^2) log q. q = 1 contributes the single value 0.
// Throws DomainError for Q < 10.
SampleSet dedekind_experiment(std::int64_t Q);

// Log-log least-squares slope of r against t, ignoring any log factor;
// points with r <= 0 are skipped. Throws DomainError with fewer than two
// usable points.
double fit_power_slope(const std::vector<double>& ts,
                       const std::vector<double>& rs);

struct FittedOrders {
    double alpha = 0.0;
    double p = 0.0;
};

// Least-squares fit of log r against {1, log t, log|log t|}: residual model
// C t^alpha |log t|^p. Points with r <= 0 are skipped; throws DomainError
// with fewer than three usable points or a degenerate grid.
FittedOrders fit_residual_orders(const std::vector<double>& ts,
                                 const std::vector<double>& rs);

} // namespace fal
