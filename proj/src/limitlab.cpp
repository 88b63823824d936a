#include "fal/limitlab.hpp"

#include "fal/errors.hpp"
#include "fal/par.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fal {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform_at(std::uint64_t seed, std::uint64_t k) {
    // centered on the 2^-53 lattice so 0 and 1 are never produced
    return (static_cast<double>(splitmix64_at(seed, k) >> 11) + 0.5) *
           0x1.0p-53;
}

cplx empirical_cf(const SampleSet& s, double t) {
    if (s.values.empty())
        throw DomainError("empirical_cf: empty sample set");
    return kernels::exp_mean(s.values.data(), s.values.size(), t);
}

SampleSet sample_iid_gk_sums(const PhiSpec& phi, int r, std::size_t n,
                             std::uint64_t seed) {
    if (r < 0)
        throw DomainError("sample_iid_gk_sums: r must be >= 0");
    SampleSet s;
    s.values.assign(n, 0.0);
    s.provenance = "iid-gk";
    s.seed_or_q = seed;
    const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < nn; ++i) {
        const std::uint64_t base =
            static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(r);
        double acc = 0.0;
        for (int j = 0; j < r; ++j)
            acc += phi(gk_sample(uniform_at(seed, base + j)));
        s.values[static_cast<std::size_t>(i)] = acc;
    }
    return s;
}

double iid_sum_cf_check(const PhiSpec& phi, int r, double t, std::size_t n,
                        std::uint64_t seed) {
    if (r < 0)
        throw DomainError("iid_sum_cf_check: r must be >= 0");
    if (n < 1000)
        throw DomainError("iid_sum_cf_check: need at least 1000 samples");
    SampleSet sums = sample_iid_gk_sums(phi, r, n, seed);
    cplx base(1.0, 0.0);
    if (t != 0.0)
        base += fourier_integral_numeric(phi, MeasureSpec::gauss_kuzmin(), t)
                    .value;
    cplx predicted = std::pow(base, static_cast<double>(r));
    return std::abs(empirical_cf(sums, t) - predicted);
}

cplx predicted_limit_cf(const Expansion& e, int r, double scaling,
                        double centering, double t) {
    if (r < 0)
        throw DomainError("predicted_limit_cf: r must be >= 0");
    const double u = t / scaling;
    if (!(u > 0.0 && u < 1.0))
        throw DomainError("predicted_limit_cf: t/scaling must lie in (0,1)");
    return std::exp(static_cast<double>(r) * eval_main_terms(e, u) -
                    cplx(0.0, t * centering));
}

double ks_distance(const SampleSet& s,
                   const std::function<double(double)>& cdf) {
    if (s.values.empty())
        throw DomainError("ks_distance: empty sample set");
    std::vector<double> v = s.values;
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = cdf(v[i]);
        const double k = static_cast<double>(i);
        d = std::max(d, std::max((k + 1.0) / n - f, f - k / n));
    }
    return d;
}

double cauchy_cdf(double x) { return 0.5 + std::atan(x) / kPi; }

SampleSet dedekind_experiment(std::int64_t Q) {
    if (Q < 10)
        throw DomainError("dedekind_experiment: Q must be at least 10");
    // Euler phi by sieve gives each denominator block its slot range up
    // front, so the blocks can be filled independently in any order.
    std::vector<std::int64_t> phi(static_cast<std::size_t>(Q) + 1);
    std::iota(phi.begin(), phi.end(), std::int64_t{0});
    for (std::int64_t p = 2; p <= Q; ++p)
        if (phi[static_cast<std::size_t>(p)] == p)
            for (std::int64_t m = p; m <= Q; m += p)
                phi[static_cast<std::size_t>(m)] -=
                    phi[static_cast<std::size_t>(m)] / p;
    std::vector<std::size_t> offset(static_cast<std::size_t>(Q) + 2, 0);
    for (std::int64_t q = 1; q <= Q; ++q)
        offset[static_cast<std::size_t>(q) + 1] =
            offset[static_cast<std::size_t>(q)] +
            static_cast<std::size_t>(phi[static_cast<std::size_t>(q)]);

    SampleSet s;
    s.values.assign(offset[static_cast<std::size_t>(Q) + 1], 0.0);
    s.provenance = "dedekind";
    s.seed_or_q = static_cast<std::uint64_t>(Q);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t q = 1; q <= Q; ++q) {
        std::size_t idx = offset[static_cast<std::size_t>(q)];
        const double norm =
            q > 1 ? 2.0 * kPi / std::log(static_cast<double>(q)) : 0.0;
        for (std::int64_t p = 1; p <= q; ++p) {
            if (std::gcd(p, q) != 1)
                continue;
            const Rational sd = dedekind_sum(p, q);
            s.values[idx++] = sd.num == 0 ? 0.0 : norm * sd.to_double();
        }
    }
    return s;
}

namespace {

// Collects (log t, log|log t|, log r) triples, dropping non-positive
// residuals (exact hits) and rejecting frequencies outside (0,1).
struct FitData {
    std::vector<double> x, y, z;
};

FitData fit_data(const std::vector<double>& ts, const std::vector<double>& rs,
                 const char* who) {
    if (ts.size() != rs.size())
        throw DomainError(std::string(who) + ": grid size mismatch");
    FitData d;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0 && ts[i] < 1.0))
            throw DomainError(std::string(who) +
                              ": frequencies must lie in (0,1)");
        if (!(rs[i] > 0.0) || !std::isfinite(rs[i]))
            continue;
        d.x.push_back(std::log(ts[i]));
        d.y.push_back(std::log(-std::log(ts[i])));
        d.z.push_back(std::log(rs[i]));
    }
    return d;
}

} // namespace

double fit_power_slope(const std::vector<double>& ts,
                       const std::vector<double>& rs) {
    FitData d = fit_data(ts, rs, "fit_power_slope");
    const std::size_t n = d.x.size();
    if (n < 2)
        throw DomainError("fit_power_slope: need at least two usable points");
    double mx = 0.0, mz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += d.x[i];
        mz += d.z[i];
    }
    mx /= static_cast<double>(n);
    mz /= static_cast<double>(n);
    double sxx = 0.0, sxz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (d.x[i] - mx) * (d.x[i] - mx);
        sxz += (d.x[i] - mx) * (d.z[i] - mz);
    }
    if (!(sxx > 0.0))
        throw DomainError("fit_power_slope: degenerate grid");
    return sxz / sxx;
}

FittedOrders fit_residual_orders(const std::vector<double>& ts,
                                 const std::vector<double>& rs) {
    FitData d = fit_data(ts, rs, "fit_residual_orders");
    const std::size_t n = d.x.size();
    if (n < 3)
        throw DomainError(
            "fit_residual_orders: need at least three usable points");
    double mx = 0.0, my = 0.0, mz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += d.x[i];
        my += d.y[i];
        mz += d.z[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    mz /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0, sxz = 0.0, syz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ux = d.x[i] - mx, uy = d.y[i] - my, uz = d.z[i] - mz;
        sxx += ux * ux;
        syy += uy * uy;
        sxy += ux * uy;
        sxz += ux * uz;
        syz += uy * uz;
    }
    const double det = sxx * syy - sxy * sxy;
    if (!(det > 1e-12 * sxx * syy))
        throw DomainError("fit_residual_orders: degenerate grid (log t and "
                          "log|log t| collinear)");
    return {(syy * sxz - sxy * syz) / det, (sxx * syz - sxy * sxz) / det};
}

} // namespace fal
