#include "fal/par.hpp"

#include "fal/cf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fal::kernels {

int thread_count() {
    if (const char* env = std::getenv("FAL_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

// One row of the cylinder grid: e^{itn} sum_m e^{-itm} mass(n,m), with the
// phases stepped by complex multiplication (one exp per row).
cplx dedekind_row(double t, int n, int m_max) {
    cplx step = std::exp(cplx(0.0, -t));
    cplx phase = step;
    cplx inner = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        inner += phase * gk_cylinder_mass(n, m);
        phase *= step;
    }
    return std::exp(cplx(0.0, t * n)) * inner;
}

cplx combine(const std::vector<cplx>& partials) {
    cplx s = 0.0;
    for (const cplx& p : partials) s += p;
    return s;
}

} // namespace

cplx dedekind_grid_sum_serial(double t, int n_max, int m_max) {
    std::vector<cplx> rows(n_max);
    for (int n = 1; n <= n_max; ++n) rows[n - 1] = dedekind_row(t, n, m_max);
    return combine(rows);
}

cplx dedekind_grid_sum(double t, int n_max, int m_max) {
    std::vector<cplx> rows(n_max);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count())
#endif
    for (int n = 1; n <= n_max; ++n) rows[n - 1] = dedekind_row(t, n, m_max);
    return combine(rows);
}

namespace {

constexpr std::size_t kChunk = 4096;

cplx exp_mean_chunk(const double* v, std::size_t lo, std::size_t hi, double t) {
    cplx s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += std::exp(cplx(0.0, t * v[k]));
    return s;
}

} // namespace

cplx exp_mean_serial(const double* v, std::size_t n, double t) {
    std::vector<cplx> partials((n + kChunk - 1) / kChunk);
    for (std::size_t c = 0; c < partials.size(); ++c)
        partials[c] = exp_mean_chunk(v, c * kChunk, std::min(n, (c + 1) * kChunk), t);
    return combine(partials) / static_cast<double>(n);
}

cplx exp_mean(const double* v, std::size_t n, double t) {
    std::vector<cplx> partials((n + kChunk - 1) / kChunk);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count())
#endif
    for (std::size_t c = 0; c < partials.size(); ++c)
        partials[c] = exp_mean_chunk(v, c * kChunk, std::min(n, (c + 1) * kChunk), t);
    return combine(partials) / static_cast<double>(n);
}

} // namespace fal::kernels
