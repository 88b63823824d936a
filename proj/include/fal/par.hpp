#pragma once

#include "fal/specfun.hpp"

#include <cstddef>
#include <cstdint>

namespace fal::kernels {

// Worker count: FAL_THREADS env var if set (>=1), else the OpenMP default,
// else 1 when built without OpenMP.
int thread_count();

// sum_{n<=N, m<=M} e^{it(n-m)} * gk_cylinder_mass(n, m).
// Rows are independent; each row's inner sum is produced by one worker and
// the row partials are combined in index order, so the result is
// bit-identical for any thread count — including the serial reference.
cplx dedekind_grid_sum(double t, int n_max, int m_max);
cplx dedekind_grid_sum_serial(double t, int n_max, int m_max);

// mean_k e^{it v_k} over a sample array, accumulated in fixed-size chunks
// whose partials are combined in chunk order (same contract as above).
cplx exp_mean(const double* v, std::size_t n, double t);
cplx exp_mean_serial(const double* v, std::size_t n, double t);

} // namespace fal::kernels
