#include "fal/asym.hpp"

#include "fal/cf.hpp"
#include "fal/errors.hpp"
#include "fal/quadrature.hpp"
#include "fal/specfun.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <utility>

namespace fal {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEps = 0.01; // recorded epsilon in error exponents
const double kLog2 = std::log(2.0);

// Asymptotic coefficients of log(1 + 1/(n(n+2))) = sum_k d_k n^{-k}; the
// expansion starts at k = 2 with d_2 = 1, so subtracting 1/n^2 removes the
// k = 2 term exactly. Shared by the floor moments and the H series.
constexpr int kTailK0 = 2;
constexpr double kTailCoeff[] = {1.0, -2.0, 3.5, -6.0, 31.0 / 3.0, -18.0, 31.75};
constexpr int kTailKmax = 8;
constexpr int kTailHead = 300; // exact head length before the zeta tails

std::string scale_str(const LogPowerScale& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "t^%g |log t|^%g", s.alpha, s.p);
    return buf;
}

bool is_zero_expansion(const Expansion& e) {
    return e.c1 == cplx{} && e.c2 == 0.0 && e.c_star == cplx{} &&
           e.main == LogPowerScale{} && e.err == LogPowerScale{};
}

// Moment integral over (0, 1] with the divergence guard demanded by the
// Taylor-class constructors: quadrature failure or an implausibly large
// value both surface as MomentDiverges.
// Observables built from floor(1/x) step at every cell boundary 1/n, and the
// adaptive integrator burns its whole budget drilling those jumps one by one.
// Summing the natural cells [1/(n+1), 1/n] keeps each panel smooth; the tail
// beyond the last cell is recovered by Richardson extrapolation of the dyadic
// partial sums, which also flags sums that fail to contract (divergence).
double cellwise_moment(const std::function<double(double)>& f, const char* what) {
    double acc = 0.0, comp = 0.0;
    auto sweep = [&](int lo, int hi) {
        for (int n = lo; n <= hi; ++n) {
            double cell_tol =
                std::max(1e-11 / (static_cast<double>(n) * (n + 1.0)), 1e-17);
            QuadResult r = integrate_adaptive(
                [&f](double x) { return cplx(f(x), 0.0); }, 1.0 / (n + 1.0),
                1.0 / n, cell_tol);
            double y = r.value.real() - comp, t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        return acc;
    };
    double s1 = sweep(1, 4000);
    double s2 = sweep(4001, 8000);
    double s3 = sweep(8001, 16000);
    if (!std::isfinite(s3) || std::abs(s3) > 1e8)
        throw MomentDiverges(std::string(what) + " exceeds the overflow budget");
    double d1 = s2 - s1, d2 = s3 - s2;
    if (std::abs(d2) <= 1e-13) return s3;
    // a power-law tail C N^{-p} contracts dyadically by 2^{-p}; anything
    // slower than p = 0.15 is treated as non-convergent
    if (d1 * d2 <= 0.0 || std::abs(d2) >= 0.9 * std::abs(d1))
        throw MomentDiverges(std::string(what) + " does not converge numerically");
    return s3 + d2 * d2 / (d1 - d2);
}

double checked_moment(const std::function<double(double)>& f, const char* what) {
    try {
        QuadResult r = integrate_adaptive(
            [&f](double x) { return cplx(f(x), 0.0); }, 0.0, 1.0, 1e-10);
        double v = r.value.real();
        if (!std::isfinite(v) || std::abs(v) > 1e8)
            throw MomentDiverges(std::string(what) + " exceeds the overflow budget");
        return v;
    } catch (const NoConvergence&) {
        try {
            return cellwise_moment(f, what);
        } catch (const NoConvergence&) {
            throw MomentDiverges(std::string(what) +
                                 " does not converge numerically");
        }
    }
}

// int floor(1/x)^lambda dmu_GK  for lambda < 1: exact level-set head plus the
// asymptotic series of the level masses against zeta tail sums.
double floor_moment(double lambda) {
    double s = 0.0, comp = 0.0;
    for (int n = 1; n <= kTailHead; ++n) {
        double term = std::pow(static_cast<double>(n), lambda) * gk_mass(n);
        double y = term - comp, t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    for (int k = kTailK0; k <= kTailKmax; ++k)
        s += kTailCoeff[k - kTailK0] *
             zeta_tail(cplx(k - lambda, 0.0), kTailHead).real() / kLog2;
    return s;
}

// Hypothesis checks shared by add_expansions and two_frequency_main_terms;
// `a` is the dominant operand after sorting.
void check_addition_hypotheses(const Expansion& a, const Expansion& b) {
    const Expansion* ops[2] = {&a, &b};
    for (int j = 0; j < 2; ++j) {
        if (dominates(ops[j]->err, ops[j]->main))
            throw HypothesisViolation(
                "R = O(L) fails for operand " + std::to_string(j + 1) + ": err " +
                scale_str(ops[j]->err) + " decays slower than main " +
                scale_str(ops[j]->main));
    }
    if (dominates(LogPowerScale{2.0, 0.0}, a.main))
        throw HypothesisViolation("t^2 = O(t^alpha1 L1) fails: dominant main " +
                                  scale_str(a.main) + " decays faster than t^2");
}

double A_partial(long n_max) {
    double h = 0.0, comp = 0.0;
    for (long n = 1; n <= n_max; ++n) {
        double y = 1.0 / static_cast<double>(n) - comp, t = h + y;
        comp = (t - h) - y;
        h = t;
    }
    // (N+1)log(N+1) - N log(N+2), written without the 1e7-sized cancellation
    double nd = static_cast<double>(n_max);
    double s = nd * std::log1p(-1.0 / (nd + 2.0)) + std::log(nd + 1.0);
    return euler_gamma() + s - h;
}

} // namespace

bool dominates(const LogPowerScale& a, const LogPowerScale& b) {
    return a.alpha < b.alpha || (a.alpha == b.alpha && a.p > b.p);
}

cplx eval_main_terms(const Expansion& e, double t) {
    if (!(t > 0.0) || t >= 1.0)
        throw DomainError("eval_main_terms: t must lie in (0, 1)");
    cplx v = cplx(0.0, 1.0) * e.c1 * t + cplx(e.c2 * t * t, 0.0);
    if (e.c_star != cplx{})
        v += e.c_star * std::pow(t, e.main.alpha) * std::pow(-std::log(t), e.main.p);
    return v;
}

Expansion taylor_expansion(const PhiSpec& phi, const MeasureSpec& mu, double alpha,
                           double* k_value) {
    if (!(alpha > 0.0) || alpha > 3.0)
        throw DomainError("taylor_expansion: alpha must lie in (0, 3]");
    double k = checked_moment(
        [&](double x) { return std::pow(std::abs(phi(x)), alpha) * mu.density(x); },
        "taylor_expansion: int |phi|^alpha dmu");
    if (k_value) *k_value = k;

    Expansion e;
    if (alpha >= 1.0)
        e.c1 = cplx(checked_moment([&](double x) { return phi(x) * mu.density(x); },
                                   "taylor_expansion: int phi dmu"),
                    0.0);
    if (alpha >= 2.0) {
        double m2 = checked_moment(
            [&](double x) { double p = phi(x); return p * p * mu.density(x); },
            "taylor_expansion: int phi^2 dmu");
        e.c2 = -0.5 * m2;
    }
    e.main = e.err = LogPowerScale{alpha, 0.0};
    e.has_t3_error = (e.err.alpha >= 3.0);
    return e;
}

cplx mellin_cstar(const MellinPolarData& d) {
    if (!(d.alpha > 0.0) || !(d.alpha < 3.0))
        throw DomainError("mellin_cstar: alpha must lie in (0, 3)");
    if (!(d.rho > 0.0) || !(d.rho < 1.0))
        throw DomainError("mellin_cstar: rho must lie in (0, 1)");
    if (d.alpha == 1.0) return -d.varrho / gamma(cplx(d.xi + 1.0, 0.0));
    if (d.alpha == 2.0) return 0.5 * d.varrho / gamma(cplx(d.xi + 1.0, 0.0));
    if (d.xi <= 0.0 && d.xi == std::floor(d.xi))
        throw PoleError("mellin_cstar: Gamma(xi) pole at xi = " + std::to_string(d.xi));
    return d.varrho * gamma_real(-d.alpha) / gamma_real(d.xi);
}

Expansion power_log_expansion(double a, double beta, double lambda,
                              const MeasureSpec& mu) {
    if (a == 0.0) throw DomainError("power_log_expansion: amplitude a must be nonzero");
    if (!(beta > 1.0 / 3.0))
        throw DomainError("power_log_expansion: beta must exceed 1/3");
    if (lambda < 0.0)
        throw DomainError("power_log_expansion: lambda must be nonnegative");

    const double alpha = 1.0 / beta;
    const bool resonant = (beta == 0.5 || beta == 1.0);
    const double p_main = lambda / beta + (resonant ? 1.0 : 0.0);

    double factor;
    if (beta == 1.0)      factor = -1.0 / (lambda + 1.0);
    else if (beta == 0.5) factor = 1.0 / (4.0 * lambda + 2.0);
    else                  factor = gamma_real(-alpha);

    const double sgn_a = (a > 0.0) ? 1.0 : -1.0;
    cplx phase = std::exp(cplx(0.0, -kPi * sgn_a / (2.0 * beta)));
    double magnitude =
        mu.f0 * std::pow(std::abs(a), alpha) / std::pow(beta, lambda / beta + 1.0);

    Expansion e;
    e.c_star = magnitude * factor * phase;
    e.main = LogPowerScale{alpha, p_main};
    e.err = LogPowerScale{alpha, p_main - 1.0 + kEps};
    auto phi = [a, beta, lambda](double x) {
        return a * std::pow(x, -beta) * std::pow(-std::log(x), lambda);
    };
    if (beta < 1.0)
        e.c1 = cplx(checked_moment([&](double x) { return phi(x) * mu.density(x); },
                                   "power_log_expansion: int phi dmu"),
                    0.0);
    if (beta < 0.5) {
        double m2 = checked_moment(
            [&](double x) { double p = phi(x); return p * p * mu.density(x); },
            "power_log_expansion: int phi^2 dmu");
        e.c2 = -0.5 * m2;
    }
    e.has_t3_error = (e.err.alpha >= 3.0);
    return e;
}

Expansion floor_power_expansion(double lambda) {
    if (lambda < 0.5)
        throw DomainError("floor_power_expansion: lambda must be at least 1/2");

    Expansion e;
    if (lambda == 0.5) {
        e.c_star = cplx(-1.0 / kLog2, 0.0);
        e.main = LogPowerScale{2.0, 1.0};
        e.err = LogPowerScale{2.0, kEps};
        e.c1 = cplx(floor_moment(0.5), 0.0);
    } else if (lambda == 1.0) {
        // -(it/log 2)(log t + gamma_0 - pi i/2)
        //   = (i/log 2) t |log t| + i (-(gamma_0 - pi i/2)/log 2) t
        e.c_star = cplx(0.0, 1.0 / kLog2);
        e.main = LogPowerScale{1.0, 1.0};
        e.err = LogPowerScale{2.0 - kEps, 0.0};
        e.c1 = cplx(-euler_gamma() / kLog2, 0.5 * kPi / kLog2);
    } else {
        e.c_star = -std::exp(cplx(0.0, -kPi / (2.0 * lambda))) *
                   gamma_real(1.0 - 1.0 / lambda) / kLog2;
        e.main = LogPowerScale{1.0 / lambda, 0.0};
        e.err = LogPowerScale{1.0 / lambda, -1.0 + kEps};
        if (lambda < 1.0) e.c1 = cplx(floor_moment(lambda), 0.0);
    }
    e.has_t3_error = false;
    return e;
}

Expansion add_expansions(const Expansion& e1, const Expansion& e2) {
    if (is_zero_expansion(e1)) return e2;
    if (is_zero_expansion(e2)) return e1;

    const Expansion* a = &e1;
    const Expansion* b = &e2;
    if (dominates(b->main, a->main)) std::swap(a, b);
    check_addition_hypotheses(*a, *b);

    Expansion out;
    out.c1 = a->c1 + b->c1;
    out.c2 = a->c2 + b->c2;
    out.c_star = a->c_star;
    out.main = a->main;
    if (a->main.alpha < b->main.alpha) {
        out.err = a->err;
    } else {
        double p = std::max(a->err.p,
                            std::max(b->main.p, 0.5 * (a->main.p + b->main.p)));
        if (a->main.alpha == 2.0) p = std::max(p, 0.5 * a->main.p);
        out.err = LogPowerScale{a->main.alpha, p};
    }
    out.has_t3_error = (out.err.alpha >= 3.0);
    return out;
}

cplx two_frequency_main_terms(const Expansion& e1, const Expansion& e2, double t1,
                              double t2) {
    if (t1 < 0.0 || t1 >= 1.0 || t2 < 0.0 || t2 >= 1.0)
        throw DomainError("two_frequency_main_terms: frequencies must lie in [0, 1)");

    const Expansion* a = &e1;
    const Expansion* b = &e2;
    if (dominates(b->main, a->main)) std::swap(a, b);
    check_addition_hypotheses(*a, *b);

    cplx v = 1.0 + cplx(0.0, 1.0) * (e1.c1 * t1 + e2.c1 * t2);
    // Singular term of the dominant expansion at its own frequency; a zero
    // frequency contributes nothing, so dominance passes to the live one.
    const Expansion* s = nullptr;
    double ts = 0.0;
    if (t1 > 0.0 && t2 > 0.0) {
        s = a;
        ts = (a == &e1) ? t1 : t2;
    } else if (t1 > 0.0) {
        s = &e1;
        ts = t1;
    } else if (t2 > 0.0) {
        s = &e2;
        ts = t2;
    }
    if (s && s->c_star != cplx{})
        v += s->c_star * std::pow(ts, s->main.alpha) * std::pow(-std::log(ts), s->main.p);
    return v;
}

Expansion dedekind_expansion() {
    Expansion e;
    e.c1 = cplx(0.0, kPi / kLog2); // i c1 t = -(pi/log 2) t
    e.main = LogPowerScale{1.0, 0.0};
    e.err = LogPowerScale{2.0, 2.0};
    return e;
}

std::array<double, 2> mu_vector(bool drop_zeta_constant, int branch_depth, double tol) {
    if (branch_depth < 1) throw DomainError("mu_vector: branch_depth must be positive");

    auto compute = [](bool drop, int depth, double quad_tol) -> std::array<double, 2> {
        const double cminus = euler_gamma() - std::log(8.0 * kPi) - 0.5 * kPi;
        const double cplus = euler_gamma() - std::log(8.0 * kPi) + 0.5 * kPi;
        const double per_tol = quad_tol / (2.0 * (depth + 3.0));

        // f_C(y) = y^{-1/2} (log(1/y) + C), the theta-derivative of either
        // component up to the factor 1/2 and the zeta constant.
        auto f_of = [](double c) {
            return [c](double y) { return (-std::log(y) + c) / std::sqrt(y); };
        };
        auto gk_dens = [](double y) { return 1.0 / ((1.0 + y) * kLog2); };

        // Direct part int (1/2) f_C dmu plus the Gauss-map branch series of
        // the same weight: branch k carries density 1/((k+y)(k+y+1) log 2),
        // and the branches beyond `depth` telescope to 1/((depth+1+y) log 2).
        auto halves = [&](double c) -> std::pair<double, double> {
            auto f = f_of(c);
            auto direct = integrate_adaptive(
                [&](double y) { return cplx(0.5 * f(y) * gk_dens(y), 0.0); }, 0.0,
                1.0, per_tol);
            double series = 0.0;
            for (int k = 1; k <= depth; ++k) {
                auto branch = integrate_adaptive(
                    [&, k](double y) {
                        double w = 1.0 / ((k + y) * (k + y + 1.0) * kLog2);
                        return cplx(0.5 * f(y) * w, 0.0);
                    },
                    0.0, 1.0, per_tol);
                series += branch.value.real();
            }
            auto tail = integrate_adaptive(
                [&](double y) {
                    return cplx(0.5 * f(y) / ((depth + 1.0 + y) * kLog2), 0.0);
                },
                0.0, 1.0, per_tol);
            series += tail.value.real();
            return {direct.value.real(), series};
        };

        auto [d1, s1] = halves(cminus);
        auto [d2, s2] = halves(cplus);
        double zsq = 0.0;
        if (!drop) {
            double z = zeta(cplx(0.5, 0.0)).real();
            zsq = 2.0 * z * z; // zeta(1/2)^2 once per component
        }
        // First coordinate: both components add; second: they mirror.
        return {d1 + s1 + zsq, d2 - s2};
    };

    if (!drop_zeta_constant && branch_depth == 32 && tol == 1e-10) {
        static const std::array<double, 2> cached = compute(false, 32, 1e-10);
        return cached;
    }
    return compute(drop_zeta_constant, branch_depth, tol);
}

cplx estermann_main_terms(double t1, double t2, const std::array<double, 2>& mu) {
    double norm = std::hypot(t1, t2);
    if (!(norm > 0.0) || norm >= 1.0)
        throw DomainError("estermann_main_terms: need 0 < ||t|| < 1");
    cplx v = 1.0 + cplx(0.0, 1.0) * (mu[0] * t1 + mu[1] * t2);
    for (double u2 : {1.0, -1.0}) {
        double ip = t1 + u2 * t2; // <t, (1, +-1)>
        if (ip == 0.0) continue;
        double l = std::abs(std::log(std::abs(ip)));
        v -= ip * ip * l * l * l / (3.0 * kLog2);
    }
    return v;
}

cplx estermann_main_terms(double t1, double t2) {
    return estermann_main_terms(t1, t2, mu_vector());
}

double constant_A() {
    double a1 = A_partial(1'000'000);
    double a2 = A_partial(2'000'000);
    if (std::abs(a1 - a2) > 1e-5)
        throw NoConvergence("constant_A: telescoping partial sums disagree");
    return 2.0 * a2 - a1; // cancels the 2/N term
}

cplx H_series(cplx s) {
    if (s.real() > 1.99)
        throw DomainError("H_series: Re(s) must be at most 1.99");
    cplx sum = 0.0;
    for (int n = 1; n <= kTailHead; ++n) {
        double nd = n;
        double summand = std::log1p(1.0 / (nd * (nd + 2.0))) - 1.0 / (nd * nd);
        sum += std::exp(s * std::log(nd)) * summand;
    }
    // Subtracting 1/n^2 cancels the k = 2 coefficient exactly; the remaining
    // tail is sum_{k>=3} d_k sum_{n>N} n^{s-k}, truncated where the next
    // coefficient contributes below 1e-13.
    for (int k = kTailK0 + 1; k <= kTailKmax; ++k)
        sum += kTailCoeff[k - kTailK0] * zeta_tail(cplx(k, 0.0) - s, kTailHead);
    return sum;
}

std::string expansion_to_json(const Expansion& e) {
    nlohmann::ordered_json j;
    j["c1"] = {e.c1.real(), e.c1.imag()};
    j["c2"] = e.c2;
    j["c_star"] = {e.c_star.real(), e.c_star.imag()};
    j["alpha"] = e.main.alpha;
    j["p_main"] = e.main.p;
    j["p_err"] = e.err.p;
    j["has_t3"] = e.has_t3_error;
    if (e.err.alpha != e.main.alpha) j["err_alpha"] = e.err.alpha;
    return j.dump();
}

} // namespace fal
