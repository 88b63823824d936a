// fal: batch front end for the Fourier-asymptotics library.
//   verify    – sweep an observable family, compare oracle vs expansion,
//               fit the residual orders, exit 1 if the slope drifts
//   fit       – refit the residual orders of a saved sweep report
//   simulate  – Monte-Carlo i.i.d. sum checks / the Dedekind-sum experiment
//   constants – print the named constants of the expansion laws
// Exit codes: 0 success, 1 quantitative failure, 2 usage/config error.

#include <CLI11.hpp>

#include "fal/asym.hpp"
#include "fal/errors.hpp"
#include "fal/fourier.hpp"
#include "fal/io.hpp"
#include "fal/limitlab.hpp"
#include "fal/specfun.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fal;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2 = 0.69314718055994530942;
constexpr double kCatalan = 0.915965594177219015054603514932;
constexpr double kSlopeBand = 0.15;

struct FamilyArgs {
    std::string family = "floor";
    double a = 1.0;
    double beta = 0.5;
    double lambda = 1.0;
    std::string measure = "gauss-kuzmin";
};

void add_family_flags(CLI::App* cmd, FamilyArgs& f) {
    cmd->add_option("--family", f.family,
                    "floor | powerlog | dedekind | estermann")
        ->capture_default_str();
    cmd->add_option("--lambda", f.lambda,
                    "floor exponent / powerlog log power");
    cmd->add_option("-a,--amplitude", f.a, "powerlog amplitude");
    cmd->add_option("--beta", f.beta, "powerlog singularity exponent");
    cmd->add_option("--measure", f.measure,
                    "gauss-kuzmin | lebesgue (powerlog only)");
}

MeasureSpec make_measure(const std::string& name) {
    if (name == "gauss-kuzmin" || name == "gk")
        return MeasureSpec::gauss_kuzmin();
    if (name == "lebesgue")
        return MeasureSpec::lebesgue();
    throw DomainError("unknown measure '" + name + "'");
}

PhiSpec make_phi(const FamilyArgs& f) {
    if (f.family == "floor")
        return PhiSpec::floor_power(f.lambda);
    if (f.family == "powerlog")
        return PhiSpec::power_log(f.a, f.beta, f.lambda);
    if (f.family == "dedekind")
        return PhiSpec::dedekind();
    throw DomainError("unknown family '" + f.family +
                      "' (expected floor | powerlog | dedekind)");
}

// Oracle/prediction pair swept over the grid, plus the recorded error
// exponent the fitted slope is held against.
struct SweepSpec {
    std::function<cplx(double)> numeric;
    std::function<cplx(double)> predicted;
    double err_alpha = 0.0;
    std::string label;
};

SweepSpec make_sweep(const FamilyArgs& f, double tol) {
    SweepSpec s;
    if (f.family != "floor" && f.family != "powerlog" &&
        f.family != "dedekind" && f.family != "estermann")
        throw DomainError("unknown family '" + f.family +
                          "' (expected floor | powerlog | dedekind | estermann)");
    if (f.family == "estermann") {
        // diagonal two-frequency sweep t1 = t2 = t
        s.numeric = [tol](double t) {
            return estermann_cf_numeric(t, t, tol) - cplx(1.0, 0.0);
        };
        s.predicted = [](double t) {
            return estermann_main_terms(t, t) - cplx(1.0, 0.0);
        };
        s.err_alpha = 2.0;
        s.label = "estermann";
        return s;
    }
    PhiSpec phi = make_phi(f);
    MeasureSpec mu = f.family == "powerlog" ? make_measure(f.measure)
                                            : MeasureSpec::gauss_kuzmin();
    Expansion e;
    if (f.family == "floor") {
        e = floor_power_expansion(f.lambda);
        s.label = "floor lambda=" + std::to_string(f.lambda);
    } else if (f.family == "powerlog") {
        e = power_log_expansion(f.a, f.beta, f.lambda, mu);
        s.label = "powerlog a=" + std::to_string(f.a) +
                  " beta=" + std::to_string(f.beta) +
                  " lambda=" + std::to_string(f.lambda);
    } else {
        e = dedekind_expansion();
        s.label = "dedekind";
    }
    s.numeric = [phi, mu, tol](double t) {
        return fourier_integral_numeric(phi, mu, t, tol).value;
    };
    s.predicted = [e](double t) { return eval_main_terms(e, t); };
    s.err_alpha = e.err.alpha;
    return s;
}

std::vector<double> make_grid(double t_min, double t_max, int ppd) {
    if (!(t_min > 0.0 && t_min < t_max && t_max < 1.0))
        throw DomainError("verify: need 0 < t-min < t-max < 1");
    if (ppd < 1)
        throw DomainError("verify: points-per-decade must be >= 1");
    std::vector<double> g;
    for (int i = 0;; ++i) {
        double t = t_max * std::pow(10.0, -static_cast<double>(i) / ppd);
        if (t < t_min * (1.0 - 1e-12))
            break;
        g.push_back(t);
    }
    if (g.size() < 3)
        throw DomainError("verify: grid has fewer than three points");
    return g;
}

void write_to(const std::string& path,
              const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw DomainError("cannot open '" + path + "' for writing");
    write(f);
}

int run_verify(const FamilyArgs& fam, double t_min, double t_max, int ppd,
               double tol, const std::string& out, const std::string& format) {
    SweepSpec spec = make_sweep(fam, tol);
    std::vector<double> grid = make_grid(t_min, t_max, ppd);

    SweepReport rep;
    rep.t_grid = grid;
    rep.numeric.assign(grid.size(), cplx{});
    rep.predicted.assign(grid.size(), cplx{});
    rep.residuals.assign(grid.size(), 0.0);
    std::exception_ptr err;
    const std::int64_t n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            const std::size_t k = static_cast<std::size_t>(i);
            rep.numeric[k] = spec.numeric(grid[k]);
            rep.predicted[k] = spec.predicted(grid[k]);
            rep.residuals[k] = std::abs(rep.numeric[k] - rep.predicted[k]);
        } catch (...) {
#pragma omp critical
            if (!err)
                err = std::current_exception();
        }
    }
    if (err)
        std::rethrow_exception(err);

    FittedOrders fo = fit_residual_orders(rep.t_grid, rep.residuals);
    rep.fitted_slope = fo.alpha;
    rep.fitted_log_exponent = fo.p;

    write_to(out, [&](std::ostream& os) {
        format == "json" ? write_sweep_json(rep, os) : write_sweep_csv(rep, os);
    });

    const bool ok = std::abs(fo.alpha - spec.err_alpha) <= kSlopeBand;
    std::cerr << "verify " << spec.label << ": fitted residual orders alpha = "
              << fo.alpha << ", p = " << fo.p << "; recorded error exponent "
              << spec.err_alpha << (ok ? " -- within" : " -- OUTSIDE")
              << " the +-" << kSlopeBand << " band\n";
    if (fam.family == "dedekind") {
        const double c = rep.numeric.back().real() / grid.back();
        std::cerr << "verify dedekind: Re I(t)/t = " << format_g17(c)
                  << " at t = " << format_g17(grid.back())
                  << " (limit -pi/log2 = " << format_g17(-kPi / kLog2)
                  << ")\n";
    }
    return ok ? 0 : 1;
}

int run_fit(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw DomainError("cannot open '" + path + "'");
    SweepReport rep = read_sweep_csv(f);
    FittedOrders fo = fit_residual_orders(rep.t_grid, rep.residuals);
    std::cout << "alpha_fit = " << format_g17(fo.alpha) << "\n"
              << "p_fit = " << format_g17(fo.p) << "\n";
    return 0;
}

int run_simulate(bool iid, bool dedekind, const FamilyArgs& fam, int r,
                 long long n, double t, unsigned long long seed, long long q,
                 double ks_tol, const std::string& out,
                 const std::string& format) {
    if (iid == dedekind)
        throw DomainError("simulate: choose exactly one of --iid / --dedekind");
    auto write_samples = [&](const SampleSet& s) {
        if (out.empty())
            return;
        write_to(out, [&](std::ostream& os) {
            format == "json" ? write_samples_json(s, os)
                             : write_samples_csv(s, os);
        });
    };
    if (iid) {
        if (n < 1)
            throw DomainError("simulate: --N must be positive");
        const PhiSpec phi = make_phi(fam);
        const std::size_t nn = static_cast<std::size_t>(n);
        const double check = iid_sum_cf_check(phi, r, t, nn, seed);
        const double tol = 5.0 / std::sqrt(static_cast<double>(n));
        write_samples(sample_iid_gk_sums(phi, r, nn, seed));
        std::cout << "iid-sum check: family=" << fam.family << " r=" << r
                  << " t=" << format_g17(t) << " N=" << n << " seed=" << seed
                  << " |ecf - (1+I)^r| = " << format_g17(check)
                  << " (tolerance " << format_g17(tol) << ")\n";
        return check <= tol ? 0 : 1;
    }
    SampleSet s = dedekind_experiment(q);
    const double ks = ks_distance(s, cauchy_cdf);
    write_samples(s);
    std::cout << "dedekind experiment: Q=" << q << " samples="
              << s.values.size() << " KS vs Cauchy = " << format_g17(ks)
              << " (tolerance " << format_g17(ks_tol) << ")\n";
    return ks <= ks_tol ? 0 : 1;
}

int run_constants() {
    auto line = [](const char* name, double v, const char* role) {
        std::printf("%-20s % .17g  %s\n", name, v, role);
    };
    line("gamma0", euler_gamma(),
         "Euler-Mascheroni constant; enters the floor lambda=1 linear term");
    line("pi_over_log2", kPi / kLog2,
         "magnitude of the Dedekind pair linear coefficient");
    line("minus_1_over_3log2", -1.0 / (3.0 * kLog2),
         "singular coefficient of x^{-1/2} log(1/x) over Gauss-Kuzmin");
    line("A", constant_A(),
         "telescoping constant of the floor-phase symbol (computed, -> -1)");
    line("catalan", kCatalan,
         "Catalan constant; linear moment of the floor lambda=1/2 phase");
    line("zeta_half", zeta(cplx(0.5, 0.0)).real(),
         "zeta(1/2); its square shifts the Estermann linear coefficient");
    return 0;
}

void apply_threads(int threads) {
    const char* env = std::getenv("FAL_THREADS");
    int n = 0;
    if (env != nullptr && std::atoi(env) >= 1)
        n = std::atoi(env); // env overrides the flag
    else if (threads >= 1) {
        n = threads;
        setenv("FAL_THREADS", std::to_string(threads).c_str(), 1);
    }
#ifdef _OPENMP
    if (n >= 1)
        omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-asymptotics laboratory"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (FAL_THREADS env overrides)");

    FamilyArgs vfam;
    double t_min = 1e-6, t_max = 1e-2, tol = 1e-10;
    int ppd = 4;
    std::string out, format = "csv";
    CLI::App* verify = app.add_subcommand(
        "verify", "sweep oracle vs expansion, fit residual orders");
    add_family_flags(verify, vfam);
    verify->add_option("--t-min", t_min, "")->capture_default_str();
    verify->add_option("--t-max", t_max, "")->capture_default_str();
    verify->add_option("--points-per-decade", ppd, "")->capture_default_str();
    verify->add_option("--tol", tol, "oracle tolerance")->capture_default_str();
    verify->add_option("-o,--output", out, "output path (default stdout)");
    verify->add_option("--format", format, "csv | json")->capture_default_str();

    std::string fit_path;
    CLI::App* fit = app.add_subcommand(
        "fit", "refit residual orders of a saved sweep report");
    fit->add_option("report", fit_path, "sweep CSV written by verify")
        ->required();

    FamilyArgs sfam;
    bool iid = false, dedekind = false;
    int r = 1;
    long long n_samples = 100000, q = 100;
    double t_sim = 0.005, ks_tol = 0.05;
    unsigned long long seed = 1;
    std::string sim_out, sim_format = "csv";
    CLI::App* sim = app.add_subcommand(
        "simulate", "Monte-Carlo iid sums / Dedekind-sum experiment");
    add_family_flags(sim, sfam);
    sim->add_flag("--iid", iid, "iid Gauss-Kuzmin sum CF check");
    sim->add_flag("--dedekind", dedekind, "Dedekind-sum Cauchy experiment");
    sim->add_option("--r", r, "summands per sample")->capture_default_str();
    sim->add_option("--N", n_samples, "sample count")->capture_default_str();
    sim->add_option("--t", t_sim, "CF frequency")->capture_default_str();
    sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sim->add_option("--Q", q, "denominator bound")->capture_default_str();
    sim->add_option("--ks-tol", ks_tol, "KS acceptance tolerance")
        ->capture_default_str();
    sim->add_option("-o,--output", sim_out, "sample output path");
    sim->add_option("--format", sim_format, "csv | json")
        ->capture_default_str();

    CLI::App* consts = app.add_subcommand(
        "constants", "print the named constants of the expansion laws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_threads(threads);
        if (verify->parsed())
            return run_verify(vfam, t_min, t_max, ppd, tol, out, format);
        if (fit->parsed())
            return run_fit(fit_path);
        if (sim->parsed())
            return run_simulate(iid, dedekind, sfam, r, n_samples, t_sim, seed,
                                q, ks_tol, sim_out, sim_format);
        if (consts->parsed())
            return run_constants();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
