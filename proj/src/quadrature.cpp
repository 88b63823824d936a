#include "fal/quadrature.hpp"
#include "fal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fal {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Tanh-sinh node: u -> x = m + r tanh(v), v = (pi/2) sinh(u). Nodes are
// addressed by their distance to the nearest endpoint, which keeps full
// precision where the integrand is singular. (Right-endpoint singularities
// are still limited to ~sqrt(eps) accuracy because the integrand receives
// x itself, not the complement b - x; the library's own singular integrands
// all sit at the left endpoint.)
struct TsNode {
    double offset; // distance from the endpoint (0 => underflowed, skip)
    double weight; // r * (pi/2) cosh(u) / cosh(v)^2
};

TsNode ts_node(double u, double r) {
    double v = 0.5 * kPi * std::sinh(u);
    if (v > 350.0) return {0.0, 0.0}; // exp(2v) overflows; weight ~ e^{-2v}
    double e2v = std::exp(2.0 * v);
    double offset = 2.0 * r / (e2v + 1.0);
    double sech = 2.0 / (std::exp(v) + std::exp(-v));
    double weight = r * 0.5 * kPi * std::cosh(u) * sech * sech;
    return {offset, weight};
}

constexpr double kUmax = 6.5;
constexpr int kMaxLevel = 7;

struct Panel {
    double a, b;
    cplx value;
    double err;
    bool operator<(const Panel& o) const {
        return err != o.err ? err < o.err : a < o.a; // worst panel on top
    }
};

class TsIntegrator {
  public:
    TsIntegrator(const std::function<cplx(double)>& f, std::int64_t budget)
        : f_(f), budget_(budget) {}

    // Run the tanh-sinh level cascade on one panel; stop early once the
    // inter-level difference drops below `target`.
    Panel run(double a, double b, double target) {
        double r = 0.5 * (b - a);
        double h = 0.5;
        int n0 = static_cast<int>(kUmax / h);
        charge(2 * n0 + 1);
        cplx sum = 0.0;
        for (int k = -n0; k <= n0; ++k) sum += sample(a, b, r, k * h);
        cplx integral = h * sum;
        double diff = std::abs(integral);
        for (int level = 1; level <= kMaxLevel; ++level) {
            h *= 0.5;
            int n = static_cast<int>(kUmax / h);
            if (n % 2 == 0) --n; // refinement adds the odd multiples of h
            charge(n + 1);
            cplx odd = 0.0;
            for (int k = -n; k <= n; k += 2) odd += sample(a, b, r, k * h);
            cplx refined = 0.5 * integral + h * odd;
            diff = std::abs(refined - integral);
            integral = refined;
            if (level >= 2 && diff <= std::max(target, 1e-16 * std::abs(integral)))
                break;
        }
        return {a, b, integral, diff};
    }

    std::int64_t evaluations() const { return used_; }

  private:
    void charge(std::int64_t n) {
        used_ += n;
        if (used_ > budget_)
            throw NoConvergence("integrate_adaptive: evaluation budget exhausted");
    }

    cplx sample(double a, double b, double r, double u) {
        TsNode n = ts_node(std::abs(u), r);
        if (n.offset == 0.0) return 0.0; // double-exponentially small weight
        double x = (u >= 0.0) ? b - n.offset : a + n.offset;
        cplx fx = f_(x);
        if (!std::isfinite(fx.real()) || !std::isfinite(fx.imag()))
            return 0.0; // integrable endpoint blow-up: the weight wins
        return n.weight * fx;
    }

    const std::function<cplx(double)>& f_;
    std::int64_t budget_;
    std::int64_t used_ = 0;
};

} // namespace

QuadResult integrate_adaptive(const std::function<cplx(double)>& f, double a,
                              double b, double tol, std::int64_t budget) {
    if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");
    if (!(tol > 0.0)) throw DomainError("integrate_adaptive: tol must be positive");

    TsIntegrator ts(f, budget);
    double length = b - a;
    // Globally adaptive bisection: always split the panel with the largest
    // error estimate until the total meets the tolerance.
    std::priority_queue<Panel> queue;
    queue.push(ts.run(a, b, 0.5 * tol));
    std::vector<Panel> done; // panels too short to split further
    double done_err = 0.0;

    double queue_err = queue.top().err;

    while (!queue.empty() && done_err + queue_err > tol) {
        Panel worst = queue.top();
        queue.pop();
        queue_err -= worst.err;
        double m = 0.5 * (worst.a + worst.b);
        double min_len = 50.0 * 1e-16 * std::max({std::abs(a), std::abs(b), 1.0});
        if (m - worst.a < min_len) {
            done.push_back(worst); // cannot resolve further in double
            done_err += worst.err;
            continue;
        }
        double child_target = 0.25 * tol * (worst.b - worst.a) / length;
        Panel l = ts.run(worst.a, m, child_target);
        Panel r = ts.run(m, worst.b, child_target);
        queue.push(l);
        queue.push(r);
        queue_err += l.err + r.err;
    }
    if (queue.empty() && done_err > tol)
        throw NoConvergence("integrate_adaptive: tolerance unreachable in double precision");

    // Re-sum in interval order for a reproducible, stable total.
    std::vector<Panel> all = std::move(done);
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadResult res;
    for (const Panel& p : all) {
        res.value += p.value;
        res.error_estimate += p.err;
    }
    res.evaluations = ts.evaluations();
    return res;
}

QuadResult oscillatory_tail_result(const std::function<cplx(cplx)>& w, double Y0,
                                   int sign, double tol) {
    if (Y0 < 0.0) throw DomainError("oscillatory_tail: Y0 must be >= 0");
    if (sign != 1 && sign != -1) throw DomainError("oscillatory_tail: sign must be +-1");
    double sg = static_cast<double>(sign);
    // The ray point is Y0 + i*sign*s. Keeping the e^{-s} factor inside the
    // integrand (rather than substituting it away) leaves an analytic,
    // exponentially decaying integrand with the near-singular region of w at
    // the left endpoint, where the tanh-sinh nodes carry full precision.
    // Truncation at s = 45 leaves a remainder below 3e-20 sup|w|.
    auto integrand = [&](double s) -> cplx {
        cplx val = std::exp(-s) * w(cplx(Y0, sg * s));
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw DomainError("oscillatory_tail: w non-finite on the rotated ray");
        return val;
    };
    QuadResult q = integrate_adaptive(integrand, 0.0, 45.0, tol);
    cplx phase = cplx(0.0, sg) * std::exp(cplx(0.0, sg * Y0));
    q.value *= phase;
    return q;
}

cplx oscillatory_tail(const std::function<cplx(cplx)>& w, double Y0, int sign,
                      double tol) {
    return oscillatory_tail_result(w, Y0, sign, tol).value;
}

} // namespace fal
