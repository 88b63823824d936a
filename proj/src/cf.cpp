#include "fal/cf.hpp"
#include "fal/errors.hpp"

#include <cmath>
#include <numeric>

namespace fal {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw Error("Rational: intermediate exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

Rational make(i128 n, i128 d) {
    if (d == 0) throw DomainError("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    r.num = narrow(n);
    r.den = narrow(d);
    return r;
}

// n^lambda, exact in double for integral lambda and moderate n.
double pow_coeff(std::int64_t n, double lambda) {
    if (lambda == std::rint(lambda) && lambda >= 0.0 && lambda <= 40.0) {
        double r = 1.0;
        for (int k = 0; k < static_cast<int>(lambda); ++k) r *= static_cast<double>(n);
        return r;
    }
    return std::pow(static_cast<double>(n), lambda);
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num) * b.num, i128(a.den) * b.den);
}

std::string to_string(const Rational& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational gauss_map(const Rational& x) {
    if (x.num == 0) throw DomainError("gauss_map: x = 0");
    if (x.num < 0 || x.num > x.den) throw DomainError("gauss_map: x must lie in (0,1]");
    return Rational(x.den % x.num, x.num); // {q/p} = (q mod p)/p
}

RationalCF cf_expand(std::int64_t p, std::int64_t q) {
    if (p <= 0 || q <= 0) throw DomainError("cf_expand: p, q must be positive");
    if (p > q) throw DomainError("cf_expand: requires p <= q");
    std::int64_t g = std::gcd(p, q);
    p /= g;
    q /= g;
    RationalCF x;
    x.p = p;
    x.q = q;
    // Euclid on (p, q): quotients of q/p are the coefficients; the final
    // quotient is >= 2 automatically except for x = 1 = [0; 1].
    std::int64_t a = p, b = q;
    while (a > 0) {
        x.coeffs.push_back(b / a);
        std::int64_t r = b % a;
        b = a;
        a = r;
    }
    return x;
}

Rational cf_value(const std::vector<std::int64_t>& coeffs) {
    Rational v(0, 1); // backward recurrence: v <- 1/(a_j + v)
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        if (*it <= 0) throw DomainError("cf_value: coefficients must be positive");
        Rational w = Rational(*it, 1) + v;
        v = Rational(w.den, w.num);
    }
    return v;
}

double sigma_lambda(const RationalCF& x, double lambda) {
    double s = 0.0;
    for (std::int64_t a : x.coeffs) s += pow_coeff(a, lambda);
    return s;
}

double birkhoff_sum(const PhiSpec& phi, const RationalCF& x) {
    Rational pt(x.p, x.q);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.coeffs.size(); ++j) {
        if (pt.num == 0) throw DomainError("birkhoff_sum: orbit hit 0 early");
        switch (phi.family) {
            case PhiFamily::FloorPower:
                sum += pow_coeff(pt.den / pt.num, phi.lambda);
                break;
            case PhiFamily::Dedekind: {
                std::int64_t here = pt.den / pt.num;
                Rational nx = gauss_map(pt);
                std::int64_t next = nx.num == 0 ? 0 : nx.den / nx.num;
                sum += static_cast<double>(here - next);
                break;
            }
            default:
                sum += phi(pt.to_double());
        }
        pt = gauss_map(pt);
    }
    return sum;
}

Rational dedekind_sum(std::int64_t p, std::int64_t q) {
    if (q < 1 || p < 0) throw DomainError("dedekind_sum: requires q >= 1, p >= 0");
    if (std::gcd(p, q) != 1) throw DomainError("dedekind_sum: requires gcd(p,q) = 1");
    p %= q;
    // Reciprocity, unrolled:  s(p,q) = -1/4 + (p/q + q/p + 1/(pq))/12 - s(q mod p, p).
    Rational s(0, 1);
    int sign = 1;
    while (p > 0) {
        // (p/q + q/p + 1/(pq))/12 = (p^2 + q^2 + 1)/(12pq)
        Rational term = make(i128(p) * p + i128(q) * q + 1, i128(12) * p * q) -
                        Rational(1, 4);
        s = sign > 0 ? s + term : s - term;
        std::int64_t r = q % p;
        q = p;
        p = r;
        sign = -sign;
    }
    return s;
}

Rational dedekind_sum_direct(std::int64_t p, std::int64_t q) {
    if (q < 1 || p < 0) throw DomainError("dedekind_sum_direct: requires q >= 1, p >= 0");
    if (std::gcd(p, q) != 1) throw DomainError("dedekind_sum_direct: requires gcd(p,q) = 1");
    // ((k/q))((kp/q)) = (2k - q)(2(kp mod q) - q) / (4q^2); no k with q | kp.
    i128 acc = 0;
    for (std::int64_t k = 1; k < q; ++k)
        acc += i128(2 * k - q) * (2 * (k * p % q) - q);
    return make(acc, i128(4) * q * q);
}

void farey_enumerate(std::int64_t Q, const std::function<void(const RationalCF&)>& emit) {
    if (Q < 1) throw DomainError("farey_enumerate: Q >= 1 required");
    // Farey neighbors: after a/b, c/d the next term is (kc - a)/(kd - b) with
    // k = floor((Q + b)/d).  Start from 0/1, 1/Q and stop at 1/1.
    std::int64_t a = 0, b = 1, c = 1, d = Q;
    while (c <= d) {
        emit(cf_expand(c, d));
        std::int64_t k = (Q + b) / d;
        std::int64_t c2 = k * c - a, d2 = k * d - b;
        a = c;
        b = d;
        c = c2;
        d = d2;
    }
}

double gk_sample(double u) {
    if (u < 0.0 || u >= 1.0) throw DomainError("gk_sample: u must lie in [0,1)");
    return std::exp2(u) - 1.0;
}

double gk_mass(std::int64_t n) {
    if (n < 1) throw DomainError("gk_mass: n >= 1 required");
    double nn = static_cast<double>(n);
    return std::log1p(1.0 / (nn * (nn + 2.0))) / std::log(2.0);
}

double gk_cylinder_mass(std::int64_t n, std::int64_t m) {
    if (n < 1 || m < 1) throw DomainError("gk_cylinder_mass: n, m >= 1 required");
    // The cylinder is {x = 1/(n+y), y in (1/(m+1), 1/m]}; its measure is
    // log2 of the cross-ratio, arranged as log1p of a small quantity so the
    // far cells keep full relative precision.
    double nn = static_cast<double>(n), mm = static_cast<double>(m);
    double denom = mm * (mm + 1.0) * (nn + 1.0 / (mm + 1.0)) * (nn + 1.0 + 1.0 / mm);
    return std::log1p(1.0 / denom) / std::log(2.0);
}

std::string to_string(const RationalCF& x) {
    std::string s = std::to_string(x.p) + "/" + std::to_string(x.q) + ":[";
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(x.coeffs[i]);
    }
    return s + "]";
}

} // namespace fal
