#pragma once

#include "fal/fourier.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fal {

// Exact rational p/q over int64, normalized (q > 0, gcd = 1); arithmetic goes
// through __int128 and throws on anything that no longer fits.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d); // normalizes

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

Rational operator+(const Rational&, const Rational&);
Rational operator-(const Rational&, const Rational&);
Rational operator*(const Rational&, const Rational&);
std::string to_string(const Rational&);

// A reduced rational in (0,1] together with its canonical continued fraction
// [0; a_1, ..., a_r], a_r >= 2 — except x = 1 = [0; 1], the sole boundary case.
struct RationalCF {
    std::int64_t p = 1;
    std::int64_t q = 1;
    std::vector<std::int64_t> coeffs;
};

// Gauss map T(x) = {1/x} on an exact rational in (0,1]; T(p/q) = (q mod p)/p.
Rational gauss_map(const Rational& x);

// Canonical continued-fraction expansion of p/q via the Euclidean algorithm
// (the gcd is divided out first).
RationalCF cf_expand(std::int64_t p, std::int64_t q);

// Exact value of [0; a_1, ..., a_r] in integer arithmetic.
Rational cf_value(const std::vector<std::int64_t>& coeffs);

// Sigma_lambda(x) = sum a_j^lambda over the continued-fraction coefficients;
// exact integer arithmetic (in double) when lambda is integral.
double sigma_lambda(const RationalCF& x, double lambda);

// Birkhoff sum  sum_{j=0}^{r-1} phi(T^j x)  along the exact rational orbit,
// which terminates at 0 after exactly r steps.  Floor-type families are
// evaluated in integer arithmetic; floor(1/0) at the orbit's end (Dedekind
// family only) is taken as 0, matching the finite-orbit telescoping.
double birkhoff_sum(const PhiSpec& phi, const RationalCF& x);

// Dedekind sum s(p,q) = sum_{k=1}^{q-1} ((k/q))((kp/q)), exact, via the
// reciprocity recursion in O(log q).  Requires gcd(p,q) = 1.
Rational dedekind_sum(std::int64_t p, std::int64_t q);

// Same value straight from the definition, O(q); the recursion's test oracle.
Rational dedekind_sum_direct(std::int64_t p, std::int64_t q);

// Every reduced p/q in (0,1] with q <= Q, in increasing order, via the
// Stern-Brocot / Farey neighbor recurrence.  Emits sum_{q<=Q} phi_Euler(q)
// fractions.
void farey_enumerate(std::int64_t Q, const std::function<void(const RationalCF&)>& emit);

// Gauss-Kuzmin measure dmu = dx/((1+x) log 2): inverse CDF and level-set
// masses mu({floor(1/x) = n}) = mu((1/(n+1), 1/n]).
double gk_sample(double u);     // 2^u - 1, u in [0,1)
double gk_mass(std::int64_t n); // log(1 + 1/(n(n+2))) / log 2

// Mass of the depth-2 cylinder {a_1 = n, a_2 = m}:
// log(1 + 1/(m(m+1)(n + 1/(m+1))(n + 1 + 1/m))) / log 2.
double gk_cylinder_mass(std::int64_t n, std::int64_t m);

// "p/q:[a1,...,ar]" — the CSV field format for continued fractions.
std::string to_string(const RationalCF& x);

} // namespace fal
