#include "rational_util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projlab::detail {

Q simplest_rational(const Q& lo, const Q& hi) {
    if (lo > hi) throw std::invalid_argument("simplest_rational: empty interval");
    if (lo <= 0 && hi >= 0) return Q(0);
    if (hi < 0) return Q(-simplest_rational(-hi, -lo));
    Z c = ceil_q(lo);
    if (Q(c) <= hi) return Q(c);
    // lo, hi share the integer part f and neither is an integer
    Z f = floor_q(lo);
    Q r = simplest_rational(1 / Q(hi - f), 1 / Q(lo - f));
    return Q(f) + 1 / r;
}

ExactDir pythagorean_dir(const Q& t) {
    Z p = t.get_num(), q = t.get_den();
    return make_exact_dir(q * q - p * p, 2 * p * q);
}

ExactDir pythagorean_near(long double theta, long double tol) {
    long double lo = std::tan((theta - tol) / 2), hi = std::tan((theta + tol) / 2);
    return pythagorean_dir(simplest_rational(q_from_double(static_cast<double>(lo)),
                                             q_from_double(static_cast<double>(hi))));
}

Z exact_sqrt(const Z& n) {
    Z r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r != n) throw std::invalid_argument("direction is not Pythagorean");
    return r;
}

long double angle_ld(const ExactDir& e) { return std::atan2(to_ldouble(Q(e.b)), to_ldouble(Q(e.a))); }

long double angular_gap(long double a, long double b) {
    const long double pi = 3.141592653589793238462643383279502884L;
    long double d = std::fmod(a - b, pi);
    if (d < 0) d += pi;
    return std::min(d, pi - d);
}

}  // namespace projlab::detail
