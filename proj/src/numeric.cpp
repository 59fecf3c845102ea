#include "projlab/numeric.hpp"

#include <cmath>
#include <limits>

namespace projlab {

Q make_q(const Z& num, const Z& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Q r(num, den);
    r.canonicalize();
    return r;
}

Q make_q(long num, long den) { return make_q(Z(num), Z(den)); }

Q q_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    mpq_t t;
    mpq_init(t);
    mpq_set_d(t, x);
    Q r(t);
    mpq_clear(t);
    return r;
}

Q parse_q(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Z n(s.substr(0, slash), 10), d(s.substr(slash + 1), 10);
        return make_q(n, d);
    }
    // decimal with optional exponent, parsed exactly
    std::string mant = s;
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        exp10 = std::stol(s.substr(epos + 1));
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
        neg = mant[0] == '-';
        mant = mant.substr(1);
    }
    std::string digits;
    long frac = 0;
    bool dot = false;
    for (char c : mant) {
        if (c == '.') {
            if (dot) throw std::invalid_argument("bad rational: " + s);
            dot = true;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            if (dot) ++frac;
        } else {
            throw std::invalid_argument("bad rational: " + s);
        }
    }
    if (digits.empty()) throw std::invalid_argument("bad rational: " + s);
    Z num(digits, 10);
    long e = exp10 - frac;
    Q r = e >= 0 ? Q(num * pow_z(10, e)) : make_q(num, pow_z(10, -e));
    return neg ? Q(-r) : r;
}

double to_double(const Q& x) { return x.get_d(); }

long double to_ldouble(const Q& x) {
    // split to keep precision for huge numerators/denominators
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, x.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
    return std::ldexp(static_cast<long double>(mn) / md, static_cast<int>(en - ed));
}

Z floor_q(const Q& x) {
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Z ceil_q(const Q& x) {
    Z r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Z pow_z(const Z& base, unsigned long e) {
    Z r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Q pow_q(const Q& base, long e) {
    if (e >= 0) return make_q(pow_z(base.get_num(), e), pow_z(base.get_den(), e));
    if (base == 0) throw std::domain_error("zero to negative power");
    return make_q(pow_z(base.get_den(), -e), pow_z(base.get_num(), -e));
}

Z factorial(unsigned long n) {
    Z r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Z gcd_z(const Z& a, const Z& b) {
    Z r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Z isqrt_floor_q(const Q& x) {
    if (x < 0) throw std::domain_error("sqrt of negative");
    // floor(sqrt(n/d)) = floor(sqrt(n*d)/d) ... use isqrt(floor(x)) then adjust
    Z f = floor_q(x);
    Z r;
    mpz_sqrt(r.get_mpz_t(), f.get_mpz_t());
    while (Q((r + 1) * (r + 1)) <= x) ++r;
    while (r > 0 && Q(r * r) > x) --r;
    return r;
}

int cmp_with_power(const Q& lhs, const Q& base, long p, long q) {
    if (q <= 0) throw std::invalid_argument("cmp_with_power: q <= 0");
    if (lhs <= 0 || base <= 0) throw std::invalid_argument("cmp_with_power: nonpositive");
    // lhs^q vs base^p
    Q l = pow_q(lhs, q);
    Q r = pow_q(base, p);
    return cmp(l, r);
}

QNum qn(const Q& a, const Q& b) { return QNum{a, b}; }
QNum operator+(const QNum& x, const QNum& y) { return QNum{x.a + y.a, x.b + y.b}; }
QNum operator-(const QNum& x, const QNum& y) { return QNum{x.a - y.a, x.b - y.b}; }
QNum scale(const QNum& x, const Q& s) { return QNum{x.a * s, x.b * s}; }

int sign_qn(const QNum& x, const Q& nu2) {
    int sa = sgn(x.a), sb = sgn(x.b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with b^2 nu2
    Q lhs = x.a * x.a, rhs = x.b * x.b * nu2;
    int c = cmp(lhs, rhs);
    if (c == 0) return 0;
    return c > 0 ? sa : sb;
}

int cmp_qn(const QNum& x, const QNum& y, const Q& nu2) { return sign_qn(x - y, nu2); }

long double approx_qn(const QNum& x, const Q& nu2) {
    return to_ldouble(x.a) + to_ldouble(x.b) * std::sqrt(to_ldouble(nu2));
}

Z ceil_qn(const QNum& x, const Q& nu2) {
    if (x.b == 0) return ceil_q(x.a);
    long double ap = approx_qn(x, nu2);
    Z k;
    if (std::fabs(ap) < 1e18L) {
        k = Z(static_cast<long>(std::ceil(ap)));
    } else {
        // huge: start from exact bracket via a + floor(b*nu)
        Q bn2 = x.b * x.b * nu2;
        Z s = isqrt_floor_q(bn2);
        k = x.b > 0 ? Z(ceil_q(x.a) + s) : Z(ceil_q(x.a) - s - 1);
    }
    // adjust: want k >= x and k-1 < x
    while (sign_qn(QNum{Q(k) - x.a, -x.b}, nu2) < 0) ++k;
    while (sign_qn(QNum{Q(k - 1) - x.a, -x.b}, nu2) >= 0) --k;
    return k;
}

}  // namespace projlab
