#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace projlab {

using Z = mpz_class;
using Q = mpq_class;

// canonical rational num/den
Q make_q(const Z& num, const Z& den);
Q make_q(long num, long den = 1);

// exact value of a finite double
Q q_from_double(double x);
// "3/4", "0.76", "-2", "1e-3"
Q parse_q(const std::string& s);

double to_double(const Q& x);
long double to_ldouble(const Q& x);

Z floor_q(const Q& x);
Z ceil_q(const Q& x);
Z pow_z(const Z& base, unsigned long e);
Q pow_q(const Q& base, long e);
Z factorial(unsigned long n);
Z gcd_z(const Z& a, const Z& b);

// floor(sqrt(x)) for x >= 0
Z isqrt_floor_q(const Q& x);

// base^(p/q) compared with rhs, exactly: sign(lhs - base^(p/q))
// all quantities must be positive, q > 0
int cmp_with_power(const Q& lhs, const Q& base, long p, long q);

// a + b * nu where nu = sqrt(nu2), nu2 > 0 shared by the caller
struct QNum {
    Q a;
    Q b;
};

QNum qn(const Q& a, const Q& b = 0);
QNum operator+(const QNum& x, const QNum& y);
QNum operator-(const QNum& x, const QNum& y);
QNum scale(const QNum& x, const Q& s);
int sign_qn(const QNum& x, const Q& nu2);
int cmp_qn(const QNum& x, const QNum& y, const Q& nu2);
// smallest integer k with k >= x
Z ceil_qn(const QNum& x, const Q& nu2);
long double approx_qn(const QNum& x, const Q& nu2);

}  // namespace projlab
