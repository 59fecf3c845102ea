#pragma once

#include "projlab/geometry.hpp"

namespace projlab::detail {

// rational with the smallest denominator (then numerator) in [lo, hi]
Q simplest_rational(const Q& lo, const Q& hi);

// unit-length-rational direction ((1-t^2), 2t)/(1+t^2) at angle 2 atan t
ExactDir pythagorean_dir(const Q& t);
// Pythagorean direction within tol of the angle theta in (-pi/2, pi/2]
ExactDir pythagorean_near(long double theta, long double tol);
// integer square root, throws unless exact
Z exact_sqrt(const Z& n);
// angle of the projective direction in (-pi/2, pi/2]
long double angle_ld(const ExactDir& e);
// distance between projective angles, in [0, pi/2]
long double angular_gap(long double a, long double b);

}  // namespace projlab::detail
