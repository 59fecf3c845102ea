#pragma once

#include "projlab/numeric.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace projlab {

inline constexpr double kTol = 1e-12;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct QPoint {
    Q x;
    Q y;
};

bool operator==(const QPoint& a, const QPoint& b);
bool operator<(const QPoint& a, const QPoint& b);

struct RationalTag {
    long p = 0;
    long q = 1;
};

// unit vector; tag means e = c(1, p/q)
struct Direction {
    double x = 1.0;
    double y = 0.0;
    std::optional<RationalTag> tag;
};

// projective integer direction (a,b), primitive, first nonzero coordinate positive.
// Projections are stored as the surrogate a*x + b*y = |(a,b)| * (x.e)
struct ExactDir {
    Z a;
    Z b;
    Q nu2() const { return Q(a * a + b * b); }
};

ExactDir make_exact_dir(const Z& a, const Z& b);
bool operator==(const ExactDir& u, const ExactDir& v);
bool operator<(const ExactDir& u, const ExactDir& v);
ExactDir exact_dir(const Direction& e);
Direction to_direction(const ExactDir& e);
double angle_of(const ExactDir& e);

Direction unit_direction(double x, double y);
Direction direction_from_angle(double theta);
Direction rational_direction(long p, long q);
// first nonzero coordinate positive
Direction antipodal_normal(const Direction& e);

double project(const Point& x, const Direction& e);
Q project_exact(const QPoint& x, const ExactDir& e);

struct Rotation {
    double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    Point apply(const Point& p) const { return {m00 * p.x + m01 * p.y, m10 * p.x + m11 * p.y}; }
};

// R with R(0,1) = e, orientation preserving
Rotation rotate_to(const Direction& e);
// integer analogues, up to a positive scalar
ExactDir rotate_exact(const ExactDir& e, const ExactDir& v);
ExactDir rotate_exact_inverse(const ExactDir& e, const ExactDir& v);

struct Ball {
    Point center;
    double radius = 0.0;
};

struct BallUnion {
    std::vector<Ball> balls;
    double radius = 0.0;
};

// generations built by the constructions: common radius, exact centers
struct QBallUnion {
    std::vector<QPoint> centers;
    Q radius;
};

// axis-parallel closed squares of common side
struct SquareUnion {
    std::vector<QPoint> centers;
    Q side;
};

template <class T>
struct BasicIntervalUnion {
    std::vector<std::pair<T, T>> iv;

    void normalize() {
        std::sort(iv.begin(), iv.end());
        std::vector<std::pair<T, T>> out;
        for (auto& p : iv) {
            if (!out.empty() && p.first <= out.back().second) {
                if (p.second > out.back().second) out.back().second = p.second;
            } else {
                out.push_back(p);
            }
        }
        iv.swap(out);
    }
    T total_length() const {
        T s = 0;
        for (auto& p : iv) s += p.second - p.first;
        return s;
    }
    bool empty() const { return iv.empty(); }
};

using IntervalUnion = BasicIntervalUnion<double>;
using QIntervalUnion = BasicIntervalUnion<Q>;

// intervals with endpoints in Q(nu), nu = sqrt(nu2)
struct QNIntervalUnion {
    Q nu2 = 1;
    std::vector<std::pair<QNum, QNum>> iv;
    void normalize();
};

IntervalUnion project_union(const BallUnion& k, const Direction& e);
IntervalUnion project_union(const SquareUnion& k, const Direction& e);
QNIntervalUnion project_union_exact(const QBallUnion& k, const ExactDir& e);
QIntervalUnion project_squares_exact(const SquareUnion& k, const ExactDir& e);
QNIntervalUnion to_qn(const QIntervalUnion& u, const Q& nu2);

struct Arc {
    double angle = 0.0;  // midpoint angle
    double length = 0.0;
    Direction midpoint() const { return direction_from_angle(angle); }
    bool contains_angle(double t) const;
};

// rounded copies for float sweeps
BallUnion to_float(const QBallUnion& k);
std::vector<Point> to_float(const std::vector<QPoint>& p);

std::vector<QPoint> grid_points(long n, const Q& spacing = 1, const QPoint& origin = {1, 1});

}  // namespace projlab
