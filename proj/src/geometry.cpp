#include "projlab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace projlab {

bool operator==(const QPoint& a, const QPoint& b) { return a.x == b.x && a.y == b.y; }
bool operator<(const QPoint& a, const QPoint& b) {
    int c = cmp(a.x, b.x);
    return c != 0 ? c < 0 : a.y < b.y;
}

ExactDir make_exact_dir(const Z& a, const Z& b) {
    if (a == 0 && b == 0) throw std::invalid_argument("zero direction vector");
    Z g = gcd_z(a, b);
    Z x = a / g, y = b / g;
    if (x < 0 || (x == 0 && y < 0)) {
        x = -x;
        y = -y;
    }
    return ExactDir{x, y};
}

bool operator==(const ExactDir& u, const ExactDir& v) { return u.a == v.a && u.b == v.b; }
bool operator<(const ExactDir& u, const ExactDir& v) {
    int c = cmp(u.a, v.a);
    return c != 0 ? c < 0 : u.b < v.b;
}

ExactDir exact_dir(const Direction& e) {
    if (!e.tag) {
        // axis directions are the only untagged ones we accept exactly
        if (std::fabs(e.x) < kTol) return make_exact_dir(0, 1);
        if (std::fabs(e.y) < kTol) return make_exact_dir(1, 0);
        throw std::invalid_argument("direction has no rational tag");
    }
    return make_exact_dir(Z(e.tag->q), Z(e.tag->p));
}

Direction to_direction(const ExactDir& e) {
    long double a = to_ldouble(Q(e.a)), b = to_ldouble(Q(e.b));
    long double n = std::hypot(a, b);
    Direction d;
    d.x = static_cast<double>(a / n);
    d.y = static_cast<double>(b / n);
    if (e.a.fits_slong_p() && e.b.fits_slong_p() && e.a != 0) d.tag = RationalTag{e.b.get_si(), e.a.get_si()};
    return d;
}

double angle_of(const ExactDir& e) {
    return static_cast<double>(std::atan2(to_ldouble(Q(e.b)), to_ldouble(Q(e.a))));
}

Direction unit_direction(double x, double y) {
    double n = std::hypot(x, y);
    if (n == 0.0) throw std::invalid_argument("zero direction vector");
    return Direction{x / n, y / n, std::nullopt};
}

Direction direction_from_angle(double theta) { return Direction{std::cos(theta), std::sin(theta), std::nullopt}; }

Direction rational_direction(long p, long q) {
    if (q == 0) throw std::invalid_argument("vertical direction: use unit vector (0,1) directly");
    ExactDir e = make_exact_dir(Z(q), Z(p));
    Direction d = to_direction(e);
    d.tag = RationalTag{e.b.get_si(), e.a.get_si()};
    return d;
}

Direction antipodal_normal(const Direction& e) {
    Direction d = e;
    if (d.x < -kTol || (std::fabs(d.x) <= kTol && d.y < 0)) {
        d.x = -d.x;
        d.y = -d.y;
    }
    return d;
}

double project(const Point& x, const Direction& e) { return x.x * e.x + x.y * e.y; }

Q project_exact(const QPoint& x, const ExactDir& e) { return Q(e.a) * x.x + Q(e.b) * x.y; }

Rotation rotate_to(const Direction& e) {
    // columns: R(1,0) = (ey, -ex), R(0,1) = (ex, ey)
    Rotation r;
    r.m00 = e.y;
    r.m01 = e.x;
    r.m10 = -e.x;
    r.m11 = e.y;
    return r;
}

ExactDir rotate_exact(const ExactDir& e, const ExactDir& v) {
    // e = (u, w): R v = (w x + u y, -u x + w y)
    return make_exact_dir(e.b * v.a + e.a * v.b, -e.a * v.a + e.b * v.b);
}

ExactDir rotate_exact_inverse(const ExactDir& e, const ExactDir& v) {
    return make_exact_dir(e.b * v.a - e.a * v.b, e.a * v.a + e.b * v.b);
}

void QNIntervalUnion::normalize() {
    const Q& n2 = nu2;
    auto less = [&](const std::pair<QNum, QNum>& x, const std::pair<QNum, QNum>& y) {
        if (x.first.b == y.first.b) return x.first.a < y.first.a;
        return cmp_qn(x.first, y.first, n2) < 0;
    };
    std::sort(iv.begin(), iv.end(), less);
    std::vector<std::pair<QNum, QNum>> out;
    for (auto& p : iv) {
        if (!out.empty()) {
            auto& back = out.back();
            bool overlap = back.second.b == p.first.b ? p.first.a <= back.second.a
                                                      : cmp_qn(p.first, back.second, n2) <= 0;
            if (overlap) {
                bool longer = back.second.b == p.second.b ? p.second.a > back.second.a
                                                          : cmp_qn(p.second, back.second, n2) > 0;
                if (longer) back.second = p.second;
                continue;
            }
        }
        out.push_back(p);
    }
    iv.swap(out);
}

IntervalUnion project_union(const BallUnion& k, const Direction& e) {
    IntervalUnion u;
    u.iv.reserve(k.balls.size());
    for (auto& b : k.balls) {
        double c = project(b.center, e);
        u.iv.emplace_back(c - b.radius, c + b.radius);
    }
    u.normalize();
    return u;
}

IntervalUnion project_union(const SquareUnion& k, const Direction& e) {
    IntervalUnion u;
    u.iv.reserve(k.centers.size());
    double half = to_double(k.side) / 2 * (std::fabs(e.x) + std::fabs(e.y));
    for (auto& c : k.centers) {
        double t = to_double(c.x) * e.x + to_double(c.y) * e.y;
        u.iv.emplace_back(t - half, t + half);
    }
    u.normalize();
    return u;
}

BallUnion to_float(const QBallUnion& k) {
    BallUnion out;
    out.radius = to_double(k.radius);
    out.balls.reserve(k.centers.size());
    for (auto& c : k.centers) out.balls.push_back(Ball{{to_double(c.x), to_double(c.y)}, out.radius});
    return out;
}

std::vector<Point> to_float(const std::vector<QPoint>& p) {
    std::vector<Point> out;
    out.reserve(p.size());
    for (auto& c : p) out.push_back({to_double(c.x), to_double(c.y)});
    return out;
}

QNIntervalUnion project_union_exact(const QBallUnion& k, const ExactDir& e) {
    QNIntervalUnion u;
    u.nu2 = e.nu2();
    u.iv.reserve(k.centers.size());
    for (auto& c : k.centers) {
        Q s = project_exact(c, e);
        u.iv.emplace_back(QNum{s, -k.radius}, QNum{s, k.radius});
    }
    u.normalize();
    return u;
}

QIntervalUnion project_squares_exact(const SquareUnion& k, const ExactDir& e) {
    QIntervalUnion u;
    Q h = k.side / 2 * Q(abs(e.a) + abs(e.b));
    u.iv.reserve(k.centers.size());
    for (auto& c : k.centers) {
        Q s = project_exact(c, e);
        u.iv.emplace_back(s - h, s + h);
    }
    u.normalize();
    return u;
}

QNIntervalUnion to_qn(const QIntervalUnion& u, const Q& nu2) {
    QNIntervalUnion r;
    r.nu2 = nu2;
    r.iv.reserve(u.iv.size());
    for (auto& p : u.iv) r.iv.emplace_back(QNum{p.first, 0}, QNum{p.second, 0});
    return r;
}

bool Arc::contains_angle(double t) const {
    double d = std::remainder(t - angle, 2 * std::numbers::pi);
    return std::fabs(d) <= length / 2 + kTol;
}

std::vector<QPoint> grid_points(long n, const Q& spacing, const QPoint& origin) {
    std::vector<QPoint> pts;
    pts.reserve(static_cast<size_t>(n * n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) pts.push_back({origin.x + spacing * i, origin.y + spacing * j});
    return pts;
}

}  // namespace projlab
