#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace projlab;

TEST_CASE("project: axis, diagonal and rational tags") {
    CHECK(project({3, 4}, Direction{1, 0, {}}) == doctest::Approx(3));
    CHECK(project({1, 1}, rational_direction(1, 1)) == doctest::Approx(std::sqrt(2.0)));
    // oracle: (2,5).(2,1)/sqrt5
    double oracle = (2.0 * 2 + 5.0 * 1) / std::sqrt(5.0);
    CHECK(project({2, 5}, rational_direction(1, 2)) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(oracle == doctest::Approx(9 / std::sqrt(5.0)));
    // exact surrogate: q x + p y
    CHECK(project_exact({Q(2), Q(5)}, exact_dir(rational_direction(1, 2))) == Q(9));
}

TEST_CASE("rational_direction normal form") {
    auto d0 = rational_direction(0, 1);
    CHECK(d0.x == doctest::Approx(1));
    CHECK(d0.y == doctest::Approx(0));
    auto d1 = rational_direction(1, 1);
    CHECK(d1.x == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(d1.y == doctest::Approx(1 / std::sqrt(2.0)));
    auto d2 = rational_direction(1, 2);
    CHECK(d2.x == doctest::Approx(2 / std::sqrt(5.0)));
    CHECK(d2.y == doctest::Approx(1 / std::sqrt(5.0)));
    // gcd reduction and antipodal identification
    auto a = rational_direction(2, 4), b = rational_direction(-1, -2);
    CHECK(a.tag->p == 1);
    CHECK(a.tag->q == 2);
    CHECK(b.tag->p == 1);
    CHECK(b.tag->q == 2);
    CHECK(exact_dir(rational_direction(-3, 5)) == make_exact_dir(5, -3));
    CHECK_THROWS_WITH(rational_direction(1, 0), "vertical direction: use unit vector (0,1) directly");
}

TEST_CASE("rotate_to sends (0,1) to e") {
    auto id = rotate_to(Direction{0, 1, {}});
    CHECK(id.apply({0.3, -0.7}).x == doctest::Approx(0.3));
    CHECK(id.apply({0.3, -0.7}).y == doctest::Approx(-0.7));
    auto q = rotate_to(Direction{1, 0, {}});
    CHECK(q.apply({0, 1}).x == doctest::Approx(1));
    CHECK(q.apply({0, 1}).y == doctest::Approx(0));
    CHECK(q.apply({1, 0}).x == doctest::Approx(0));
    CHECK(q.apply({1, 0}).y == doctest::Approx(-1));
    double h = 1 / std::sqrt(2.0);
    auto r = rotate_to(Direction{h, h, {}});
    CHECK(r.apply({1, 0}).x == doctest::Approx(h));
    CHECK(r.apply({1, 0}).y == doctest::Approx(-h));
    // orientation preserving
    CHECK(r.m00 * r.m11 - r.m01 * r.m10 == doctest::Approx(1));
}

TEST_CASE("rotate_exact agrees with the float rotation") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> u(-9, 9);
    for (int it = 0; it < 200; ++it) {
        int a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if ((a == 0 && b == 0) || (c == 0 && d == 0)) continue;
        ExactDir e = make_exact_dir(a, b), v = make_exact_dir(c, d);
        Direction ef = to_direction(e), vf = to_direction(v);
        Point p = rotate_to(ef).apply({vf.x, vf.y});
        Direction got = to_direction(rotate_exact(e, v));
        Direction want = antipodal_normal(unit_direction(p.x, p.y));
        CHECK(got.x == doctest::Approx(want.x));
        CHECK(got.y == doctest::Approx(want.y));
        CHECK(rotate_exact_inverse(e, rotate_exact(e, v)) == v);
    }
}

TEST_CASE("project_union") {
    BallUnion one{{Ball{{0, 0}, 0.5}}, 0.5};
    auto u = project_union(one, direction_from_angle(0.37));
    REQUIRE(u.iv.size() == 1);
    CHECK(u.iv[0].first == doctest::Approx(-0.5));
    CHECK(u.iv[0].second == doctest::Approx(0.5));
    BallUnion two{{Ball{{0, 0}, 0.1}, Ball{{1, 0}, 0.1}}, 0.1};
    auto v = project_union(two, Direction{0, 1, {}});
    REQUIRE(v.iv.size() == 1);
    CHECK(v.iv[0].first == doctest::Approx(-0.1));
    CHECK(v.iv[0].second == doctest::Approx(0.1));
    auto w = project_union(two, Direction{1, 0, {}});
    REQUIRE(w.iv.size() == 2);
    CHECK(w.iv[1].first == doctest::Approx(0.9));
    CHECK(w.iv[1].second == doctest::Approx(1.1));
}

TEST_CASE("property: projection commutes with homotheties, exactly") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> u(-20, 20);
    for (int it = 0; it < 300; ++it) {
        QPoint x{make_q(u(rng), 7), make_q(u(rng), 3)}, v{make_q(u(rng), 5), make_q(u(rng), 2)};
        Q r = make_q(u(rng), 11);
        int a = u(rng), b = u(rng);
        if (a == 0 && b == 0) continue;
        ExactDir e = make_exact_dir(a, b);
        QPoint hx{r * x.x + v.x, r * x.y + v.y};
        CHECK(project_exact(hx, e) == r * project_exact(x, e) + project_exact(v, e));
    }
}

TEST_CASE("property: project_union output is sorted, disjoint, length bounded") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int it = 0; it < 200; ++it) {
        BallUnion k;
        k.radius = 0.01 + 0.1 * (u(rng) + 1);
        int n = 1 + it % 17;
        for (int i = 0; i < n; ++i) k.balls.push_back(Ball{{u(rng), u(rng)}, k.radius});
        auto iv = project_union(k, direction_from_angle(3 * u(rng))).iv;
        for (std::size_t i = 1; i < iv.size(); ++i) CHECK(iv[i - 1].second < iv[i].first);
        double len = 0;
        for (auto& [a, b] : iv) len += b - a;
        CHECK(len <= 2 * k.radius * n + 1e-12);
    }
}

TEST_CASE("property: rotations preserve distances and antipodal tags agree") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int it = 0; it < 100; ++it) {
        auto r = rotate_to(direction_from_angle(4 * u(rng)));
        Point p{u(rng), u(rng)}, q{u(rng), u(rng)};
        Point rp = r.apply(p), rq = r.apply(q);
        CHECK(std::hypot(rp.x - rq.x, rp.y - rq.y) == doctest::Approx(std::hypot(p.x - q.x, p.y - q.y)));
    }
    for (long p = -6; p <= 6; ++p)
        for (long q = -6; q <= 6; ++q) {
            if (q == 0) continue;
            auto a = rational_direction(p, q), b = rational_direction(-p, -q);
            CHECK(a.x == b.x);
            CHECK(a.y == b.y);
            CHECK(a.x * a.x + a.y * a.y == doctest::Approx(1).epsilon(1e-12));
        }
}

TEST_CASE("arcs wrap around the circle") {
    Arc a{3.1, 0.2};
    CHECK(a.contains_angle(-3.13));
    CHECK_FALSE(a.contains_angle(2.9));
}

TEST_CASE("project_union of squares matches the exact square projection") {
    auto unit = project_union(SquareUnion{{QPoint{0, 0}}, Q(1)}, unit_direction(1, 1));
    REQUIRE(unit.iv.size() == 1);
    CHECK(unit.iv[0].first == doctest::Approx(-std::sqrt(2.0) / 2));
    CHECK(unit.iv[0].second == doctest::Approx(std::sqrt(2.0) / 2));

    // oracle: project the four corners of every square and take the hull
    SquareUnion k{{QPoint{0, 0}, QPoint{make_q(3, 2), make_q(1, 4)}, QPoint{-2, make_q(-1, 3)}}, make_q(1, 2)};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0, 3.2);
    for (int it = 0; it < 200; ++it) {
        Direction e = direction_from_angle(ang(rng));
        IntervalUnion oracle;
        double h = to_double(k.side) / 2;
        for (auto& c : k.centers) {
            double lo = 1e300, hi = -1e300;
            for (double sx : {-h, h})
                for (double sy : {-h, h}) {
                    double v = project(Point{to_double(c.x) + sx, to_double(c.y) + sy}, e);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            oracle.iv.push_back({lo, hi});
        }
        oracle.normalize();
        auto got = project_union(k, e);
        REQUIRE(got.iv.size() == oracle.iv.size());
        for (std::size_t i = 0; i < got.iv.size(); ++i) {
            CHECK(got.iv[i].first == doctest::Approx(oracle.iv[i].first));
            CHECK(got.iv[i].second == doctest::Approx(oracle.iv[i].second));
        }
    }
}

TEST_CASE("to_float keeps centers and radius") {
    QBallUnion k{{QPoint{make_q(1, 4), make_q(-3, 8)}, QPoint{0, 1}}, make_q(1, 16)};
    auto f = to_float(k);
    REQUIRE(f.balls.size() == 2);
    CHECK(f.radius == 0.0625);
    CHECK(f.balls[0].center.x == 0.25);
    CHECK(f.balls[0].center.y == -0.375);
    CHECK(f.balls[1].radius == 0.0625);
    auto pts = to_float(k.centers);
    REQUIRE(pts.size() == 2);
    CHECK(pts[1].y == 1.0);
}
