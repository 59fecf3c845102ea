#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projlab/covering.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

using namespace projlab;

namespace {

IntervalUnion iu(std::vector<std::pair<double, double>> v) {
    IntervalUnion u{std::move(v)};
    u.normalize();
    return u;
}

// independent oracle: integer intervals, integer piece width w; optimal covers may start at
// integers, and a union of closed pieces with integer ends covers [a,b] iff it covers all
// half-integers in it. Exhaustive search over start subsets.
long brute_cover(const std::vector<std::pair<int, int>>& iv, int w) {
    std::vector<int> pts;  // doubled coordinates
    for (auto& [a, b] : iv)
        for (int x = 2 * a; x <= 2 * b; ++x) pts.push_back(x);
    int lo = iv.front().first - w, hi = iv.back().second;
    std::vector<int> cand;
    for (int s = lo; s <= hi; ++s) cand.push_back(s);
    for (int k = 1;; ++k) {
        std::vector<int> pick;
        std::function<bool(std::size_t)> rec = [&](std::size_t from) {
            if (static_cast<int>(pick.size()) == k) {
                for (int p : pts) {
                    bool hit = false;
                    for (int s : pick)
                        if (2 * s <= p && p <= 2 * (s + w)) hit = true;
                    if (!hit) return false;
                }
                return true;
            }
            for (std::size_t i = from; i < cand.size(); ++i) {
                pick.push_back(cand[i]);
                if (rec(i + 1)) return true;
                pick.pop_back();
            }
            return false;
        };
        if (rec(0)) return k;
    }
}

// independent packing oracle: max subset of half-integer sample points with gaps >= w
long brute_pack(const std::vector<std::pair<int, int>>& iv, int w) {
    std::vector<int> pts;
    for (auto& [a, b] : iv)
        for (int x = 2 * a; x <= 2 * b; ++x) pts.push_back(x);
    // optimal packings can use the interval endpoints and integer steps from them; DP over sorted points
    std::vector<long> best(pts.size(), 1);
    long out = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (pts[i] - pts[j] >= 2 * w) best[i] = std::max(best[i], best[j] + 1);
        out = std::max(out, best[i]);
    }
    return out;
}

}  // namespace

TEST_CASE("covering_number_1d examples") {
    CHECK(covering_number_1d(iu({{0, 1}}), 0.25) == 2);
    CHECK(covering_number_1d(iu({{0, 0.1}, {0.5, 0.6}}), 0.05) == 2);
    CHECK(covering_number_1d(iu({{0, 1}, {1.2, 1.4}}), 0.1) == 6);
    CHECK(covering_number_1d(IntervalUnion{}, 0.1) == 0);
    CHECK_THROWS(covering_number_1d(iu({{0, 1}}), 0.0));
}

TEST_CASE("packing_number_1d examples") {
    CHECK(packing_number_1d(iu({{0, 1}}), 0.25) == 3);
    CHECK(packing_number_1d(iu({{0.7, 0.7}}), 0.25) == 1);
    CHECK(packing_number_1d(iu({{0, 0.1}, {10, 10.1}}), 1.0) == 2);
    CHECK(packing_number_1d(IntervalUnion{}, 0.1) == 0);
}

TEST_CASE("1-D counts match exhaustive oracles on small integer instances") {
    std::mt19937 rng(2024);
    for (int it = 0; it < 150; ++it) {
        std::vector<std::pair<int, int>> iv;
        int x = 0;
        int parts = 1 + it % 3;
        for (int i = 0; i < parts; ++i) {
            x += static_cast<int>(rng() % 4);
            int len = static_cast<int>(rng() % 5);
            iv.push_back({x, x + len});
            x += len + 1;
        }
        int w = 1 + static_cast<int>(rng() % 3);  // piece length w, radius w/2
        QIntervalUnion q;
        for (auto& [a, b] : iv) q.iv.push_back({Q(a), Q(b)});
        q.normalize();
        Z n = covering_number_1d(q, make_q(w, 2));
        CHECK(n == brute_cover(iv, w));
        CHECK(static_cast<long>(packing_number_1d(q, make_q(w, 2))) == brute_pack(iv, w));
        std::vector<std::pair<Z, Z>> zi;
        for (auto& [a, b] : iv) zi.push_back({Z(a), Z(b)});
        merge_int_intervals(zi);
        CHECK(covering_number_int(zi, Z(w)) == brute_cover(iv, w));
        CHECK(covering_number_int(zi, Z(2 * w), Z(2)) == brute_cover(iv, w));
    }
}

TEST_CASE("property: 1-D sandwich, monotonicity and scaling") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> u(0, 400);
    for (int it = 0; it < 2000; ++it) {
        QIntervalUnion q;
        int m = 1 + it % 6;
        for (int i = 0; i < m; ++i) {
            Q a = make_q(u(rng), 37);
            q.iv.push_back({a, a + make_q(u(rng) % 60, 41)});
        }
        q.normalize();
        Q d = make_q(1 + u(rng) % 50, 97);
        CHECK(covering_number_1d(q, Q(2 * d)) <= packing_number_1d(q, d));
        CHECK(packing_number_1d(q, d) <= covering_number_1d(q, Q(d / 2)));
        CHECK(covering_number_1d(q, Q(d / 3)) >= covering_number_1d(q, d));
        Q r = make_q(3 + u(rng) % 7, 5);
        QIntervalUnion s;
        for (auto& [a, b] : q.iv) s.iv.push_back({Q(r * a), Q(r * b)});
        CHECK(covering_number_1d(s, Q(r * d)) == covering_number_1d(q, d));
        QIntervalUnion sub = q;
        sub.iv.pop_back();
        if (!sub.iv.empty()) CHECK(covering_number_1d(sub, d) <= covering_number_1d(q, d));
    }
}

TEST_CASE("covering_number_qn handles irrational scale exactly") {
    // surrogate [0, 1] with nu = sqrt2 has true length 1/sqrt2 ~ 0.7071
    QIntervalUnion u{{{Q(0), Q(1)}}};
    CHECK(covering_number_exact(u, make_q(1, 4), Q(2)) == 2);
    CHECK(covering_number_exact(u, make_q(1, 8), Q(2)) == 3);
    CHECK(covering_number_exact(u, make_q(1, 10), Q(2)) == 4);
    // nu = 1: length 1 is exactly two pieces of length 1/2, no rounding slack
    CHECK(covering_number_exact(u, make_q(1, 4), Q(1)) == 2);
    CHECK(covering_number_exact(u, make_q(1, 4) - make_q(1, 1000000), Q(1)) == 3);
}

TEST_CASE("covering_number_2d mesh and greedy") {
    double d = 0.1;
    BallUnion b{{Ball{{0.5 * d, 0.5 * d}, d / 4}}, d / 4};
    CHECK(covering_number_2d(b, d) == 1);
    CHECK(covering_number_2d(std::vector<Point>{{0, 0}}, d) == 4);
    std::vector<Point> corners{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    // oracle: closed cells [i d, (i+1) d]^2 meeting some corner
    std::set<std::pair<long, long>> cells;
    for (auto& p : corners)
        for (long i = -5; i <= 5; ++i)
            for (long j = -5; j <= 5; ++j)
                if (i * 0.3 <= p.x && p.x <= (i + 1) * 0.3 && j * 0.3 <= p.y && p.y <= (j + 1) * 0.3) cells.insert({i, j});
    CHECK(covering_number_2d(corners, 0.3) == cells.size());
    CHECK(cells.size() == 9);  // 1 is not a multiple of 0.3
    // greedy cover is an upper bound, at least the packing lower bound
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Point> cloud;
    for (int i = 0; i < 300; ++i) cloud.push_back({u(rng), u(rng)});
    for (double r : {0.2, 0.1, 0.05}) {
        CHECK(covering_number_2d(cloud, r, CoverMode::greedy) >= packing_number_2d(cloud, r));
        CHECK(covering_number_2d(cloud, r, CoverMode::mesh) <= 4 * covering_number_2d(cloud, r / 2, CoverMode::mesh) + 4);
    }
}

TEST_CASE("packing_number_2d examples") {
    std::vector<Point> g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g.push_back({double(i), double(j)});
    CHECK(packing_number_2d(g, 0.4) == 9);
    CHECK(packing_number_2d(std::vector<Point>{{0, 0}, {1, 0}}, 0.6) == 1);
    CHECK(packing_number_2d(std::vector<Point>{{0.3, 0.2}}, 5.0) == 1);
}

TEST_CASE("estimate_box_dimension") {
    ScaleProfile flat, line;
    for (int k = 4; k <= 12; ++k) {
        double d = std::ldexp(1.0, -k);
        flat.entries.push_back({d, 1.0, -1});
        line.entries.push_back({d, std::round(1 / d), -1});
    }
    CHECK(estimate_box_dimension(flat).slope == doctest::Approx(0).epsilon(1e-12));
    CHECK(std::fabs(estimate_box_dimension(line).slope - 1.0) <= 0.01);
    for (double s : {0.25, 0.5, 1.0, 1.5}) {
        ScaleProfile p;
        for (int k = 1; k <= 20; ++k) {
            double d = std::ldexp(1.0, -k);
            p.entries.push_back({d, 3.0 * std::pow(d, -s), -1});
        }
        CHECK(std::fabs(estimate_box_dimension(p).slope - s) <= 1e-9);
    }
    ScaleProfile two;
    two.entries = {{0.5, 2, -1}, {0.25, 4, -1}};
    CHECK_THROWS(estimate_box_dimension(two));
    ScaleProfile steep;
    for (int k = 1; k <= 4; ++k) steep.entries.push_back({std::ldexp(1.0, -k), std::pow(8.0, k), -1});
    auto e = estimate_box_dimension(steep, 1);
    CHECK(e.clamped);
    CHECK(e.slope == 1.0);
}

TEST_CASE("direction_sweep examples and determinism") {
    BallUnion ball{{Ball{{0, 0}, 0.5}}, 0.5};
    auto rows = direction_sweep(ball, {Direction{1, 0, {}}}, {0.25});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n == 2);
    std::vector<Point> g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g.push_back({double(i), double(j)});
    auto r2 = direction_sweep(g, {Direction{1, 0, {}}}, {0.4});
    CHECK(r2[0].n == 3);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    BallUnion k;
    k.radius = 0.01;
    for (int i = 0; i < 200; ++i) k.balls.push_back(Ball{{u(rng), u(rng)}, 0.01});
    std::vector<Direction> dirs;
    for (int i = 0; i < 17; ++i) dirs.push_back(direction_from_angle(i * 0.19));
    auto deltas = dyadic_scales(2, 9);
    std::ostringstream a, b;
    write_sweep_csv(a, direction_sweep(k, dirs, deltas, 1));
    write_sweep_csv(b, direction_sweep(k, dirs, deltas, 4));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("direction_index,delta_index,ex,ey,delta,N,P\n", 0) == 0);
}

TEST_CASE("profile csv schema") {
    ScaleProfile p;
    p.entries = {{0.5, 2, 2}, {0.25, 3, -1}};
    std::ostringstream os;
    write_profile_csv(os, p);
    CHECK(os.str() == "delta,N,P\n0.5,2,2\n0.25,3,\n");
}

TEST_CASE("mesh_count_1d matches a direct cell scan") {
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> u(0, 100);
    for (int it = 0; it < 300; ++it) {
        IntervalUnion v;
        for (int i = 0; i < 4; ++i) {
            double a = u(rng) / 16.0;
            v.iv.push_back({a, a + (u(rng) % 10) / 16.0});
        }
        v.normalize();
        double d = (1 + u(rng) % 7) / 8.0;
        std::set<long> cells;
        for (auto& [a, b] : v.iv)
            for (long i = -2; i * d <= b + 1; ++i)
                if (i * d <= b && (i + 1) * d >= a) cells.insert(i);
        CHECK(mesh_count_1d(v, d) == cells.size());
    }
}
