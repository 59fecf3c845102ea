#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projlab/discrete.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

using namespace projlab;

namespace {

std::vector<Point> random_disk(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Point> out;
    while (out.size() < n) {
        Point p{u(rng), u(rng)};
        if (p.x * p.x + p.y * p.y <= 1) out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("tube_index examples") {
    CHECK(tube_index(0.25, 0.1) == 2);
    CHECK(tube_index(0.3, 0.1) == 3);
    CHECK(tube_index(-0.05, 0.1) == -1);
    CHECK(tube_index(make_q(7, 3), make_q(1, 2)) == 4);
    CHECK(tube_index(Q(3), make_q(1, 2)) == 6);
    CHECK_THROWS(tube_index(1.0, 0.0));
}

TEST_CASE("property: float tube index agrees with exact away from boundaries") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> u(-100000, 100000);
    for (int it = 0; it < 20000; ++it) {
        Q x = make_q(u(rng), 977);
        Q d = make_q(1 + std::abs(u(rng)) % 500, 1009);
        CHECK(tube_index(to_double(x), to_double(d)) == tube_index(x, d).get_si());
    }
}

TEST_CASE("is_delta_one_set") {
    const double d = 1.0 / 64;
    std::vector<Point> line;
    for (int i = 0; i < 60; ++i) line.push_back({i * d - 0.5, 0});
    auto r = is_delta_one_set(line, d, 3);
    CHECK(r.passes);
    CHECK(r.a_star <= 3);
    std::vector<Point> g;
    const int n = 16;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.push_back({i * d, j * d});
    auto rg = is_delta_one_set(g, d, n - 1);
    CHECK_FALSE(rg.passes);
    CHECK(rg.a_star > n - 1);
    auto one = is_delta_one_set({{0.1, 0.2}}, d, 3);
    CHECK(one.a_star == 1);
    CHECK(one.passes);
    CHECK_FALSE(is_delta_one_set({{0, 0}, {d / 2, 0}}, d, 3).separated);
}

TEST_CASE("extract_delta_one_subset") {
    const double d = 1.0 / 16;
    for (int n : {1, 2, 5, 8, 13}) {
        std::vector<Point> g;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.push_back({i * d, j * d});
        auto c = extract_delta_one_subset(g, d, Direction{1, 0, {}});
        CHECK(c.size() == static_cast<std::size_t>((n + 1) / 2));
    }
    CHECK(extract_delta_one_subset({}, d, Direction{1, 0, {}}).empty());
    std::vector<Point> sep{{0, 0}, {0.5, 0.3}, {0.9, -0.2}};
    CHECK(extract_delta_one_subset(sep, d, Direction{1, 0, {}}).size() == 3);
    std::mt19937 rng(6);
    for (int it = 0; it < 30; ++it) {
        auto p = random_disk(rng, 500);
        double delta = std::ldexp(1.0, -(4 + it % 5));
        auto c = extract_delta_one_subset(p, delta, direction_from_angle(0.37 * it));
        CHECK(is_delta_one_set(c, delta, 3).passes);
    }
}

TEST_CASE("direction_net") {
    auto net = direction_net(0.1);
    CHECK(net.size() == 32);
    for (std::size_t k = 1; k < net.size(); ++k) {
        double ang = std::acos(std::clamp(net[k - 1].x * net[k].x + net[k - 1].y * net[k].y, -1.0, 1.0));
        CHECK(ang <= 0.1);
    }
}

TEST_CASE("counting_energy examples") {
    std::vector<Point> two{{0, 0}, {0, 1}};
    auto same = counting_energy(two, {Direction{1, 0, {}}}, 0.1);
    CHECK(same.rows[0].pair_count == 4);
    auto diff = counting_energy(two, {Direction{0, 1, {}}}, 0.1);
    CHECK(diff.rows[0].pair_count == 2);
    CHECK(same.cs_holds);
    CHECK(diff.cs_holds);
}

TEST_CASE("property: counting energy equals sum of squared tube masses and satisfies Cauchy-Schwarz") {
    std::mt19937 rng(11);
    for (int it = 0; it < 40; ++it) {
        auto c = random_disk(rng, 50 + it * 5);
        double d = 0.05 + 0.01 * (it % 7);
        auto dirs = direction_net(0.3);
        auto r = counting_energy(c, dirs, d);
        CHECK(r.cs_holds);
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            std::map<long, std::uint64_t> h;
            for (auto& p : c) ++h[static_cast<long>(std::floor(project(p, dirs[k]) / d))];
            std::uint64_t s = 0;
            for (auto& [t, m] : h) s += m * m;
            CHECK(r.rows[k].pair_count == s);
            CHECK(r.rows[k].occupied_tubes == h.size());
            CHECK(static_cast<std::uint64_t>(c.size() * c.size()) <= h.size() * s);
        }
    }
}

TEST_CASE("energy csv is independent of the thread count") {
    std::mt19937 rng(2);
    auto c = random_disk(rng, 400);
    auto dirs = direction_net(0.05);
    std::ostringstream a, b;
    write_energy_csv(a, counting_energy(c, dirs, 0.02, 1));
    write_energy_csv(b, counting_energy(c, dirs, 0.02, 3));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("direction_index,ex,ey,occupied_tubes,energy,cs_lower\n", 0) == 0);
}

TEST_CASE("weighted_energy") {
    WeightedPointSet one{{{0, 0}, {0, 0.01}, {0.001, 0.3}}, {0.2, 0.3, 0.5}};
    CHECK(weighted_energy(one, {Direction{1, 0, {}}}, 0.5, 0).total == doctest::Approx(1).epsilon(1e-15));
    WeightedPointSet two{{{0, 0}, {0, 0.5}}, {0.5, 0.5}};
    CHECK(weighted_energy(two, {Direction{1, 0, {}}}, 0.1, 0.5).total ==
          doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
    WeightedPointSet neg{{{0, 0}}, {-1}};
    CHECK_THROWS(weighted_energy(neg, {Direction{1, 0, {}}}, 0.1, 0));
    std::mt19937 rng(9);
    auto pts = random_disk(rng, 200);
    WeightedPointSet mu{pts, std::vector<double>(pts.size(), 1.0 / pts.size())};
    auto r = weighted_energy(mu, direction_net(0.2), 0.05, 0);
    CHECK(r.cs_holds);
    for (auto& row : r.rows) CHECK(row.energy >= 1.0 / row.occupied_tubes * (1 - 1e-12));
}

TEST_CASE("riesz_energy") {
    CHECK(riesz_energy(WeightedPointSet{{{0.3, 0.3}}, {1}}, 1) == 0);
    WeightedPointSet two{{{0, 0}, {1, 0}}, {0.5, 0.5}};
    CHECK(riesz_energy(two, 1) == doctest::Approx(0.5).epsilon(1e-15));
    std::mt19937 rng(1);
    auto pts = random_disk(rng, 30);
    WeightedPointSet mu{pts, std::vector<double>(pts.size(), 1.0 / pts.size())};
    for (double r : {0.5, 3.0})
        for (double g : {0.3, 1.0, 1.7}) {
            WeightedPointSet s = mu;
            for (auto& p : s.points) p = {r * p.x, r * p.y};
            CHECK(riesz_energy(s, g) == doctest::Approx(std::pow(r, -g) * riesz_energy(mu, g)).epsilon(1e-12));
        }
}

TEST_CASE("marstrand scan examples") {
    const double d = 1.0 / 64;
    std::vector<Point> line;
    for (int i = 0; i < 64; ++i) line.push_back({i * d - 0.5, 0});
    auto s = marstrand_exceptional_scan(line, d, 0.5);
    bool vertical = false, horizontal = false;
    for (auto& e : s.exceptional) {
        if (std::fabs(e.x) < 1e-12) vertical = true;
        if (std::fabs(e.y) < 1e-12) horizontal = true;
    }
    CHECK(vertical);     // everything projects to one point
    CHECK_FALSE(horizontal);
    CHECK(s.net_size == direction_net(d).size());
    std::vector<Point> g;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) g.push_back({i * d, j * d});
    CHECK_THROWS_AS(marstrand_exceptional_scan(g, d, 0.5), DeltaOneViolation);
}

TEST_CASE("property: marstrand count stays within the tracked cap") {
    std::mt19937 rng(21);
    for (int k = 6; k <= 9; ++k) {
        double d = std::ldexp(1.0, -k);
        auto p = random_disk(rng, 3000);
        auto c = extract_delta_one_subset(p, d, direction_from_angle(0.2 * k));
        for (double tau : {0.3, 0.5, 0.7}) {
            auto s = marstrand_exceptional_scan(c, d, tau);
            CHECK(static_cast<double>(s.count) <= 64 * std::pow(d, tau - 1) * std::log(1 / d));
        }
    }
}

TEST_CASE("property: co-tube direction count is at most ceil(pi/D) + 1") {
    std::mt19937 rng(17);
    for (int k = 4; k <= 8; ++k) {
        double d = std::ldexp(1.0, -k);
        auto net = direction_net(d);
        auto pts = random_disk(rng, 60);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                double dist = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
                if (dist < d) continue;
                CHECK(co_tube_direction_count(pts[i], pts[j], net, d) <= std::ceil(std::numbers::pi / dist) + 1);
            }
    }
}

TEST_CASE("balanced_split") {
    auto one = balanced_split({{0.5, 1.0}}, 0.1, 0.2, 1.0, 0.5);
    CHECK(one.branch == 1);
    std::vector<std::pair<double, double>> uni;
    for (int i = 0; i <= 10; ++i) uni.push_back({i * 0.1, 1.0 / 11});
    auto u = balanced_split(uni, 0.1, 0.2, 1e-6, 0.5);  // window [0.4, 0.6] is centered
    CHECK(u.branch == 2);
    CHECK(u.ratio == doctest::Approx(1).epsilon(1e-12));
    auto ends = balanced_split({{0.0, 0.5}, {1.0, 0.5}}, 0.1, 0.3, 1e-6, 0.5);
    CHECK(ends.branch == 2);
    CHECK(ends.ratio == 1);
    // one heavy atom, nothing to balance it
    CHECK_THROWS_AS(balanced_split({{0.0, 0.9}, {0.05, 0.1}}, 0.1, 0.01, 1e-6, 0.5), SplitError);
}

TEST_CASE("exponent_iteration") {
    auto it = exponent_iteration(1.0 / 3, 0.5, 1.5, 0.0, 5);
    CHECK(it.limit == doctest::Approx(0.5).epsilon(1e-15));
    auto c = exponent_iteration(1.0 / 3, 0.5, 1.5, it.limit, 20);
    for (double t : c.tau) CHECK(t == doctest::Approx(it.limit).epsilon(1e-14));
    // monotone toward the fixed point from either side
    for (double t0 : {-1.0, 2.0}) {
        auto m = exponent_iteration(0.3, 0.4, 1.2, t0, 60);
        double prev = t0;
        for (double t : m.tau) {
            CHECK(std::fabs(t - m.limit) <= std::fabs(prev - m.limit));
            CHECK((t - m.limit) * (t0 - m.limit) >= 0);
            prev = t;
        }
    }
    CHECK_THROWS(exponent_iteration(0.3, 0.0, 1, 0, 1));
}
