#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "projlab/incidence.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace projlab;

namespace {

PointSet grid(long n) { return grid_points(n); }

// independent oracle: distinct values of a x + b y
std::size_t oracle_card(const PointSet& p, const Z& a, const Z& b) {
    std::set<Q> v;
    for (auto& x : p) v.insert(Q(a * x.x + b * x.y));
    return v.size();
}

PointSet random_rational_set(std::mt19937& rng, std::size_t n, int range, int den) {
    std::uniform_int_distribution<int> u(-range, range);
    std::set<QPoint> s;
    while (s.size() < n) s.insert(QPoint{make_q(u(rng), den), make_q(u(rng), den)});
    return PointSet(s.begin(), s.end());
}

}  // namespace

TEST_CASE("projection_cardinality examples") {
    auto g = grid(3);
    CHECK(projection_cardinality(g, make_exact_dir(1, 0)) == 3);
    CHECK(projection_cardinality(g, make_exact_dir(1, 1)) == 5);
    CHECK(grid_projection_count(3, 1, 1) == 5);
    std::vector<Point> f{{0, 0}, {1, 0}, {0, 1}};
    CHECK(projection_cardinality(f, Direction{1, 0, {}}) == 2);
    std::vector<Point> near{{0, 0}, {1e-11, 0}};
    CHECK_THROWS(projection_cardinality(near, Direction{1, 0, {}}));
}

TEST_CASE("grid projection bound and preimage count") {
    for (long p = 1; p <= 5; ++p)
        for (long q = 1; q <= 5; ++q)
            for (long n : {2L, 3L, 7L, 16L, 33L}) {
                auto c = grid_projection_count(n, p, q);
                CHECK(c <= static_cast<std::size_t>((1 + p) * (1 + q) * n));
                CHECK(c == oracle_card(grid(n), Z(q), Z(p)));
            }
    auto r = verify_grid_lemma(5, 5, 64);
    CHECK(r.cases == 25 * 63);
    CHECK(r.violations == 0);
    CHECK(r.preimage_failures == 0);
}

TEST_CASE("critical directions") {
    CHECK(critical_directions(PointSet{{0, 0}, {1, 2}}).directions.size() == 1);
    CHECK(critical_directions(grid(3)).directions.size() == 8);
    CHECK(critical_directions(PointSet{{0, 0}, {1, 1}, {2, 2}, {5, 5}}).directions.size() == 1);
    auto cd = critical_directions(grid(3));
    for (std::size_t i = 1; i < cd.directions.size(); ++i) CHECK(cd.directions[i - 1].dir < cd.directions[i].dir);
    for (auto& d : cd.directions) {
        CHECK_FALSE(d.pairs.empty());
        CHECK(gcd_z(d.dir.a, d.dir.b) == 1);
    }
}

TEST_CASE("property: critical directions are complete") {
    std::mt19937 rng(5);
    for (int it = 0; it < 1000; ++it) {
        auto p = random_rational_set(rng, 2 + it % 11, 6, 1 + it % 3);
        auto cd = critical_directions(p);
        std::set<std::pair<Z, Z>> crit;
        for (auto& d : cd.directions) crit.insert({d.dir.a, d.dir.b});
        // every direction collapsing a pair is a normal of a difference of entries in [-24, 24]^2 / den;
        // scan a net of primitive (a,b) with |a|,|b| <= 12 plus the listed ones
        for (long a = 0; a <= 12; ++a)
            for (long b = -12; b <= 12; ++b) {
                if (a == 0 && b <= 0) continue;
                if (gcd_z(a, b) != 1) continue;
                bool collapses = oracle_card(p, Z(a), Z(b)) < p.size();
                CHECK(collapses == (crit.count({Z(a), Z(b)}) == 1));
            }
        for (auto& d : cd.directions) CHECK(oracle_card(p, d.dir.a, d.dir.b) < p.size());
    }
}

TEST_CASE("exceptional_direction_count examples") {
    auto r = exceptional_direction_count(grid(3), make_q(1, 2));
    CHECK(r.threshold == 3);
    CHECK(r.count == 2);
    auto r2 = exceptional_direction_count(PointSet{{0, 0}, {3, 1}}, make_q(1, 2));
    CHECK(r2.count == 1);
    std::ostringstream os;
    write_witness_csv(os, r);
    CHECK(os.str() == "a,b,cardinality\n0,1,3\n1,0,3\n");
}

TEST_CASE("power_floor exact") {
    CHECK(power_floor(9, make_q(1, 2)) == 3);
    CHECK(power_floor(8, make_q(1, 2)) == 2);
    CHECK(power_floor(1000, make_q(2, 3)) == 100);
    CHECK(power_floor(999, make_q(2, 3)) == 99);
    CHECK(power_floor(64, make_q(3, 4)) == 22);  // 64^(3/4) = 22.627
}

TEST_CASE("exceptional direction bound on grids and random sets, with the incidence identity") {
    std::vector<Q> ss{make_q(1, 2), make_q(3, 5), make_q(3, 4)};
    auto check = [&](const PointSet& p) {
        double n = static_cast<double>(p.size());
        for (auto& s : ss) {
            auto r = exceptional_direction_count(p, s, 1);
            CHECK(static_cast<double>(r.count) <= 8 * std::pow(n, 2 * to_double(s) - 1));
            std::vector<ExactDir> dirs;
            for (auto& w : r.witnesses) dirs.push_back(w.dir);
            auto fam = fiber_family(p, dirs);
            CHECK(incidence_count(p, fam) == p.size() * dirs.size());
        }
        auto all = critical_directions(p);
        std::vector<ExactDir> dirs;
        for (auto& d : all.directions) dirs.push_back(d.dir);
        CHECK(incidence_count(p, fiber_family(p, dirs)) == p.size() * dirs.size());
    };
    for (long n = 2; n <= 14; ++n) check(grid(n));
    std::mt19937 rng(12);
    for (int it = 0; it < 500; ++it) check(random_rational_set(rng, 12, 20, 1 + it % 4));
}

TEST_CASE("property: homothety and rotation invariance") {
    std::mt19937 rng(77);
    for (int it = 0; it < 60; ++it) {
        auto p = random_rational_set(rng, 9, 5, 1);
        auto base = exceptional_direction_count(p, make_q(3, 5));
        PointSet h, rot;
        Q r = make_q(7, 3);
        QPoint t{make_q(1, 2), make_q(-5, 4)};
        for (auto& x : p) {
            h.push_back({Q(r * x.x + t.x), Q(r * x.y + t.y)});
            rot.push_back({Q(-x.y), x.x});  // quarter turn
        }
        CHECK(exceptional_direction_count(h, make_q(3, 5)).count == base.count);
        auto rr = exceptional_direction_count(rot, make_q(3, 5));
        CHECK(rr.count == base.count);
        std::set<std::pair<Z, Z>> want, got;
        for (auto& w : base.witnesses) {
            auto d = make_exact_dir(Z(-w.dir.b), w.dir.a);  // normal rotated by the same quarter turn
            want.insert({d.a, d.b});
        }
        for (auto& w : rr.witnesses) got.insert({w.dir.a, w.dir.b});
        CHECK(want == got);
    }
}

TEST_CASE("incidence_count and fiber_family") {
    auto g = grid(3);
    auto fam = fiber_family(g, {make_exact_dir(1, 0), make_exact_dir(0, 1)});
    CHECK(fam.lines.size() == 6);
    CHECK(incidence_count(g, fam) == 18);
    CHECK(incidence_count(g, LineFamily{}) == 0);
    CHECK(incidence_count(PointSet{{2, 3}}, LineFamily{{Line{make_exact_dir(1, 1), Q(5)}}}) == 1);
    PointSet col{{0, 0}, {1, 1}, {2, 2}};
    CHECK(fiber_family(col, {make_exact_dir(1, 0)}).lines.size() == 3);
    CHECK(fiber_family(col, {make_exact_dir(1, -1)}).lines.size() == 1);
}

TEST_CASE("st_bound_check") {
    auto g = grid(3);
    auto fam = fiber_family(g, {make_exact_dir(1, 0), make_exact_dir(0, 1)});
    auto r = st_bound_check(g, fam, 1.0);
    CHECK(r.incidences == 18);
    double expect = 18 / (std::pow(6.0, 2.0 / 3) * std::pow(9.0, 2.0 / 3) + 15);
    CHECK(r.min_constant == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.min_constant == doctest::Approx(0.615).epsilon(1e-3));
    CHECK(r.holds);
    CHECK(st_bound_check(g, LineFamily{}, 1.0).min_constant == 0);
    CHECK_FALSE(st_bound_check(g, fam, 0.5).holds);
}
