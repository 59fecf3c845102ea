// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include "projlab/bounds.hpp"
#include "projlab/constructions.hpp"
#include "projlab/covering.hpp"
#include "projlab/discrete.hpp"
#include "projlab/incidence.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

using namespace projlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome grid_lemma() {
    auto t0 = std::chrono::steady_clock::now();
    auto r = verify_grid_lemma(5, 5, 64, 2);
    double t = seconds_since(t0);
    bool ok = r.cases == 25 * 63 && r.violations == 0 && r.preimage_failures == 0 && t < 10;
    return {ok, fmt("%zu cases, %zu violations, %zu preimage failures, %.2fs", r.cases, r.violations,
                    r.preimage_failures, t)};
}

Outcome line_intersect() {
    bool ok = true;
    std::string d;
    for (auto [n, dd] : {std::pair{3L, 3L}, {3L, 4L}, {4L, 3L}}) {
        auto t0 = std::chrono::steady_clock::now();
        auto r = verify_line_intersect(n, dd);
        double t = seconds_since(t0);
        ok = ok && r.ok() && r.lines_checked > 0 && t < 60;
        d += fmt("(%ld,%ld): %llu lines, %llu violations, xcoord %s, card %s/%s, %.2fs; ", n, dd,
                 static_cast<unsigned long long>(r.lines_checked), static_cast<unsigned long long>(r.violations),
                 r.xcoord_ok ? "ok" : "FAIL", r.max_projection_card.get_str().c_str(), r.card_bound.get_str().c_str(),
                 t);
    }
    d.resize(d.size() - 2);
    return {ok, d};
}

Outcome exceptional_directions() {
    std::vector<Q> ss{make_q(1, 2), make_q(3, 5), make_q(3, 4)};
    std::size_t sets = 0, bound_fail = 0, identity_fail = 0;
    double worst = 0;
    auto check = [&](const PointSet& p) {
        ++sets;
        double n = static_cast<double>(p.size());
        for (auto& s : ss) {
            auto r = exceptional_direction_count(p, s, 1);
            double cap = 8 * std::pow(n, 2 * to_double(s) - 1);
            worst = std::max(worst, r.count / cap);
            if (static_cast<double>(r.count) > cap) ++bound_fail;
            std::vector<ExactDir> dirs;
            for (auto& w : r.witnesses) dirs.push_back(w.dir);
            if (incidence_count(p, fiber_family(p, dirs)) != p.size() * dirs.size()) ++identity_fail;
        }
    };
    for (long n = 2; n <= 14; ++n) check(grid_points(n));
    std::mt19937 rng(1009);
    std::uniform_int_distribution<int> u(-20, 20);
    for (int it = 0; it < 500; ++it) {
        std::set<QPoint> s;
        while (s.size() < 12) s.insert(QPoint{make_q(u(rng), 1 + it % 4), make_q(u(rng), 1 + it % 4)});
        check(PointSet(s.begin(), s.end()));
    }
    return {bound_fail == 0 && identity_fail == 0,
            fmt("%zu sets x 3 exponents, %zu bound failures, %zu identity failures, max count/cap %.3f", sets,
                bound_fail, identity_fail, worst)};
}

Outcome marstrand() {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Point> pool;
    while (pool.size() < 40000) {
        Point p{u(rng), u(rng)};
        if (p.x * p.x + p.y * p.y <= 1) pool.push_back(p);
    }
    // thin strip along a fixed direction: its projections collapse near the strip normal
    const double th = 0.7;
    std::vector<Point> strip;
    std::uniform_real_distribution<double> w(-0.002, 0.002);
    for (int i = 0; i < 20000; ++i) {
        double a = u(rng), b = w(rng);
        strip.push_back({a * std::cos(th) - b * std::sin(th), a * std::sin(th) + b * std::cos(th)});
    }
    std::size_t runs = 0, bound_fail = 0, cs_fail = 0, max_n = 0, max_count = 0;
    double worst = 0;
    for (int k = 6; k <= 12; ++k) {
        double delta = std::ldexp(1.0, -k);
        auto net = direction_net(delta);
        for (auto* src : {&pool, &strip}) {
            auto c = extract_delta_one_subset(*src, delta, src == &pool ? direction_from_angle(0.1 * k)
                                                                        : direction_from_angle(th));
            max_n = std::max(max_n, c.size());
            if (!counting_energy(c, net, delta).cs_holds) ++cs_fail;
            for (double tau : {0.3, 0.5, 0.7}) {
                ++runs;
                auto s = marstrand_exceptional_scan(c, delta, tau);
                double cap = 64 * std::pow(delta, tau - 1) * std::log(1 / delta);
                worst = std::max(worst, s.count / cap);
                max_count = std::max(max_count, s.count);
                if (static_cast<double>(s.count) > cap) ++bound_fail;
            }
        }
    }
    return {bound_fail == 0 && cs_fail == 0,
            fmt("%zu scans (n up to %zu), %zu bound failures, %zu Cauchy-Schwarz failures, max count %zu, "
                "max count/cap %.4f",
                runs, max_n, bound_fail, cs_fail, max_count, worst)};
}

Outcome null_projection_cascade() {
    auto t0 = std::chrono::steady_clock::now();
    auto r = construct_main(default_main_params(6), 6, 16);
    double t = seconds_since(t0);
    bool ok = r.ok() && r.steps.size() == 6 && t < 30;
    double content = 0;
    for (auto& s : r.steps) {
        ok = ok && s.diameter_sum == 1 && s.cover_ok && s.content_ok;
        if (s.step > 1) ok = ok && s.content_samples == 16;
        content = std::max(content, s.content_max);
    }
    return {ok, fmt("6 steps, final %zu balls, max content proxy %.4f, %.2fs", r.generations.back().balls.centers.size(),
                    content, t)};
}

Outcome small_projection_pair() {
    auto t0 = std::chrono::steady_clock::now();
    auto h = construct_main2(default_main2_params(Q(1), 3));
    auto v = verify_main2(h, 32, 16);
    double t = seconds_since(t0);
    return {v.ok() && v.violations == 0 && v.samples > 0,
            fmt("nesting %d, tags %d, projections %d, technical %d, packing %d, skeleton bound %d, tiling %d, arcs %d; "
                "%llu samples, %llu violations, %.2fs",
                v.nesting, v.rational_tags, v.projections, v.technical, v.packing, v.skeleton_bound, v.tiling, v.arcs,
                static_cast<unsigned long long>(v.samples), static_cast<unsigned long long>(v.violations), t)};
}

Outcome product_inequality() {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-0.45, 0.45), ang(0, 3.14159265358979);
    std::size_t checks = 0, fails = 0;
    for (int it = 0; it < 100; ++it) {
        BallUnion k;
        k.radius = std::ldexp(1.0, -(5 + it % 6));
        int count = 5 + it % 40;
        Direction e = direction_from_angle(ang(rng));
        Rotation r = rotate_to(e);  // r(0,1) = e: coordinates in the frame (xi, e)
        for (int i = 0; i < count; ++i) {
            Point c{u(rng), u(rng)};
            // express c in the orthonormal frame (e^perp, e)
            Point f{c.x * r.m00 + c.y * r.m10, c.x * r.m01 + c.y * r.m11};
            k.balls.push_back(Ball{f, k.radius});
        }
        for (int j = 4; j <= 10; ++j) {
            double delta = std::ldexp(1.0, -j);
            auto n2 = covering_number_2d(k, delta);
            auto nx = mesh_count_1d(project_union(k, Direction{1, 0, {}}), delta);
            auto ny = mesh_count_1d(project_union(k, Direction{0, 1, {}}), delta);
            ++checks;
            if (n2 > nx * ny) ++fails;
        }
    }
    return {fails == 0, fmt("%zu (union, axis pair, scale) checks, %zu failures", checks, fails)};
}

Outcome sandwich() {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> u(0, 1000);
    std::size_t fails = 0;
    for (int it = 0; it < 10000; ++it) {
        QIntervalUnion q;
        int m = 1 + it % 8;
        for (int i = 0; i < m; ++i) {
            Q a = make_q(u(rng), 97);
            q.iv.push_back({a, Q(a + make_q(u(rng) % 200, 89))});
        }
        q.normalize();
        Q d = make_q(1 + u(rng) % 300, 1013);
        auto big = covering_number_1d(q, Q(2 * d));
        auto pack = packing_number_1d(q, d);
        auto small = covering_number_1d(q, Q(d / 2));
        if (!(big <= pack && pack <= small)) ++fails;
    }
    return {fails == 0, fmt("10000 random unions, %zu violations", fails)};
}

Outcome bound_identities() {
    double worst_fixed = 0, worst_limit = 0;
    for (int i = 1; i <= 50; ++i) {
        double g = i / 51.0;
        for (int j = 1; j <= 50; ++j) {
            double s = g * j / 51.0;
            double rho = g / (g + s * (g - 1));
            auto it = exponent_iteration(s, g, rho, 0.0, 0);
            worst_fixed = std::max(worst_fixed, std::fabs(it.limit - estimate_bound1(g, s)));
        }
        double gg = i / 50.0;
        worst_limit = std::max({worst_limit, std::fabs(estimate_bound1(gg, gg) - 1),
                                std::fabs(estimate_bound1(gg, gg / 2) - gg / (1 + gg)),
                                std::fabs(estimate_bound2(gg, gg / 2) - gg / 2),
                                std::fabs(estimate_bound2(gg, gg) - (2 - gg))});
    }
    bool exact = true;
    for (long a = 0; a <= 200; ++a) {
        Q g = make_q(a, 100);
        exact = exact && falconer_howroyd_threshold(g, Q(1)) == 2 * g / (2 + g);
    }
    return {worst_fixed <= 1e-12 && worst_limit <= 1e-12 && exact,
            fmt("fixed point max error %.3g, limit values max error %.3g, exact threshold identity %s", worst_fixed,
                worst_limit, exact ? "holds" : "FAILS")};
}

Outcome box_dimension() {
    double worst = 0;
    for (double s : {0.25, 0.5, 1.0, 1.5}) {
        ScaleProfile p;
        for (int k = 1; k <= 24; ++k) {
            double d = std::ldexp(1.0, -k);
            p.entries.push_back({d, std::pow(d, -s), -1});
        }
        worst = std::max(worst, std::fabs(estimate_box_dimension(p).slope - s));
    }
    auto h = construct_main2(default_main2_params(Q(1), 3));
    const std::size_t j = 3, dirs = 8;
    Q inv = 1 / h.levels[j].ell;
    long kmax = static_cast<long>(mpz_sizeinbase(inv.get_num().get_mpz_t(), 2)) - 1;  // floor log2(1/ell)
    auto sw = main2_arc_sweep(h, j, dirs, kmax);
    std::vector<ScaleProfile> prof(dirs);
    for (auto& p : sw) prof[p.direction_index].entries.push_back({p.delta.get_d(), p.n.get_d(), -1});
    double slope = 0;
    std::size_t used = 0;
    for (auto& p : prof) {
        if (p.entries.size() < 3) continue;
        ++used;
        slope = std::max(slope, estimate_box_dimension(p, 1).slope);
    }
    return {worst <= 1e-9 && used > 0 && slope <= 0.55,
            fmt("synthetic max error %.3g; generation-3 sweep over %zu arc directions, scales 2^0..2^-%ld, max slope %.4f",
                worst, used, kmax, slope)};
}

Outcome bounded_tree() {
    auto t0 = std::chrono::steady_clock::now();
    BigExParams p;
    p.sigma = make_q(19, 25);
    p.depth = 1;
    auto t = construct_bigex(p);
    double secs = seconds_since(t0);
    bool cw = !t.expansions.empty(), disjoint = !t.expansions.empty();
    for (auto& x : t.expansions) {
        cw = cw && x.c_w < 2;
        disjoint = disjoint && x.arcs_disjoint;
    }
    return {t.ok() && t.ind_failures == 0 && t.ind_checks > 0 && cw && disjoint && secs < 300,
            fmt("d=%ld, %zu vertices, %llu (IND) checks, %llu failures, c_w<2 %s, arcs disjoint %s, %.2fs", t.d,
                t.vertices.size(), static_cast<unsigned long long>(t.ind_checks),
                static_cast<unsigned long long>(t.ind_failures), cw ? "yes" : "no", disjoint ? "yes" : "no", secs)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {"grid projection bound", grid_lemma},
        {"skeleton line intersections", line_intersect},
        {"exceptional direction count", exceptional_directions},
        {"tube scan exceptional count", marstrand},
        {"null projection cascade", null_projection_cascade},
        {"small projection square/arc pair", small_projection_pair},
        {"product inequality", product_inequality},
        {"1-D sandwich", sandwich},
        {"bound identities", bound_identities},
        {"box-dimension estimator", box_dimension},
        {"bounded-depth tree", bounded_tree},
    };
    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        Outcome o;
        try {
            o = all[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", all.size() - failed, all.size());
    return failed ? 1 : 0;
}
