#include "projlab/constructions.hpp"

#include "projlab/covering.hpp"
#include "projlab/parallel.hpp"
#include "rational_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace projlab {

namespace {

void guard(const Z& count, std::uint64_t cap, const std::string& what) {
    if (count > Z(static_cast<unsigned long>(cap)))
        throw SizeCapError(what + " needs " + count.get_str() + " objects, above the cap " + std::to_string(cap),
                           count.get_str());
}

long double tag_angle(const RationalTag& t) { return std::atan2(static_cast<long double>(t.p), static_cast<long double>(t.q)); }

ExactDir tag_dir(const RationalTag& t) { return make_exact_dir(Z(t.q), Z(t.p)); }

Z tag_weight(const RationalTag& t) { return Z((1 + std::labs(t.p))) * Z((1 + std::labs(t.q))); }

// exponent gamma/2 * k as a reduced fraction (num, den)
std::pair<long, long> half_gamma_times(const Q& gamma, long k) {
    Q e = gamma * k / 2;
    e.canonicalize();
    return {e.get_num().get_si(), e.get_den().get_si()};
}

}  // namespace

Main2Params default_main2_params(const Q& gamma, int depth) {
    if (gamma <= 0 || gamma >= 2) throw std::invalid_argument("construct_main2: gamma must lie in (0,2)");
    if (depth < 1) throw std::invalid_argument("construct_main2: depth must be positive");
    Main2Params p;
    p.gamma = gamma;
    p.depth = depth;
    // gamma_j = 2/k_j increases with j; needs k_j gamma > 2
    long k0 = std::max<long>(40, ceil_q(Q(2) / gamma).get_si() + depth + 2);
    for (int j = 1; j <= depth; ++j) {
        p.k.push_back(k0 - (j - 1));
        p.t.push_back(make_q(j, 100));
    }
    return p;
}

Main2History construct_main2(const Main2Params& p, std::uint64_t cap) {
    if (p.gamma <= 0 || p.gamma >= 2) throw std::invalid_argument("construct_main2: gamma must lie in (0,2)");
    if (p.depth < 0 || static_cast<int>(p.k.size()) < p.depth || static_cast<int>(p.t.size()) < p.depth)
        throw std::invalid_argument("construct_main2: need k_j and t_j for every level");
    for (int j = 0; j < p.depth; ++j) {
        if (p.t[j] <= 0 || p.t[j] >= 1) throw std::invalid_argument("construct_main2: t_j must lie in (0,1)");
        if (p.k[j] * p.gamma <= 2) throw std::invalid_argument("construct_main2: need gamma_j = 2/k_j < gamma");
        if (j > 0 && (p.k[j] >= p.k[j - 1] || p.t[j] <= p.t[j - 1]))
            throw std::invalid_argument("construct_main2: gamma_j and t_j must increase");
    }
    Main2History h;
    h.gamma = p.gamma;
    Main2Level l0;
    l0.n = 1;
    l0.m = 1;
    l0.ell = 1;
    l0.super_side = 1;
    l0.q = 1;
    l0.M = 2;
    l0.r = 1;
    l0.tags = {RationalTag{0, 1}};
    l0.tag_parent = {0};
    l0.den = 2;
    l0.centers = {{Z(1), Z(1)}};
    l0.center_parent = {0};
    h.levels.push_back(l0);
    for (int j = 1; j <= p.depth; ++j) {
        const Main2Level& pr = h.levels.back();
        Main2Level lv;
        lv.j = j;
        lv.k = p.k[j - 1];
        lv.gamma_j = make_q(2, lv.k);
        lv.t = p.t[j - 1];
        lv.n = choose_nj(lv.t, pr.r);
        guard(Z(static_cast<unsigned long>(pr.tags.size())) * lv.n, cap, "construct_main2 arcs at level " + std::to_string(j));
        unsigned long n = lv.n.get_ui();
        long c = static_cast<long>((n - 1) / 2);
        long double rp = to_ldouble(pr.r), hstep = rp / static_cast<long double>(n + 1);
        for (std::size_t a = 0; a < pr.tags.size(); ++a) {
            long double th = tag_angle(pr.tags[a]);
            for (unsigned long i = 0; i < n; ++i) {
                RationalTag t = pr.tags[a];
                if (static_cast<long>(i) != c) {
                    long double target = th + (static_cast<long double>(i) - c) * hstep;
                    Q lo = q_from_double(static_cast<double>(std::tan(target - hstep / 4)));
                    Q hi = q_from_double(static_cast<double>(std::tan(target + hstep / 4)));
                    Q f = detail::simplest_rational(lo, hi);
                    if (!f.get_num().fits_slong_p() || !f.get_den().fits_slong_p())
                        throw std::overflow_error("construct_main2: midpoint tag too large");
                    t = RationalTag{f.get_num().get_si(), f.get_den().get_si()};
                }
                lv.tags.push_back(t);
                lv.tag_parent.push_back(a);
            }
        }
        lv.M = 0;
        for (auto& t : lv.tags) lv.M = std::max(lv.M, tag_weight(t));
        // smallest m with m^(1-k) < ell_{j-1} and q_{j-1} max(4, 10 M) <= m^((k gamma - 2)/2)
        Q ex = (lv.k * p.gamma - 2) / 2;
        ex.canonicalize();
        long exn = ex.get_num().get_si(), exd = ex.get_den().get_si();
        Q need = Q(pr.q * std::max(Z(4), Z(10 * lv.M)));
        Z m = 2;
        while (!(pow_q(Q(m), 1 - lv.k) < pr.ell && cmp_with_power(need, Q(m), exn, exd) <= 0)) ++m;
        lv.m = m;
        lv.ell = pow_q(Q(m), -lv.k);
        lv.super_side = Q(m) * lv.ell;
        lv.q = pr.q * m * m;
        guard(lv.q, cap, "construct_main2 squares at level " + std::to_string(j));
        // r_j = 1 / (2 (4 q_j^2)^(1/gamma)), exact when 1/gamma is an integer
        Q inv = 1 / p.gamma;
        inv.canonicalize();
        if (inv.get_den() == 1) {
            lv.r = make_q(Z(1), 2 * pow_z(4 * lv.q * lv.q, inv.get_num().get_ui()));
        } else {
            long double v = 0.5L / std::pow(to_ldouble(Q(4 * lv.q * lv.q)), to_ldouble(inv));
            lv.r = q_from_double(static_cast<double>(v * (1 - 1e-12L)));
        }
        // integer coordinates: den_j = den_{j-1} m^k, child offsets (2i - (m-1)) den_{j-1} / 2
        Z scale = pow_z(m, static_cast<unsigned long>(lv.k));
        lv.den = pr.den * scale;
        Z half = pr.den / 2;
        unsigned long mm = m.get_ui();
        lv.centers.reserve(pr.centers.size() * mm * mm);
        for (std::size_t a = 0; a < pr.centers.size(); ++a) {
            Z px = pr.centers[a].first * scale, py = pr.centers[a].second * scale;
            for (unsigned long iy = 0; iy < mm; ++iy)
                for (unsigned long ix = 0; ix < mm; ++ix) {
                    Z ox = (2 * static_cast<long>(ix) - static_cast<long>(mm - 1)) * half;
                    Z oy = (2 * static_cast<long>(iy) - static_cast<long>(mm - 1)) * half;
                    lv.centers.push_back({px + ox, py + oy});
                    lv.center_parent.push_back(a);
                }
        }
        h.levels.push_back(std::move(lv));
    }
    return h;
}

Generation Main2History::generation(std::size_t j) const {
    const Main2Level& lv = levels.at(j);
    Generation g;
    g.level = static_cast<int>(j);
    g.squares = true;
    g.square_set.side = lv.ell;
    for (auto& [x, y] : lv.centers) g.square_set.centers.push_back({make_q(x, lv.den), make_q(y, lv.den)});
    for (auto& t : lv.tags) g.arcs.push_back(Arc{static_cast<double>(tag_angle(t)), to_double(lv.r)});
    g.params = {{"k", std::to_string(lv.k)}, {"n", lv.n.get_str()}, {"m", lv.m.get_str()},
                {"ell", lv.ell.get_str()}, {"q", lv.q.get_str()}, {"M", lv.M.get_str()}, {"r", lv.r.get_str()}};
    return g;
}

namespace {

// sampled Pythagorean directions inside the arc of length r around angle th
std::vector<ExactDir> arc_samples(long double th, long double r, int count) {
    std::vector<ExactDir> out;
    for (int i = 0; i < count; ++i) {
        long double off = (static_cast<long double>(i) + 0.5L) / count * r - r / 2;
        ExactDir u = detail::pythagorean_near(th + off, r / (4.0L * count));
        if (detail::angular_gap(detail::angle_ld(u), th) > r / 2)
            throw std::logic_error("verify_main2: sample left the arc");
        out.push_back(u);
    }
    return out;
}

// dyadic exponents k_i = floor(i kmax / (count-1)), deduplicated
std::vector<long> dyadic_exponents(long kmax, int count) {
    std::vector<long> ks;
    for (int i = 0; i < count; ++i) {
        long k = count == 1 ? 0 : static_cast<long>((static_cast<long long>(i) * kmax) / (count - 1));
        if (ks.empty() || ks.back() != k) ks.push_back(k);
    }
    return ks;
}

// floor(log2(1/ell)) for ell <= 1
long log2_floor_inv(const Q& ell) {
    Z inv = floor_q(1 / ell);
    return static_cast<long>(mpz_sizeinbase(inv.get_mpz_t(), 2)) - 1;
}

}  // namespace

Main2Verification verify_main2(const Main2History& h, int samples_per_arc, int scales_per_level, unsigned threads) {
    if (samples_per_arc < 1 || scales_per_level < 1) throw std::invalid_argument("verify_main2: need samples and scales");
    Main2Verification v;
    v.nesting = v.rational_tags = v.projections = v.technical = v.packing = v.skeleton_bound = v.tiling = v.arcs = true;
    auto fail = [&v](bool& flag, const std::string& w) {
        flag = false;
        ++v.violations;
        if (v.witnesses.size() < 20) v.witnesses.push_back(w);
    };
    const Q& gamma = h.gamma;
    for (std::size_t j = 0; j < h.levels.size(); ++j) {
        const Main2Level& lv = h.levels[j];
        for (auto& t : lv.tags)
            if (t.q == 0) fail(v.rational_tags, "level " + std::to_string(j) + ": tag with q = 0");
        if (j == 0) continue;
        const Main2Level& pr = h.levels[j - 1];
        Z scale = lv.den / pr.den;
        unsigned long mm = lv.m.get_ui();
        // (ii) parent tags persist
        for (std::size_t a = 0; a < pr.tags.size(); ++a) {
            bool found = false;
            for (std::size_t i = 0; i < lv.tags.size(); ++i)
                if (lv.tag_parent[i] == a && lv.tags[i].p == pr.tags[a].p && lv.tags[i].q == pr.tags[a].q) found = true;
            if (!found) fail(v.rational_tags, "level " + std::to_string(j) + ": parent tag missing");
        }
        // (i), tiling, (iv): children of each parent form an m x m lattice of spacing ell_j centred at the parent
        Z ell_d = pr.den;  // ell_j * den_j
        Z parent_half = Q(Q(pr.ell) * Q(lv.den) / 2).get_num();  // ell_{j-1} den_j / 2
        for (std::size_t a = 0; a < pr.centers.size(); ++a) {
            Z px = pr.centers[a].first * scale, py = pr.centers[a].second * scale;
            std::vector<std::pair<Z, Z>> kids;
            for (std::size_t i = a * mm * mm; i < (a + 1) * mm * mm; ++i) {
                if (lv.center_parent[i] != a) fail(v.tiling, "level " + std::to_string(j) + ": child order");
                kids.push_back({lv.centers[i].first - px, lv.centers[i].second - py});
            }
            bool parent_covered = false;
            for (auto& [dx, dy] : kids) {
                // child square inside parent square
                if (abs(dx) + ell_d / 2 > parent_half || abs(dy) + ell_d / 2 > parent_half)
                    fail(v.nesting, "level " + std::to_string(j) + ": child square leaves its parent");
                if (2 * abs(dx) <= ell_d && 2 * abs(dy) <= ell_d) parent_covered = true;
                // lattice position (2i - (m-1)) ell/2
                Q ix = (Q(dx) * 2 / Q(ell_d) + Q(static_cast<long>(mm) - 1)) / 2;
                Q iy = (Q(dy) * 2 / Q(ell_d) + Q(static_cast<long>(mm) - 1)) / 2;
                if (ix.get_den() != 1 || iy.get_den() != 1 || ix < 0 || iy < 0 || ix >= Q(static_cast<long>(mm)) ||
                    iy >= Q(static_cast<long>(mm)))
                    fail(v.tiling, "level " + std::to_string(j) + ": child off the lattice");
            }
            std::sort(kids.begin(), kids.end());
            if (std::unique(kids.begin(), kids.end()) != kids.end())
                fail(v.tiling, "level " + std::to_string(j) + ": repeated child");
            if (!parent_covered) fail(v.nesting, "level " + std::to_string(j) + ": parent midpoint not in K_j");
            // distinct lattice points at spacing ell_j pack with radius ell_j/2; m^2 = ell_j^(-gamma_j)
            if (kids.size() != mm * mm) fail(v.packing, "level " + std::to_string(j) + ": packing count");
        }
        if (lv.super_side > pr.ell || lv.super_side != Q(lv.m) * lv.ell)
            fail(v.tiling, "level " + std::to_string(j) + ": block side");
        // arcs (P1)-(P3) in long double
        {
            unsigned long tp = lv.t.get_num().get_ui(), tq = lv.t.get_den().get_ui();
            if (!(Q(pow_z(lv.n, tq - tp)) * pow_q(pr.r, static_cast<long>(tp)) >= Q(pow_z(10, tq))) || !(lv.r < pr.r))
                fail(v.arcs, "level " + std::to_string(j) + ": (P1)");
            long double rp = to_ldouble(pr.r), r = to_ldouble(lv.r);
            long double sep_need = rp / (10.0L * to_ldouble(Q(lv.n)));
            unsigned long n = lv.n.get_ui();
            for (std::size_t a = 0; a < pr.tags.size(); ++a) {
                long double th = tag_angle(pr.tags[a]);
                std::vector<long double> ang;
                for (std::size_t i = a * n; i < (a + 1) * n; ++i) ang.push_back(tag_angle(lv.tags[i]));
                std::sort(ang.begin(), ang.end());
                for (std::size_t i = 0; i < ang.size(); ++i) {
                    long double off = std::fabs(ang[i] - th);
                    if (!(off < rp / 2)) fail(v.arcs, "level " + std::to_string(j) + ": (P2) midpoint outside arc");
                    if (!(off + r / 2 <= rp / 2)) fail(v.arcs, "level " + std::to_string(j) + ": (P3) containment");
                    if (i > 0) {
                        long double gap = ang[i] - ang[i - 1];
                        if (!(2 * std::sin(gap / 2) > sep_need)) fail(v.arcs, "level " + std::to_string(j) + ": (P2) spacing");
                        if (!(gap > r)) fail(v.arcs, "level " + std::to_string(j) + ": (P3) overlap");
                    }
                }
            }
        }
        // skeleton projection bound on every tag direction
        {
            auto [gn, gd] = half_gamma_times(gamma, lv.k);
            if (cmp_with_power(Q(10 * pr.q * lv.M * lv.m), Q(lv.m), gn, gd) > 0)
                fail(v.skeleton_bound, "level " + std::to_string(j) + ": q_{j-1} M_j m exceeds ell^(-gamma/2)/10");
            std::vector<char> okv(lv.tags.size(), 1);
            parallel_for(lv.tags.size(), threads, [&](std::size_t i) {
                ExactDir e = tag_dir(lv.tags[i]);
                std::vector<Z> vals;
                vals.reserve(lv.centers.size());
                for (auto& [x, y] : lv.centers) vals.push_back(e.a * x + e.b * y);
                std::sort(vals.begin(), vals.end());
                Z card = static_cast<unsigned long>(std::unique(vals.begin(), vals.end()) - vals.begin());
                okv[i] = card <= pr.q * tag_weight(lv.tags[i]) * lv.m;
            });
            for (std::size_t i = 0; i < okv.size(); ++i)
                if (!okv[i])
                    fail(v.skeleton_bound, "level " + std::to_string(j) + ": tag " + std::to_string(lv.tags[i].p) + "/" +
                                      std::to_string(lv.tags[i].q) + " exceeds the grid bound");
        }
    }
    // (iii): K_j is the union of the blocks of side m ell_j around C_{j-1}, so project those
    for (std::size_t j = 0; j < h.levels.size(); ++j) {
        const Main2Level& lv = h.levels[j];
        const std::vector<std::pair<Z, Z>>& blocks = j == 0 ? lv.centers : h.levels[j - 1].centers;
        Z bscale = j == 0 ? Z(1) : lv.den / h.levels[j - 1].den;
        Z block_side_d = j == 0 ? lv.den : Q(lv.super_side * Q(lv.den)).get_num();  // side * den_j
        auto [gn2, gd2] = half_gamma_times(gamma, 1);  // gamma/2
        long kmax = log2_floor_inv(lv.ell);
        std::vector<long> ks = dyadic_exponents(kmax, scales_per_level);
        std::vector<std::uint64_t> bad(lv.tags.size(), 0), checks(lv.tags.size(), 0);
        std::vector<std::string> wit(lv.tags.size());
        long double r = to_ldouble(lv.r);
        parallel_for(lv.tags.size(), threads, [&](std::size_t i) {
            std::vector<ExactDir> us = arc_samples(tag_angle(lv.tags[i]), r, samples_per_arc);
            std::vector<std::pair<Z, Z>> iv;
            for (auto& u : us) {
                Z nu = detail::exact_sqrt(u.a * u.a + u.b * u.b);
                Z hw = block_side_d * (abs(u.a) + abs(u.b));  // twice the half-width, units 1/(2 den_j)
                iv.clear();
                for (auto& [x, y] : blocks) {
                    Z s2 = 2 * (u.a * x + u.b * y) * bscale;
                    iv.push_back({s2 - hw, s2 + hw});
                }
                merge_int_intervals(iv);
                for (long k : ks) {
                    ++checks[i];
                    // radius 2^-k is a piece of length 4 nu den_j / 2^k in these units
                    Z cnt = covering_number_int(iv, 4 * nu * lv.den, pow_z(2, static_cast<unsigned long>(k)));
                    // N <= 2^(k gamma/2)
                    if (cmp_with_power(Q(cnt), Q(pow_z(2, static_cast<unsigned long>(k))), gn2, gd2) > 0) {
                        ++bad[i];
                        if (wit[i].empty()) wit[i] = "N=" + cnt.get_str() + " at l=2^-" + std::to_string(k);
                    }
                }
            }
        });
        for (std::size_t i = 0; i < bad.size(); ++i) {
            v.samples += checks[i];
            if (bad[i]) {
                v.projections = false;
                v.violations += bad[i];
                if (v.witnesses.size() < 20)
                    v.witnesses.push_back("level " + std::to_string(j) + " arc " + std::to_string(i) + ": " + wit[i]);
            }
        }
        // technical hypothesis: each shrunken square projects to length <= sqrt(2) l < 2 l, so N <= q_j;
        // q_j <= ell_j^(-gamma/2) gives the bound for every l <= ell_j
        auto [gkn, gkd] = half_gamma_times(gamma, lv.k);
        bool counting = j == 0 ? true : cmp_with_power(Q(lv.q), Q(lv.m), gkn, gkd) <= 0;
        if (!counting) fail(v.technical, "level " + std::to_string(j) + ": q_j exceeds ell_j^(-gamma/2)");
        // direct check on the first sample of each arc at l = ell_j 2^-i
        std::vector<char> tech(lv.tags.size(), 1);
        Z ell_d = j == 0 ? lv.den : h.levels[j - 1].den;  // ell_j den_j
        parallel_for(lv.tags.size(), threads, [&](std::size_t i) {
            ExactDir u = arc_samples(tag_angle(lv.tags[i]), r, samples_per_arc).front();
            Z nu = detail::exact_sqrt(u.a * u.a + u.b * u.b);
            std::vector<std::pair<Z, Z>> iv;
            for (unsigned long s = 0; s < 4; ++s) {
                // units 1/(den_j 2^(s+1)); half-width l/2 (|a|+|b|) = ell_d (|a|+|b|)
                Z f = pow_z(2, s + 1);
                Z hw = ell_d * (abs(u.a) + abs(u.b));
                iv.clear();
                for (auto& [x, y] : lv.centers) {
                    Z c = (u.a * x + u.b * y) * f;
                    iv.push_back({c - hw, c + hw});
                }
                merge_int_intervals(iv);
                Z cnt = covering_number_int(iv, 4 * nu * ell_d, 1);
                Q l = lv.ell / Q(pow_z(2, s));
                // N <= l^(-gamma/2)
                if (cmp_with_power(Q(cnt), 1 / l, gn2, gd2) > 0) tech[i] = 0;
            }
        });
        for (std::size_t i = 0; i < tech.size(); ++i)
            if (!tech[i]) fail(v.technical, "level " + std::to_string(j) + " arc " + std::to_string(i) + ": shrunken squares");
    }
    return v;
}

std::vector<SweepPoint> main2_arc_sweep(const Main2History& h, std::size_t j, std::size_t max_dirs, long kmax,
                                        unsigned threads) {
    const Main2Level& lv = h.levels.at(j);
    std::size_t nd = std::min(max_dirs, lv.tags.size());
    SquareUnion k;
    if (j == 0) {
        k.side = 1;
        k.centers = {{Q(1, 2), Q(1, 2)}};
    } else {
        const Main2Level& pr = h.levels[j - 1];
        k.side = lv.super_side;
        for (auto& [x, y] : pr.centers) k.centers.push_back({make_q(x, pr.den), make_q(y, pr.den)});
    }
    std::vector<std::vector<SweepPoint>> rows(nd);
    parallel_for(nd, threads, [&](std::size_t i) {
        ExactDir e = tag_dir(lv.tags[i]);
        QIntervalUnion u = project_squares_exact(k, e);
        u.normalize();
        QNIntervalUnion un = to_qn(u, e.nu2());
        for (long s = 0; s <= kmax; ++s) {
            Q delta = pow_q(Q(2), -s);
            rows[i].push_back({i, delta, covering_number_qn(un, delta)});
        }
    });
    std::vector<SweepPoint> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

}  // namespace projlab
