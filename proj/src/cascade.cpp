#include "projlab/constructions.hpp"

#include "rational_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace projlab {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void guard(const Z& count, std::uint64_t cap, const std::string& what) {
    if (count > Z(static_cast<unsigned long>(cap)))
        throw SizeCapError(what + " needs " + count.get_str() + " objects, above the cap " + std::to_string(cap),
                           count.get_str());
}

}  // namespace

void write_generation(std::ostream& os, const Generation& g) {
    if (g.squares) {
        os << "#squares " << g.level << ' ' << g.square_set.side.get_str() << '\n';
        for (auto& c : g.square_set.centers) os << c.x.get_str() << ' ' << c.y.get_str() << '\n';
    } else if (!g.balls.centers.empty()) {
        os << "#balls " << g.level << ' ' << g.balls.radius.get_str() << '\n';
        for (auto& c : g.balls.centers) os << c.x.get_str() << ' ' << c.y.get_str() << '\n';
    }
    os << "#arcs " << g.level << '\n';
    for (auto& a : g.arcs) {
        Direction m = a.midpoint();
        os << fmt(m.x) << ' ' << fmt(m.y) << ' ' << fmt(a.length) << '\n';
    }
}

MainParams default_main_params(int count) {
    if (count < 1) throw std::invalid_argument("default_main_params: count must be positive");
    MainParams p;
    p.dirs.push_back(make_exact_dir(1, 0));
    // Calkin-Wilf enumeration of the positive rationals t = tan(angle/2)
    Q t = 1;
    while (static_cast<int>(p.dirs.size()) < count) {
        p.dirs.push_back(detail::pythagorean_dir(t));
        Z f = floor_q(t);
        t = 1 / (2 * Q(f) - t + 1);
    }
    for (int n = 1; n <= count; ++n) p.s.push_back(make_q(10, 10 + n));
    return p;
}

std::pair<long, long> diagonal_pair(long step) {
    if (step < 1) throw std::invalid_argument("diagonal_pair: step must be positive");
    long row = 1;
    while (step > row) {
        step -= row;
        ++row;
    }
    // row r lists (e_1, r), (e_2, r-1), ..., (e_r, 1)
    return {step, row + 1 - step};
}

Z main_subdivision(const Z& p, const Q& dm, const Q& s, long n) {
    if (p < 1 || dm <= 0 || s <= 0 || n < 1) throw std::invalid_argument("main_subdivision: bad parameters");
    long sp = s.get_num().get_si(), sq = s.get_den().get_si();
    Q target = make_q(Z(1), 2 * p);
    Z q = std::max(Z(2), ceil_q(dm * n));
    // p (dm/q)^s <= 1/2  <=>  (1/(2p))^sq >= (dm/q)^sp
    while (cmp_with_power(target, dm / Q(q), sp, sq) < 0) q *= 2;
    Z lo = std::max(Z(2), ceil_q(dm * n)), hi = q;
    while (lo < hi) {
        Z mid = (lo + hi) / 2;
        if (cmp_with_power(target, dm / Q(mid), sp, sq) >= 0) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

bool MainResult::ok() const {
    for (auto& s : steps)
        if (!s.cover_ok || !s.nested_ok || !s.content_ok || s.diameter_sum != 1) return false;
    return !steps.empty();
}

namespace {

// H^s_{1/n} proxy of the exact projection of `centers` (radius r) on the Pythagorean direction u,
// grouping children of the same parent into their convex hull
double content_proxy(const std::vector<QPoint>& centers, std::size_t group, const Q& r, const ExactDir& u,
                     const Q& s, long n) {
    Q nu = Q(detail::exact_sqrt(u.a * u.a + u.b * u.b));
    std::vector<std::pair<Q, Q>> hulls;
    for (std::size_t i = 0; i < centers.size(); i += group) {
        Q lo, hi;
        for (std::size_t k = i; k < i + group; ++k) {
            Q v = project_exact(centers[k], u) / nu;
            if (k == i || v < lo) lo = v;
            if (k == i || v > hi) hi = v;
        }
        hulls.push_back({lo - r, hi + r});
    }
    QIntervalUnion un;
    un.iv = std::move(hulls);
    un.normalize();
    long double total = 0, sd = to_ldouble(s);
    for (auto& [a, b] : un.iv) {
        Q len = b - a;
        Z k = std::max(Z(1), ceil_q(len * n));
        long double piece = to_ldouble(Q(len / Q(k)));
        total += to_ldouble(Q(k)) * std::pow(piece, sd);
    }
    return static_cast<double>(total);
}

}  // namespace

MainResult construct_main(const MainParams& params, int steps, int content_samples, std::uint64_t cap) {
    if (steps < 1) throw std::invalid_argument("construct_main: steps must be positive");
    if (content_samples < 1) throw std::invalid_argument("construct_main: need at least one content sample");
    for (std::size_t i = 1; i < params.s.size(); ++i)
        if (!(params.s[i] < params.s[i - 1]) || params.s[i] <= 0)
            throw std::invalid_argument("construct_main: exponents must decrease strictly and stay positive");
    MainResult res;
    QBallUnion k = unit_ball();
    for (long step = 1; step <= steps; ++step) {
        auto [m, n] = diagonal_pair(step);
        if (m > static_cast<long>(params.dirs.size()) || n > static_cast<long>(params.s.size()))
            throw std::invalid_argument("construct_main: not enough directions or exponents for step " +
                                        std::to_string(step));
        MainStep st;
        st.step = step;
        st.m = m;
        st.n = n;
        st.e = params.dirs[static_cast<std::size_t>(m - 1)];
        st.s = params.s[static_cast<std::size_t>(n - 1)];
        st.p = static_cast<unsigned long>(k.centers.size());
        st.dm = 2 * k.radius;
        Generation g;
        g.level = static_cast<int>(step - 1);
        if (step == 1) {
            // K(e_1,1) = B(0,1/2), J(e_1,1) = S^1; content 1 for every exponent
            st.q = 1;
            st.cover_ok = true;
            st.nested_ok = true;
            st.diameter_sum = 1;
            st.content_max = 1.0;
            st.content_ok = true;
            g.arcs.push_back(Arc{0.0, 2 * std::numbers::pi});
        } else {
            Z nu = detail::exact_sqrt(st.e.a * st.e.a + st.e.b * st.e.b);
            st.q = main_subdivision(st.p, st.dm, st.s, n);
            guard(st.p * st.q, cap, "construct_main step " + std::to_string(step));
            unsigned long q = st.q.get_ui();
            Q piece = st.dm / Q(st.q);
            // unit normal to e, exact since e is Pythagorean
            Q px = Q(-st.e.b) / Q(nu), py = Q(st.e.a) / Q(nu);
            QBallUnion next;
            next.radius = piece / 2;
            next.centers.reserve(k.centers.size() * q);
            st.nested_ok = true;
            bool same_projection = true;
            for (auto& c : k.centers) {
                Q pc = project_exact(c, st.e);
                for (unsigned long i = 0; i < q; ++i) {
                    Q off = make_q(static_cast<long>(2 * i + 1) - static_cast<long>(q), 2) * piece;
                    QPoint child{c.x + off * px, c.y + off * py};
                    Q dx = child.x - c.x, dy = child.y - c.y;
                    Q slack = k.radius - next.radius;
                    if (slack < 0 || dx * dx + dy * dy > slack * slack) st.nested_ok = false;
                    if (project_exact(child, st.e) != pc) same_projection = false;
                    next.centers.push_back(child);
                }
            }
            // the projection is p intervals of length dm/q
            long sp = st.s.get_num().get_si(), sq = st.s.get_den().get_si();
            st.cover_ok = same_projection && cmp_with_power(make_q(Z(1), 2 * st.p), piece, sp, sq) >= 0;
            k = std::move(next);
            st.diameter_sum = Q(static_cast<unsigned long>(k.centers.size())) * 2 * k.radius;
            double w = to_double(piece);
            double theta = angle_of(st.e);
            g.arcs.push_back(Arc{theta, w});
            st.content_samples = static_cast<std::size_t>(content_samples);
            for (int i = 0; i < content_samples; ++i) {
                long double off = (static_cast<long double>(i) + 0.5L) / content_samples * w - w / 2.0L;
                ExactDir u = detail::pythagorean_near(theta + off, w / (4.0L * content_samples));
                if (detail::angular_gap(detail::angle_ld(u), theta) >= w / 2.0L)
                    throw std::logic_error("construct_main: content sample left the arc");
                double v = content_proxy(k.centers, q, k.radius, u, st.s, n);
                st.content_max = std::max(st.content_max, v);
            }
            st.content_ok = st.content_max <= 1.0;
        }
        g.balls = k;
        g.params = {{"m", std::to_string(m)},
                    {"n", std::to_string(n)},
                    {"p", st.p.get_str()},
                    {"dm", st.dm.get_str()},
                    {"q", st.q.get_str()},
                    {"s", st.s.get_str()}};
        res.generations.push_back(std::move(g));
        res.steps.push_back(std::move(st));
    }
    return res;
}

Z choose_nj(const Q& t, const Q& r_prev) {
    if (t <= 0 || t >= 1) throw std::invalid_argument("choose_nj: t must lie in (0,1)");
    if (r_prev <= 0) throw std::invalid_argument("choose_nj: r must be positive");
    unsigned long tp = t.get_num().get_ui(), tq = t.get_den().get_ui();
    // n^(tq - tp) r^tp >= 10^tq
    Q rhs = Q(pow_z(10, tq)) / pow_q(r_prev, static_cast<long>(tp));
    auto ok = [&](const Z& n) { return Q(pow_z(n, tq - tp)) >= rhs; };
    long double approx = std::pow(10.0L / std::pow(to_ldouble(r_prev), to_ldouble(t)), 1.0L / (1.0L - to_ldouble(t)));
    Z hi = approx < 1e18L ? Z(static_cast<unsigned long>(std::max(1.0L, std::ceil(approx)))) : Z(1);
    while (!ok(hi)) hi *= 2;
    Z lo = 1;
    while (lo < hi) {
        Z mid = (lo + hi) / 2;
        if (ok(mid)) hi = mid;
        else lo = mid + 1;
    }
    Z n = lo;
    return n;
}

bool SetEResult::ok() const {
    for (std::size_t j = 1; j < levels.size(); ++j)
        if (!levels[j].p1 || !levels[j].p2 || !levels[j].p3 || levels[j].packing_min < levels[j].n.get_ui())
            return false;
    return true;
}

SetEResult construct_setE(const std::vector<Q>& t, int depth, std::uint64_t cap) {
    if (depth < 0) throw std::invalid_argument("construct_setE: depth must be non-negative");
    if (static_cast<int>(t.size()) < depth) throw std::invalid_argument("construct_setE: need t_j for every level");
    for (int j = 0; j < depth; ++j) {
        if (t[j] <= 0 || t[j] >= 1) throw std::invalid_argument("construct_setE: t_j must lie in (0,1)");
        if (j > 0 && t[j] <= t[j - 1]) throw std::invalid_argument("construct_setE: t_j must increase");
    }
    SetEResult res;
    SetELevel l0;
    l0.n = 1;
    l0.r = 1;
    l0.midpoints = {0.0};
    l0.p1 = l0.p2 = l0.p3 = true;
    res.levels.push_back(l0);
    std::vector<Q> offsets_prev{Q(0)};  // exact angles relative to (1,0), via rational offsets
    for (int j = 1; j <= depth; ++j) {
        const SetELevel& prev = res.levels.back();
        SetELevel lv;
        lv.j = j;
        lv.t = t[j - 1];
        lv.n = choose_nj(lv.t, prev.r);
        guard(Z(static_cast<unsigned long>(offsets_prev.size())) * lv.n, cap, "construct_setE level " + std::to_string(j));
        unsigned long n = lv.n.get_ui();
        Q h = prev.r / Q(lv.n + 1);
        long c = static_cast<long>((n - 1) / 2);
        Q max_off = h * Q(std::max(c, static_cast<long>(n) - 1 - c));
        // largest power of 1/2 with disjoint children inside the parent arc
        lv.r = 1;
        while (!(lv.r < h && max_off + lv.r / 2 <= prev.r / 2)) lv.r /= 2;
        lv.p3 = true;
        lv.p2 = max_off < prev.r / 2 && 2 * std::sin(to_ldouble(h) / 2) > to_ldouble(prev.r / Q(10 * lv.n));
        {
            unsigned long tp = lv.t.get_num().get_ui(), tq = lv.t.get_den().get_ui();
            lv.p1 = Q(pow_z(lv.n, tq - tp)) * pow_q(prev.r, static_cast<long>(tp)) >= Q(pow_z(10, tq)) &&
                    lv.r < prev.r && lv.n >= prev.n;
        }
        std::vector<Q> offsets;
        offsets.reserve(offsets_prev.size() * n);
        for (auto& op : offsets_prev)
            for (unsigned long i = 0; i < n; ++i) offsets.push_back(op + Q(static_cast<long>(i) - c) * h);
        for (auto& o : offsets) lv.midpoints.push_back(to_double(o));
        // packing of each parent's midpoints at scale r_{j-1}/(10 n_j): chord distance >= 2 delta
        long double delta = to_ldouble(prev.r / Q(10 * lv.n));
        lv.packing_target = static_cast<double>(std::pow(delta, -to_ldouble(lv.t)));
        lv.packing_min = UINT64_MAX;
        for (std::size_t p = 0; p < offsets_prev.size(); ++p) {
            std::uint64_t count = 0;
            long double last = 0;
            for (unsigned long i = 0; i < n; ++i) {
                long double ang = to_ldouble(offsets[p * n + i]);
                if (count == 0 || 2 * std::sin((ang - last) / 2) >= 2 * delta) {
                    ++count;
                    last = ang;
                }
            }
            lv.packing_min = std::min(lv.packing_min, count);
        }
        offsets_prev = std::move(offsets);
        res.levels.push_back(std::move(lv));
    }
    for (auto& lv : res.levels) {
        Generation g;
        g.level = lv.j;
        for (double m : lv.midpoints) g.arcs.push_back(Arc{m, to_double(lv.r)});
        g.params = {{"n", lv.n.get_str()}, {"r", lv.r.get_str()}, {"t", lv.t.get_str()}};
        res.arcs.push_back(std::move(g));
    }
    return res;
}

}  // namespace projlab
