#include "projlab/constructions.hpp"

#include "projlab/covering.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

namespace projlab {

namespace {

void guard(const Z& count, std::uint64_t cap, const std::string& what) {
    if (count > Z(static_cast<unsigned long>(cap))) {
        throw SizeCapError(what + " needs " + count.get_str() + " objects, above the cap " + std::to_string(cap),
                           count.get_str());
    }
}

Z fact(long n) {
    if (n < 0) throw std::invalid_argument("factorial of a negative number");
    return factorial(static_cast<unsigned long>(n));
}

bool inside_unit_ball(const QPoint& c, const Q& r) {
    if (r > Q(1, 2)) return false;
    Q slack = Q(1, 2) - r;
    return c.x * c.x + c.y * c.y <= slack * slack;
}

}  // namespace

QBallUnion unit_ball() { return QBallUnion{{QPoint{0, 0}}, Q(1, 2)}; }

SquareUnion unit_square() { return SquareUnion{{QPoint{0, 0}}, Q(1)}; }

QBallUnion star_product(const QBallUnion& k1, const QBallUnion& k2, std::uint64_t cap) {
    for (auto* k : {&k1, &k2}) {
        if (k->radius <= 0) throw std::invalid_argument("star_product: radius must be positive");
        for (auto& c : k->centers)
            if (!inside_unit_ball(c, k->radius)) throw std::invalid_argument("star_product: input not inside B(0,1/2)");
    }
    guard(Z(static_cast<unsigned long>(k1.centers.size())) * static_cast<unsigned long>(k2.centers.size()), cap,
          "star_product");
    QBallUnion out;
    out.radius = 2 * k1.radius * k2.radius;
    out.centers.reserve(k1.centers.size() * k2.centers.size());
    Q scale = 2 * k1.radius;
    for (auto& c1 : k1.centers)
        for (auto& c2 : k2.centers) out.centers.push_back({c1.x + scale * c2.x, c1.y + scale * c2.y});
    return out;
}

QBallUnion star_power(const QBallUnion& k, int m, std::uint64_t cap) {
    if (m <= 0) throw std::invalid_argument("star_power: m must be positive");
    QBallUnion out = k;
    for (int i = 1; i < m; ++i) out = star_product(out, k, cap);
    return out;
}

SquareUnion square_star(const SquareUnion& a, const SquareUnion& b, std::uint64_t cap) {
    guard(Z(static_cast<unsigned long>(a.centers.size())) * static_cast<unsigned long>(b.centers.size()), cap,
          "square_star");
    SquareUnion out;
    out.side = a.side * b.side;
    out.centers.reserve(a.centers.size() * b.centers.size());
    for (auto& c1 : a.centers)
        for (auto& c2 : b.centers) out.centers.push_back({c1.x + a.side * c2.x, c1.y + a.side * c2.y});
    return out;
}

SquareUnion block_Q(long n) {
    if (n < 1) throw std::invalid_argument("block_Q: n must be positive");
    if (n == 1) return unit_square();
    SquareUnion out;
    if (n == 2) {
        out.side = Q(1, 4);
        for (int sy : {1, -1})
            for (int sx : {-1, 1}) out.centers.push_back({Q(sx, 8), Q(sy, 8)});
        return out;
    }
    out.side = Q(1, n * n);
    Q h = out.side / 2;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            out.centers.push_back({Q(-1, 2) + h + make_q(j, n), Q(1, 2) - h - make_q(i, n)});
    return out;
}

SquareUnion block_L(long n, long d, std::uint64_t cap) {
    if (n < 1) throw std::invalid_argument("block_L: n must be positive");
    if (d < 1) throw std::invalid_argument("block_L: d must be positive");
    Z count = pow_z(fact(n), static_cast<unsigned long>(d));
    guard(count, cap, "block_L");
    SquareUnion out;
    out.side = make_q(Z(1), count);
    unsigned long c = count.get_ui();
    out.centers.reserve(c);
    for (unsigned long i = 0; i < c; ++i)
        out.centers.push_back({Q(0), Q(-1, 2) + (Q(Z(i)) + Q(1, 2)) * out.side});
    return out;
}

SquareUnion block_U(long n, std::uint64_t cap) {
    if (n < 1) throw std::invalid_argument("block_U: n must be positive");
    guard(fact(n) * fact(n), cap, "block_U");
    SquareUnion out = block_Q(1);
    for (long j = 2; j <= n; ++j) out = square_star(out, block_Q(j), cap);
    return out;
}

QBallUnion block_B(long n, long d, std::uint64_t cap) {
    if (n < 0) throw std::invalid_argument("block_B: n must be non-negative");
    if (n == 0) return unit_ball();
    guard(pow_z(fact(n), static_cast<unsigned long>(2 + d)), cap, "block_B");
    SquareUnion sq = square_star(block_U(n, cap), block_L(n, d, cap), cap);
    return QBallUnion{std::move(sq.centers), sq.side / 2};
}

PointSet skeleton(const QBallUnion& k) { return k.centers; }
PointSet skeleton(const SquareUnion& k) { return k.centers; }

ExactDir direction_D(long n, long d, const Z& k, const ExactDir& base) {
    if (n < 3 || d < 3) throw std::invalid_argument("directions_D: n and d must be at least 3");
    Z count = pow_z(fact(n), static_cast<unsigned long>(d - 3));
    if (k < 1 || k > count) throw std::invalid_argument("directions_D: k out of range");
    ExactDir xi = make_exact_dir(k, pow_z(fact(n), static_cast<unsigned long>(d)));
    if (base.a == 0 && base.b == 1) return xi;
    return rotate_exact(base, xi);
}

std::vector<ExactDir> directions_D(long n, long d, const ExactDir& base, std::uint64_t cap) {
    if (n < 3 || d < 3) throw std::invalid_argument("directions_D: n and d must be at least 3");
    Z count = pow_z(fact(n), static_cast<unsigned long>(d - 3));
    guard(count, cap, "directions_D");
    std::vector<ExactDir> out;
    for (Z k = 1; k <= count; ++k) out.push_back(direction_D(n, d, k, base));
    return out;
}

DirectionsDCheck check_directions_D(long n, long d) {
    if (n < 3 || d < 3) throw std::invalid_argument("directions_D: n and d must be at least 3");
    DirectionsDCheck c;
    Z f = fact(n), fd = pow_z(f, static_cast<unsigned long>(d));
    c.count = pow_z(f, static_cast<unsigned long>(d - 3));
    c.max_tan = make_q(c.count, fd);
    // |xi - (0,1)| = 2 sin(theta/2) <= theta <= tan theta
    c.near_vertical = c.max_tan <= make_q(Z(2), pow_z(f, 3));
    // atan' >= 1/(1 + max_tan^2) on the whole range
    c.min_separation = make_q(Z(1), fd) / (1 + c.max_tan * c.max_tan);
    c.separated = c.min_separation >= make_q(Z(1), 2 * fd);
    return c;
}

ColumnSet block_B_columns(long n, long d) {
    if (n < 0 || d < 1) throw std::invalid_argument("block_B_columns: bad parameters");
    ColumnSet c;
    if (n <= 1) {
        // B_0 = B_1 = B(0,1/2)
        c.centers.push_back({Z(0), Z(0)});
        return c;
    }
    Z f = fact(n);
    c.length = pow_z(f, static_cast<unsigned long>(d));
    c.den = 2 * f * f * c.length;
    SquareUnion u = block_U(n, std::numeric_limits<std::uint64_t>::max());
    c.centers.reserve(u.centers.size());
    for (auto& p : u.centers) {
        Q x = p.x * Q(c.den), y = p.y * Q(c.den);
        if (x.get_den() != 1 || y.get_den() != 1) throw std::logic_error("block_B_columns: non-integral center");
        c.centers.push_back({x.get_num(), y.get_num()});
    }
    return c;
}

ColumnSet ball_row_columns(long k) {
    if (k < 1) throw std::invalid_argument("ball_row_columns: k must be positive");
    ColumnSet c;
    c.den = 2 * k;
    for (long i = 0; i < k; ++i) c.centers.push_back({Z(2 * i + 1 - k), Z(0)});
    return c;
}

ColumnProjection project_columns(const ColumnSet& c, const ExactDir& e) {
    ColumnProjection p;
    p.nu2 = e.a * e.a + e.b * e.b;
    p.den = c.den;
    Z nu_up;
    mpz_sqrt(nu_up.get_mpz_t(), p.nu2.get_mpz_t());
    if (nu_up * nu_up < p.nu2) ++nu_up;
    Z absb = abs(e.b);
    Z ext = absb * (c.length - 1) + nu_up;
    p.outer.reserve(c.centers.size());
    std::vector<Z> s(c.centers.size());
    for (std::size_t i = 0; i < c.centers.size(); ++i) {
        s[i] = e.a * c.centers[i].first + e.b * c.centers[i].second;
        p.outer.push_back({s[i] - ext, s[i] + ext});
    }
    merge_int_intervals(p.outer);
    if (absb == 0 || c.length == 1) {
        // each column projects to the single value s
        std::sort(s.begin(), s.end());
        p.skeleton_card = static_cast<unsigned long>(std::unique(s.begin(), s.end()) - s.begin());
        return p;
    }
    // each column projects onto an arithmetic progression with step 2|b|
    Z step = 2 * absb;
    std::vector<std::pair<Z, Z>> cls(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        Z v0 = s[i] - absb * (c.length - 1);
        mpz_fdiv_qr(cls[i].second.get_mpz_t(), cls[i].first.get_mpz_t(), v0.get_mpz_t(), step.get_mpz_t());
    }
    std::sort(cls.begin(), cls.end());
    Z total = 0;
    std::size_t i = 0;
    while (i < cls.size()) {
        std::size_t j = i;
        Z lo = cls[i].second, hi = cls[i].second + c.length - 1;
        for (; j < cls.size() && cls[j].first == cls[i].first; ++j) {
            Z a = cls[j].second, b = cls[j].second + c.length - 1;
            if (a > hi + 1) {
                total += hi - lo + 1;
                lo = a;
                hi = b;
            } else if (b > hi) {
                hi = b;
            }
        }
        total += hi - lo + 1;
        i = j;
    }
    p.skeleton_card = total;
    return p;
}

Z covering_upper(const ColumnProjection& p, const Q& radius) {
    if (radius <= 0) throw std::invalid_argument("covering_upper: radius must be positive");
    static const Z scale = pow_z(2, 64);
    // piece length 2 radius nu in den units, rounded down
    Q w = 2 * radius * Q(p.den) * Q(scale);
    Z wnum = isqrt_floor_q(w * w * Q(p.nu2));
    if (wnum <= 0) throw std::domain_error("covering_upper: radius below resolution");
    return covering_number_int(p.outer, wnum, scale);
}

namespace {

struct Skel {
    Z f;
    long L = 0;
    std::vector<std::pair<long, long>> cols;  // (X / L, Y) in units of 1/(2 f^(2+d))
};

Skel integer_skeleton(long n, long d, std::uint64_t cap, bool& xcoord_ok) {
    Skel s;
    s.f = fact(n);
    Z L = pow_z(s.f, static_cast<unsigned long>(d));
    guard(3 * pow_z(s.f, static_cast<unsigned long>(d + 2)), cap, "skeleton line check");
    if (!L.fits_slong_p()) throw SizeCapError("skeleton line check: column length too large", L.get_str());
    s.L = L.get_si();
    ColumnSet c = block_B_columns(n, d);
    xcoord_ok = true;
    for (auto& [x, y] : c.centers) {
        // x (n!)^2 - 1/2 integer, i.e. X / L odd
        Z r, q;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), L.get_mpz_t());
        if (r != 0 || mpz_odd_p(q.get_mpz_t()) == 0) xcoord_ok = false;
        s.cols.push_back({q.get_si(), y.get_si()});
    }
    return s;
}

}  // namespace

LineIntersectReport verify_line_intersect(long n, long d, std::uint64_t cap) {
    if (n < 3 || d < 3) throw std::invalid_argument("verify_line_intersect: n and d must be at least 3");
    LineIntersectReport r;
    r.n = n;
    r.d = d;
    Skel s = integer_skeleton(n, d, cap, r.xcoord_ok);
    r.factorial = s.f;
    const long L = s.L;
    const long F = s.f.get_si();
    r.points = static_cast<std::uint64_t>(s.cols.size()) * static_cast<std::uint64_t>(L);

    // copies S_n, S_n +- (0,(n!)^-2) are disjoint when same-x columns are 6L apart
    std::map<long, std::vector<long>> by_x;
    for (auto& [x, y] : s.cols) by_x[x].push_back(y);
    r.plus_disjoint = true;
    for (auto& [x, ys] : by_x) {
        std::sort(ys.begin(), ys.end());
        for (std::size_t i = 1; i < ys.size(); ++i)
            if (ys[i] - ys[i - 1] < 6 * L - 1) r.plus_disjoint = false;
    }

    Z kmax = pow_z(s.f, static_cast<unsigned long>(d - 3));
    guard(kmax, cap, "skeleton line check directions");
    long K = kmax.get_si();
    r.card_bound = 3 * pow_z(s.f, static_cast<unsigned long>(d + 1));
    r.max_projection_card = 0;
    long ymin = std::numeric_limits<long>::max(), ymax = std::numeric_limits<long>::min();
    long xmin = ymin, xmax = ymax;
    for (auto& [x, y] : s.cols) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    const std::uint16_t kDone = std::numeric_limits<std::uint16_t>::max();
    std::vector<std::uint16_t> cnt;
    for (long k = 1; k <= K; ++k) {
        long lo = ymin - (L - 1) - 2 * L + std::min(k * xmin, k * xmax);
        long hi = ymax + (L - 1) + 2 * L + std::max(k * xmin, k * xmax);
        if (hi - lo + 1 > (1L << 31)) throw SizeCapError("skeleton line check: key range too large", "");
        cnt.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        for (auto& [x, y] : s.cols) {
            long base = y - (L - 1) + k * x - lo;
            for (long shift : {-2 * L, 0L, 2 * L})
                for (long j = 0; j < L; ++j) {
                    auto& c = cnt[static_cast<std::size_t>(base + shift + 2 * j)];
                    if (c < kDone - 1) ++c;
                }
        }
        std::uint64_t lines = 0;
        for (auto& [x, y] : s.cols) {
            long base = y - (L - 1) + k * x - lo;
            for (long j = 0; j < L; ++j) {
                auto& c = cnt[static_cast<std::size_t>(base + 2 * j)];
                if (c == kDone) continue;
                ++lines;
                if (c != F) {
                    ++r.violations;
                    if (r.witnesses.size() < 10) {
                        std::ostringstream w;
                        w << "k=" << k << " line through (" << x * L << "," << y - (L - 1) + 2 * j << ")/"
                          << 2 * F * F * L << " meets S_n^+ in " << c << " points";
                        r.witnesses.push_back(w.str());
                    }
                }
                c = kDone;
            }
        }
        r.lines_checked += lines;
        Z card = static_cast<unsigned long>(lines);
        if (card > r.max_projection_card) r.max_projection_card = card;
    }
    r.card_ok = r.max_projection_card <= r.card_bound;
    return r;
}

RichnessReport verify_richness(long n, long d, std::uint64_t cap) {
    if (n < 3 || d < 3) throw std::invalid_argument("verify_richness: n and d must be at least 3");
    bool xok = false;
    Skel s = integer_skeleton(n, d, cap, xok);
    const long L = s.L;
    std::map<long, std::vector<long>> by_x;
    for (auto& [x, y] : s.cols) by_x[x].push_back(y);
    for (auto& [x, ys] : by_x) std::sort(ys.begin(), ys.end());
    RichnessReport r;
    for (auto& [x0, y0] : s.cols) {
        for (long j = 0; j < L; ++j) {
            long yo = y0 - (L - 1) + 2 * j;
            for (auto& [x, ys] : by_x) {
                ++r.checks;
                // S_n^+ near column Y on this line is Y-3L+1 .. Y+3L-1 in steps of 2
                auto it = std::lower_bound(ys.begin(), ys.end(), yo - L + 1);
                bool ok = it != ys.end() && *it <= yo + L - 1 && (*it - (L - 1) - yo) % 2 == 0;
                if (!ok) ++r.failures;
            }
        }
    }
    return r;
}

}  // namespace projlab
