#include "projlab/covering.hpp"

#include "projlab/parallel.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace projlab {

namespace {

Z runs_qn(const QNum& len, const Q& two_delta, const Q& nu2) {
    // len / (two_delta * nu)
    QNum r{len.b / two_delta, len.a / (two_delta * nu2)};
    Z k = ceil_qn(r, nu2);
    return k < 1 ? Z(1) : k;
}

struct CellHash {
    std::size_t operator()(const std::pair<long, long>& c) const {
        return std::hash<long>()(c.first) * 1000003u ^ std::hash<long>()(c.second);
    }
};

using CellSet = std::unordered_set<std::pair<long, long>, CellHash>;

void mark_ball_cells(CellSet& cells, double cx, double cy, double r, double delta) {
    long i0 = static_cast<long>(std::ceil((cx - r) / delta)) - 1;
    long i1 = static_cast<long>(std::floor((cx + r) / delta));
    long j0 = static_cast<long>(std::ceil((cy - r) / delta)) - 1;
    long j1 = static_cast<long>(std::floor((cy + r) / delta));
    // same closed-cell test as mesh_count_1d, so occupied cells project onto occupied 1-D cells
    if ((i0 + 1) * delta < cx - r) ++i0;
    if ((j0 + 1) * delta < cy - r) ++j0;
    for (long i = i0; i <= i1; ++i) {
        double lo = i * delta, hi = (i + 1) * delta;
        double dx = cx < lo ? lo - cx : (cx > hi ? cx - hi : 0.0);
        if (dx > r) continue;
        for (long j = j0; j <= j1; ++j) {
            double ylo = j * delta, yhi = (j + 1) * delta;
            double dy = cy < ylo ? ylo - cy : (cy > yhi ? cy - yhi : 0.0);
            if (dx * dx + dy * dy <= r * r) cells.insert({i, j});
        }
    }
}

// greedy cover of points by closed balls of radius rad centered at chosen points
std::uint64_t greedy_centers(const std::vector<Point>& pts, double rad) {
    if (pts.empty()) return 0;
    double cell = rad > 0 ? rad : 1.0;
    std::unordered_map<std::pair<long, long>, std::vector<Point>, CellHash> grid;
    std::uint64_t count = 0;
    for (auto& p : pts) {
        long ci = static_cast<long>(std::floor(p.x / cell)), cj = static_cast<long>(std::floor(p.y / cell));
        bool covered = false;
        for (long di = -1; di <= 1 && !covered; ++di)
            for (long dj = -1; dj <= 1 && !covered; ++dj) {
                auto it = grid.find({ci + di, cj + dj});
                if (it == grid.end()) continue;
                for (auto& c : it->second) {
                    double dx = c.x - p.x, dy = c.y - p.y;
                    if (dx * dx + dy * dy <= rad * rad) {
                        covered = true;
                        break;
                    }
                }
            }
        if (!covered) {
            grid[{ci, cj}].push_back(p);
            ++count;
        }
    }
    return count;
}

}  // namespace

Z covering_number_qn(const QNIntervalUnion& u, const Q& delta) {
    if (delta <= 0) throw std::invalid_argument("covering_number: delta must be positive");
    const Q& nu2 = u.nu2;
    Q two_delta = 2 * delta;
    Z count = 0, k = 0;
    QNum anchor, reach;
    bool started = false;
    for (auto& [a, b] : u.iv) {
        if (!started || cmp_qn(a, reach, nu2) > 0) {
            started = true;
            anchor = a;
            k = runs_qn(b - a, two_delta, nu2);
            count += k;
        } else if (cmp_qn(b, reach, nu2) > 0) {
            Z kt = runs_qn(b - anchor, two_delta, nu2);
            count += kt - k;
            k = kt;
        } else {
            continue;
        }
        reach = QNum{anchor.a, anchor.b + two_delta * Q(k)};
    }
    return count;
}

Z covering_number_int(const std::vector<std::pair<Z, Z>>& iv, const Z& wnum, const Z& wden) {
    if (wnum <= 0 || wden <= 0) throw std::invalid_argument("covering_number_int: piece length must be positive");
    Z count = 0, k = 0, anchor_d, reach_d, t, lo_d;
    bool started = false;
    for (auto& [lo, hi] : iv) {
        mpz_mul(lo_d.get_mpz_t(), lo.get_mpz_t(), wden.get_mpz_t());
        if (!started || lo_d > reach_d) {
            started = true;
            anchor_d = lo_d;
            t = (hi - lo) * wden;
            mpz_cdiv_q(k.get_mpz_t(), t.get_mpz_t(), wnum.get_mpz_t());
            if (k < 1) k = 1;
            count += k;
        } else {
            mpz_mul(t.get_mpz_t(), hi.get_mpz_t(), wden.get_mpz_t());
            if (t <= reach_d) continue;
            t -= anchor_d;
            Z kt;
            mpz_cdiv_q(kt.get_mpz_t(), t.get_mpz_t(), wnum.get_mpz_t());
            count += kt - k;
            k = kt;
        }
        reach_d = anchor_d + k * wnum;
    }
    return count;
}

void merge_int_intervals(std::vector<std::pair<Z, Z>>& iv) {
    std::sort(iv.begin(), iv.end());
    std::size_t w = 0;
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (w > 0 && iv[i].first <= iv[w - 1].second) {
            if (iv[i].second > iv[w - 1].second) iv[w - 1].second = iv[i].second;
        } else {
            if (w != i) iv[w] = iv[i];
            ++w;
        }
    }
    iv.resize(w);
}

std::uint64_t mesh_count_1d(const IntervalUnion& u, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("mesh_count_1d: delta must be positive");
    std::uint64_t count = 0;
    bool have = false;
    long last = 0;
    for (auto& [a, b] : u.iv) {
        long i0 = static_cast<long>(std::ceil(a / delta)) - 1;
        long i1 = static_cast<long>(std::floor(b / delta));
        // closed cells: cell i0 meets [a,b] only if (i0+1) delta >= a
        if ((i0 + 1) * delta < a) ++i0;
        if (have && i0 <= last) i0 = last + 1;
        if (i1 >= i0) {
            count += static_cast<std::uint64_t>(i1 - i0 + 1);
            last = i1;
            have = true;
        }
    }
    return count;
}

std::uint64_t covering_number_2d(const BallUnion& k, double delta, CoverMode mode) {
    if (!(delta > 0)) throw std::invalid_argument("covering_number_2d: delta must be positive");
    if (mode == CoverMode::greedy) {
        if (delta > k.radius) {
            std::vector<Point> c;
            for (auto& b : k.balls) c.push_back(b.center);
            return greedy_centers(c, delta - k.radius);
        }
        // cells of side delta*sqrt(2) sit inside balls of radius delta
        CellSet cells;
        double side = delta * std::sqrt(2.0);
        for (auto& b : k.balls) mark_ball_cells(cells, b.center.x, b.center.y, b.radius, side);
        return cells.size();
    }
    CellSet cells;
    for (auto& b : k.balls) mark_ball_cells(cells, b.center.x, b.center.y, b.radius, delta);
    return cells.size();
}

std::uint64_t covering_number_2d(const std::vector<Point>& k, double delta, CoverMode mode) {
    if (!(delta > 0)) throw std::invalid_argument("covering_number_2d: delta must be positive");
    if (mode == CoverMode::greedy) return greedy_centers(k, delta);
    CellSet cells;
    for (auto& p : k) mark_ball_cells(cells, p.x, p.y, 0.0, delta);
    return cells.size();
}

std::uint64_t packing_number_2d(const std::vector<Point>& k, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("packing_number_2d: delta must be positive");
    double sep = 2 * delta;
    std::unordered_map<std::pair<long, long>, std::vector<Point>, CellHash> grid;
    std::uint64_t count = 0;
    for (auto& p : k) {
        long ci = static_cast<long>(std::floor(p.x / sep)), cj = static_cast<long>(std::floor(p.y / sep));
        bool clash = false;
        for (long di = -1; di <= 1 && !clash; ++di)
            for (long dj = -1; dj <= 1 && !clash; ++dj) {
                auto it = grid.find({ci + di, cj + dj});
                if (it == grid.end()) continue;
                for (auto& c : it->second) {
                    double dx = c.x - p.x, dy = c.y - p.y;
                    if (dx * dx + dy * dy < sep * sep) {
                        clash = true;
                        break;
                    }
                }
            }
        if (!clash) {
            grid[{ci, cj}].push_back(p);
            ++count;
        }
    }
    return count;
}

DimensionEstimate estimate_box_dimension(const ScaleProfile& profile, int ambient_dim) {
    const auto& e = profile.entries;
    if (e.size() < 3) throw std::invalid_argument("estimate_box_dimension: need at least 3 scales");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    DimensionEstimate out;
    out.delta_min = e.front().delta;
    out.delta_max = e.front().delta;
    for (auto& s : e) {
        if (!(s.delta > 0) || !(s.n > 0)) throw std::invalid_argument("estimate_box_dimension: nonpositive entry");
        double x = -std::log(s.delta), y = std::log(s.n);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        out.delta_min = std::min(out.delta_min, s.delta);
        out.delta_max = std::max(out.delta_max, s.delta);
        if (s.delta < 1) out.max_ratio = std::max(out.max_ratio, y / x);
    }
    double n = static_cast<double>(e.size());
    double den = n * sxx - sx * sx;
    if (den == 0) throw std::invalid_argument("estimate_box_dimension: scales must differ");
    out.slope = (n * sxy - sx * sy) / den;
    out.intercept = (sy - out.slope * sx) / n;
    double rss = 0;
    for (auto& s : e) {
        double r = std::log(s.n) - (out.intercept + out.slope * -std::log(s.delta));
        rss += r * r;
    }
    out.residual = std::sqrt(rss / n);
    double hi = ambient_dim == 1 ? 1.0 : 2.0;
    if (out.slope < 0 || out.slope > hi) {
        out.slope = std::clamp(out.slope, 0.0, hi);
        out.clamped = true;
    }
    return out;
}

namespace {
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_profile_csv(std::ostream& os, const ScaleProfile& profile) {
    os << "delta,N,P\n";
    for (auto& s : profile.entries) {
        os << fmt_double(s.delta) << ',' << fmt_double(s.n) << ',';
        if (s.p >= 0) os << fmt_double(s.p);
        os << '\n';
    }
}

namespace {
template <class Project>
std::vector<SweepRow> sweep_impl(Project proj, const std::vector<Direction>& dirs, const std::vector<double>& deltas,
                                 unsigned threads) {
    std::vector<SweepRow> rows(dirs.size() * deltas.size());
    parallel_for(dirs.size(), threads, [&](std::size_t i) {
        IntervalUnion u = proj(dirs[i]);
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            SweepRow& r = rows[i * deltas.size() + j];
            r.direction_index = i;
            r.delta_index = j;
            r.ex = dirs[i].x;
            r.ey = dirs[i].y;
            r.delta = deltas[j];
            r.n = covering_number_1d(u, deltas[j]);
            r.p = packing_number_1d(u, deltas[j]);
        }
    });
    return rows;
}
}  // namespace

std::vector<SweepRow> direction_sweep(const BallUnion& k, const std::vector<Direction>& dirs,
                                      const std::vector<double>& deltas, unsigned threads) {
    if (k.balls.empty() || dirs.empty() || deltas.empty()) throw std::invalid_argument("direction_sweep: empty input");
    return sweep_impl([&](const Direction& e) { return project_union(k, e); }, dirs, deltas, threads);
}

std::vector<SweepRow> direction_sweep(const std::vector<Point>& k, const std::vector<Direction>& dirs,
                                      const std::vector<double>& deltas, unsigned threads) {
    if (k.empty() || dirs.empty() || deltas.empty()) throw std::invalid_argument("direction_sweep: empty input");
    return sweep_impl(
        [&](const Direction& e) {
            IntervalUnion u;
            for (auto& p : k) {
                double t = project(p, e);
                u.iv.emplace_back(t, t);
            }
            u.normalize();
            return u;
        },
        dirs, deltas, threads);
}

std::vector<SweepRow> direction_sweep(const SquareUnion& k, const std::vector<Direction>& dirs,
                                      const std::vector<double>& deltas, unsigned threads) {
    if (k.centers.empty() || dirs.empty() || deltas.empty()) throw std::invalid_argument("direction_sweep: empty input");
    return sweep_impl([&](const Direction& e) { return project_union(k, e); }, dirs, deltas, threads);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "direction_index,delta_index,ex,ey,delta,N,P\n";
    for (auto& r : rows)
        os << r.direction_index << ',' << r.delta_index << ',' << fmt_double(r.ex) << ',' << fmt_double(r.ey) << ','
           << fmt_double(r.delta) << ',' << r.n << ',' << r.p << '\n';
}

std::vector<double> dyadic_scales(int kmin, int kmax) {
    std::vector<double> out;
    for (int k = kmin; k <= kmax; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

}  // namespace projlab
