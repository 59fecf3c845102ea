#include "projlab/discrete.hpp"

#include "projlab/covering.hpp"
#include "projlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

namespace projlab {

long tube_index(double projection, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("tube_index: delta must be positive");
    long j = static_cast<long>(std::floor(projection / delta));
    // values within tolerance of the upper boundary belong to the upper tube
    double tol = kTol * std::max(1.0, std::fabs(projection));
    while ((j + 1) * delta <= projection + tol) ++j;
    while (j * delta > projection + tol) --j;
    return j;
}

long tube_index(const Point& x, const Direction& e, double delta) { return tube_index(project(x, e), delta); }

Z tube_index(const Q& projection, const Q& delta) {
    if (delta <= 0) throw std::invalid_argument("tube_index: delta must be positive");
    return floor_q(Q(projection / delta));
}

DeltaOneReport is_delta_one_set(const std::vector<Point>& c, double delta, double a) {
    if (!(delta > 0)) throw std::invalid_argument("is_delta_one_set: delta must be positive");
    DeltaOneReport r;
    const std::size_t n = c.size();
    if (n == 0) {
        r.passes = true;
        return r;
    }
    constexpr int kBins = 64;
    struct Row {
        double min_d = INFINITY;
        double a_star = 0.0;
        double radius = 0.0;
    };
    std::vector<Row> rows(n);
    parallel_for(n, 0, [&](std::size_t i) {
        std::vector<std::size_t> bins(kBins, 0);
        Row& row = rows[i];
        for (std::size_t j = 0; j < n; ++j) {
            double d = std::hypot(c[i].x - c[j].x, c[i].y - c[j].y);
            if (j != i) row.min_d = std::min(row.min_d, d);
            int k = 0;
            double r = delta;
            while (d > r + kTol && k + 1 < kBins) {
                r *= 2;
                ++k;
            }
            ++bins[static_cast<std::size_t>(k)];
        }
        std::size_t cum = 0;
        double r = delta;
        for (int k = 0; k < kBins && cum < n; ++k, r *= 2) {
            cum += bins[static_cast<std::size_t>(k)];
            double ratio = static_cast<double>(cum) * delta / r;
            if (ratio > row.a_star) {
                row.a_star = ratio;
                row.radius = r;
            }
        }
    });
    r.min_distance = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        r.min_distance = std::min(r.min_distance, rows[i].min_d);
        if (rows[i].a_star > r.a_star) {
            r.a_star = rows[i].a_star;
            r.worst_center = i;
            r.worst_radius = rows[i].radius;
        }
    }
    r.separated = n < 2 || r.min_distance >= delta - kTol;
    r.passes = r.separated && r.a_star <= a + kTol;
    return r;
}

std::vector<Point> extract_delta_one_subset(const std::vector<Point>& p, double delta, const Direction& xi) {
    std::vector<std::pair<long, std::size_t>> idx;
    idx.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) idx.emplace_back(tube_index(p[i], xi, delta), i);
    std::sort(idx.begin(), idx.end());
    std::vector<Point> out;
    bool have = false;
    long last = 0;
    for (auto& [t, i] : idx) {
        if (have && t < last + 2) continue;
        out.push_back(p[i]);
        last = t;
        have = true;
    }
    return out;
}

std::vector<Direction> direction_net(double delta) {
    if (!(delta > 0)) throw std::invalid_argument("direction_net: delta must be positive");
    auto n = static_cast<std::size_t>(std::ceil(std::numbers::pi / delta));
    std::vector<Direction> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(direction_from_angle(std::numbers::pi * k / n));
    return out;
}

namespace {
// (tube, point index) sorted
std::vector<std::pair<long, std::size_t>> tube_order(const std::vector<Point>& c, const Direction& e, double delta) {
    std::vector<std::pair<long, std::size_t>> idx(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) idx[i] = {tube_index(c[i], e, delta), i};
    std::sort(idx.begin(), idx.end());
    return idx;
}
}  // namespace

EnergyReport counting_energy(const std::vector<Point>& c, const std::vector<Direction>& dirs, double delta,
                             unsigned threads) {
    EnergyReport rep;
    rep.rows.resize(dirs.size());
    const std::uint64_t n = c.size();
    parallel_for(dirs.size(), threads, [&](std::size_t d) {
        EnergyRow& row = rep.rows[d];
        row.direction_index = d;
        row.ex = dirs[d].x;
        row.ey = dirs[d].y;
        auto idx = tube_order(c, dirs[d], delta);
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j < idx.size() && idx[j].first == idx[i].first) ++j;
            std::uint64_t m = j - i;
            row.histogram.emplace_back(idx[i].first, static_cast<double>(m));
            row.pair_count += m * m;
            i = j;
        }
        row.occupied_tubes = row.histogram.size();
        row.energy = static_cast<double>(row.pair_count);
        row.cs_lower = row.occupied_tubes ? static_cast<double>(n * n) / row.occupied_tubes : 0.0;
    });
    for (auto& row : rep.rows) {
        rep.total += row.energy;
        // n^2 <= K * sum m^2, in integers
        if (n * n > static_cast<std::uint64_t>(row.occupied_tubes) * row.pair_count) rep.cs_holds = false;
    }
    return rep;
}

EnergyReport weighted_energy(const WeightedPointSet& mu, const std::vector<Direction>& dirs, double width,
                             double kernel_exponent, unsigned threads) {
    if (mu.points.size() != mu.weights.size()) throw std::invalid_argument("weighted_energy: size mismatch");
    for (double w : mu.weights)
        if (!(w >= 0)) throw std::invalid_argument("weighted_energy: negative weight");
    double total_mass = 0.0;
    for (double w : mu.weights) total_mass += w;
    EnergyReport rep;
    rep.rows.resize(dirs.size());
    parallel_for(dirs.size(), threads, [&](std::size_t d) {
        EnergyRow& row = rep.rows[d];
        row.direction_index = d;
        row.ex = dirs[d].x;
        row.ey = dirs[d].y;
        auto idx = tube_order(mu.points, dirs[d], width);
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            double mass = 0.0;
            while (j < idx.size() && idx[j].first == idx[i].first) mass += mu.weights[idx[j++].second];
            row.histogram.emplace_back(idx[i].first, mass);
            if (kernel_exponent == 0.0) {
                row.energy += mass * mass;
            } else {
                for (std::size_t a = i; a < j; ++a)
                    for (std::size_t b = i; b < j; ++b) {
                        if (a == b) continue;
                        const Point& x = mu.points[idx[a].second];
                        const Point& y = mu.points[idx[b].second];
                        double dist = std::hypot(x.x - y.x, x.y - y.y);
                        if (dist == 0.0) continue;
                        row.energy += mu.weights[idx[a].second] * mu.weights[idx[b].second] *
                                      std::pow(dist, kernel_exponent);
                    }
            }
            i = j;
        }
        row.occupied_tubes = row.histogram.size();
        row.cs_lower = row.occupied_tubes ? total_mass * total_mass / row.occupied_tubes : 0.0;
    });
    for (auto& row : rep.rows) {
        rep.total += row.energy;
        if (kernel_exponent == 0.0 && row.energy < row.cs_lower * (1 - 1e-12)) rep.cs_holds = false;
    }
    return rep;
}

double riesz_energy(const WeightedPointSet& mu, double gamma) {
    if (mu.points.size() != mu.weights.size()) throw std::invalid_argument("riesz_energy: size mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < mu.points.size(); ++i)
        for (std::size_t j = 0; j < mu.points.size(); ++j) {
            if (i == j) continue;
            double d = std::hypot(mu.points[i].x - mu.points[j].x, mu.points[i].y - mu.points[j].y);
            if (d == 0.0) continue;
            e += mu.weights[i] * mu.weights[j] * std::pow(d, -gamma);
        }
    return e;
}

void write_energy_csv(std::ostream& os, const EnergyReport& r) {
    os << "direction_index,ex,ey,occupied_tubes,energy,cs_lower\n";
    char buf[160];
    for (auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%zu,%.17g,%.17g\n", row.direction_index, row.ex, row.ey,
                      row.occupied_tubes, row.energy, row.cs_lower);
        os << buf;
    }
}

MarstrandScan marstrand_exceptional_scan(const std::vector<Point>& c, double delta, double tau, double a,
                                         unsigned threads) {
    DeltaOneReport v = is_delta_one_set(c, delta, a);
    if (!v.passes) {
        std::ostringstream m;
        if (!v.separated)
            m << "not delta-separated: minimal distance " << v.min_distance << " < " << delta;
        else
            m << "(delta,1) condition fails at radius " << v.worst_radius << " around point " << v.worst_center
              << " with constant " << v.a_star << " > " << a;
        throw DeltaOneViolation(m.str(), v.separated ? v.worst_radius : v.min_distance);
    }
    MarstrandScan s;
    auto net = direction_net(delta);
    s.net_size = net.size();
    double threshold = std::pow(delta, tau) * static_cast<double>(c.size());
    std::vector<char> hit(net.size(), 0);
    parallel_for(net.size(), threads, [&](std::size_t k) {
        IntervalUnion u;
        u.iv.reserve(c.size());
        for (auto& p : c) {
            double t = project(p, net[k]);
            u.iv.emplace_back(t, t);
        }
        u.normalize();
        hit[k] = static_cast<double>(covering_number_1d(u, delta)) <= threshold;
    });
    for (std::size_t k = 0; k < net.size(); ++k)
        if (hit[k]) s.exceptional.push_back(net[k]);
    s.count = s.exceptional.size();
    s.reference = std::pow(delta, tau - 1) * std::log(1 / delta);
    s.ratio = s.count / s.reference;
    return s;
}

std::size_t co_tube_direction_count(const Point& x, const Point& y, const std::vector<Direction>& net, double delta) {
    std::size_t count = 0;
    for (auto& e : net)
        if (tube_index(x, e, delta) == tube_index(y, e, delta)) ++count;
    return count;
}

SplitResult balanced_split(const std::vector<std::pair<double, double>>& profile, double delta, double split_width,
                           double c, double sigma) {
    if (profile.empty()) throw std::invalid_argument("balanced_split: empty profile");
    if (!(delta > 0) || !(split_width >= 0)) throw std::invalid_argument("balanced_split: bad widths");
    auto prof = profile;
    std::sort(prof.begin(), prof.end());
    double lo = prof.front().first, hi = prof.back().first;
    double small = c * std::pow(delta, sigma);
    long steps = std::max(0L, static_cast<long>(std::ceil((hi - lo - split_width) / delta - kTol)));
    SplitResult best;
    double best_score = INFINITY;
    double best_ratio = 0.0;
    for (long k = 0; k <= steps; ++k) {
        double a = lo + k * delta, b = a + split_width;
        double left = 0.0, right = 0.0;
        for (auto& [pos, m] : prof) {
            if (pos < a - kTol) left += m;
            else if (pos > b + kTol) right += m;
        }
        double outside = left + right;
        if (outside <= small) return SplitResult{a, 1, right > 0 ? left / right : 1.0, outside};
        double ratio = right > 0 ? left / right : INFINITY;
        double score = std::fabs(std::log(ratio));
        if (score < best_score) {
            best_score = score;
            best_ratio = ratio;
            if (ratio >= 0.5 && ratio <= 2.0) best = SplitResult{a, 2, ratio, outside};
        }
    }
    if (best.branch == 0)
        throw SplitError("balanced_split: no admissible window at step delta (discreteness artifact)", best_ratio);
    return best;
}

ExponentIteration exponent_iteration(double sigma, double gamma, double rho, double tau0, int n) {
    if (!(gamma > 0 && gamma < 1)) throw std::domain_error("exponent_iteration: gamma must lie in (0,1)");
    if (n < 0) throw std::invalid_argument("exponent_iteration: n must be nonnegative");
    ExponentIteration it;
    double t = tau0;
    for (int k = 0; k < n; ++k) {
        t = rho * sigma - gamma * (rho - 1) + (1 - gamma) * t;
        it.tau.push_back(t);
    }
    it.limit = rho * sigma / gamma - (rho - 1);
    double den = gamma + sigma * (gamma - 1);
    if (den != 0 && std::fabs(rho - gamma / den) <= kTol) {
        it.optimal_rho = true;
        it.bound1 = sigma * gamma / den;
    }
    return it;
}

}  // namespace projlab
