#include "projlab/incidence.hpp"

#include "projlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace projlab {

std::size_t projection_cardinality(const PointSet& p, const ExactDir& e) {
    std::vector<Q> v;
    v.reserve(p.size());
    for (auto& x : p) v.push_back(project_exact(x, e));
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

std::size_t projection_cardinality(const std::vector<Point>& p, const Direction& e) {
    std::vector<double> v;
    v.reserve(p.size());
    for (auto& x : p) v.push_back(project(x, e));
    std::sort(v.begin(), v.end());
    std::size_t count = v.empty() ? 0 : 1;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double gap = v[i] - v[i - 1];
        if (gap == 0.0) continue;
        if (gap < 1e-9) throw std::domain_error("projection_cardinality: near-collision in float mode, use exact mode");
        ++count;
    }
    return count;
}

CriticalDirectionSet critical_directions(const PointSet& p) {
    std::map<ExactDir, std::vector<std::pair<std::size_t, std::size_t>>> m;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            Q dx = p[j].x - p[i].x, dy = p[j].y - p[i].y;
            if (dx == 0 && dy == 0) continue;
            // integer normal to (dx, dy)
            Z l = lcm(dx.get_den(), dy.get_den());
            Z ix = dx.get_num() * (l / dx.get_den()), iy = dy.get_num() * (l / dy.get_den());
            m[make_exact_dir(-iy, ix)].emplace_back(i, j);
        }
    CriticalDirectionSet out;
    for (auto& [d, pairs] : m) out.directions.push_back({d, std::move(pairs)});
    return out;
}

Z power_floor(std::uint64_t n, const Q& s) {
    if (s < 0) throw std::invalid_argument("power_floor: negative exponent");
    Z num = s.get_num(), den = s.get_den();
    if (!num.fits_ulong_p() || !den.fits_ulong_p()) throw std::invalid_argument("power_floor: exponent too large");
    Z rhs = pow_z(Z(static_cast<unsigned long>(n)), num.get_ui());
    unsigned long d = den.get_ui();
    double approx = std::floor(std::pow(static_cast<double>(n), to_double(s)));
    Z t = Z(approx);
    while (t > 0 && pow_z(t, d) > rhs) --t;
    while (pow_z(t + 1, d) <= rhs) ++t;
    return t;
}

ExceptionalReport exceptional_direction_count(const PointSet& p, const Q& s, unsigned threads) {
    if (p.size() < 2) throw std::invalid_argument("exceptional_direction_count: need at least 2 points");
    ExceptionalReport r;
    r.n = p.size();
    r.threshold = power_floor(r.n, s);
    CriticalDirectionSet crit = critical_directions(p);
    std::vector<std::size_t> card(crit.directions.size());
    parallel_for(card.size(), threads,
                 [&](std::size_t i) { card[i] = projection_cardinality(p, crit.directions[i].dir); });
    for (std::size_t i = 0; i < card.size(); ++i)
        if (Z(static_cast<unsigned long>(card[i])) <= r.threshold) r.witnesses.push_back({crit.directions[i].dir, card[i]});
    r.count = r.witnesses.size();
    r.ratio = r.count / std::pow(static_cast<double>(r.n), 2 * to_double(s) - 1);
    return r;
}

void write_witness_csv(std::ostream& os, const ExceptionalReport& r) {
    os << "a,b,cardinality\n";
    for (auto& w : r.witnesses) os << w.dir.a.get_str() << ',' << w.dir.b.get_str() << ',' << w.cardinality << '\n';
}

std::uint64_t incidence_count(const PointSet& p, const LineFamily& l) {
    std::map<ExactDir, std::vector<const Line*>> by_dir;
    for (auto& line : l.lines) by_dir[line.dir].push_back(&line);
    std::uint64_t total = 0;
    for (auto& [d, lines] : by_dir) {
        std::map<Q, std::uint64_t> hist;
        for (auto& x : p) ++hist[project_exact(x, d)];
        for (auto* line : lines) {
            auto it = hist.find(line->offset);
            if (it != hist.end()) total += it->second;
        }
    }
    return total;
}

LineFamily fiber_family(const PointSet& p, const std::vector<ExactDir>& s) {
    LineFamily f;
    for (auto& d : s) {
        std::vector<Q> v;
        for (auto& x : p) v.push_back(project_exact(x, d));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        for (auto& t : v) f.lines.push_back({d, t});
    }
    return f;
}

StReport st_bound_check(const PointSet& p, const LineFamily& l, double a) {
    StReport r;
    r.incidences = incidence_count(p, l);
    r.points = p.size();
    r.lines = l.lines.size();
    double m = static_cast<double>(r.lines), n = static_cast<double>(r.points);
    double shape = std::cbrt(m * m) * std::cbrt(n * n) + m + n;
    r.bound = a * shape;
    r.min_constant = shape > 0 ? static_cast<double>(r.incidences) / shape : 0.0;
    r.holds = static_cast<double>(r.incidences) <= r.bound;
    return r;
}

std::size_t grid_projection_count(long n, long p, long q) {
    if (n < 1) throw std::invalid_argument("grid_projection_count: n must be positive");
    // values q x + p y for x, y in 1..n; sign of p, q only mirrors the set
    std::vector<long> v;
    v.reserve(static_cast<std::size_t>(n * n));
    for (long x = 1; x <= n; ++x)
        for (long y = 1; y <= n; ++y) v.push_back(q * x + p * y);
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

namespace {
struct GridCase {
    std::size_t card = 0;
    bool violation = false;
    bool preimage_fail = false;
};

GridCase check_grid_case(long n, long p, long q) {
    GridCase c;
    c.card = grid_projection_count(n, p, q);
    c.violation = static_cast<long>(c.card) > (1 + p) * (1 + q) * n;
    // enlarged grid {1..n(1+p)} x {-nq+1..n}: count points per surrogate value
    long xmax = n * (1 + p), ymin = -n * q + 1;
    long lo = q * 1 + p * ymin, hi = q * xmax + p * n;
    std::vector<long> hist(static_cast<std::size_t>(hi - lo + 1), 0);
    for (long x = 1; x <= xmax; ++x)
        for (long y = ymin; y <= n; ++y) ++hist[static_cast<std::size_t>(q * x + p * y - lo)];
    for (long x = 1; x <= n && !c.preimage_fail; ++x)
        for (long y = 1; y <= n; ++y)
            if (hist[static_cast<std::size_t>(q * x + p * y - lo)] < n) {
                c.preimage_fail = true;
                break;
            }
    return c;
}
}  // namespace

GridLemmaReport verify_grid_lemma(long pmax, long qmax, long nmax, long nmin, unsigned threads) {
    if (pmax < 1 || qmax < 1 || nmin < 1 || nmax < nmin) throw std::invalid_argument("verify_grid_lemma: bad ranges");
    struct Key {
        long p, q, n;
    };
    std::vector<Key> keys;
    for (long p = 1; p <= pmax; ++p)
        for (long q = 1; q <= qmax; ++q)
            for (long n = nmin; n <= nmax; ++n) keys.push_back({p, q, n});
    std::vector<GridCase> res(keys.size());
    parallel_for(keys.size(), threads, [&](std::size_t i) { res[i] = check_grid_case(keys[i].n, keys[i].p, keys[i].q); });
    GridLemmaReport r;
    r.cases = keys.size();
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!res[i].violation && !res[i].preimage_fail) continue;
        std::ostringstream w;
        w << "p=" << keys[i].p << " q=" << keys[i].q << " n=" << keys[i].n << " card=" << res[i].card
          << (res[i].violation ? " exceeds bound" : " preimage count below n");
        r.witnesses.push_back(w.str());
        if (res[i].violation) ++r.violations;
        if (res[i].preimage_fail) ++r.preimage_failures;
    }
    return r;
}

}  // namespace projlab
