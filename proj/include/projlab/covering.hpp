#pragma once

#include "projlab/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace projlab {

namespace detail {
template <class T>
T times(const T& w, std::uint64_t k) {
    if constexpr (std::is_floating_point_v<T>) return w * static_cast<T>(k);
    else return w * Q(Z(static_cast<unsigned long>(k)));
}
template <class T>
std::uint64_t runs(const T& len, const T& w) {
    if constexpr (std::is_floating_point_v<T>) {
        double r = std::ceil(static_cast<double>(len / w) - kTol);
        return r < 1 ? 1 : static_cast<std::uint64_t>(r);
    } else {
        Z c = ceil_q(Q(len / w));
        return c < 1 ? 1 : c.get_ui();
    }
}
}  // namespace detail

// N(U, delta): closed balls of radius delta, i.e. intervals of length 2*delta.
// Greedy from the left is optimal in 1-D. Counts are anchored at the start of each
// run so no error accumulates over long components.
template <class T>
std::uint64_t covering_number_1d(const BasicIntervalUnion<T>& u, const T& delta) {
    if (!(delta > 0)) throw std::invalid_argument("covering_number_1d: delta must be positive");
    std::uint64_t count = 0, k = 0;
    T w = 2 * delta;
    T anchor = 0, reach = 0;
    bool started = false;
    for (auto& [a, b] : u.iv) {
        if (!started || a > reach) {
            started = true;
            anchor = a;
            k = detail::runs<T>(b - a, w);
            count += k;
        } else if (b > reach) {
            std::uint64_t kt = detail::runs<T>(b - anchor, w);
            count += kt - k;
            k = kt;
        } else {
            continue;
        }
        reach = anchor + detail::times<T>(w, k);
    }
    return count;
}

// max number of points of U with pairwise distance >= 2*delta; leftmost greedy
template <class T>
std::uint64_t packing_number_1d(const BasicIntervalUnion<T>& u, const T& delta) {
    if (!(delta > 0)) throw std::invalid_argument("packing_number_1d: delta must be positive");
    std::uint64_t count = 0;
    T w = 2 * delta;
    T last = 0;
    bool started = false;
    for (auto& [a, b] : u.iv) {
        T x = a;
        if (started && x < last + w) x = last + w;
        if constexpr (std::is_floating_point_v<T>) {
            if (x > b + kTol) continue;
            double extra = std::floor(static_cast<double>((b - x) / w) + kTol);
            if (extra < 0) extra = 0;
            count += 1 + static_cast<std::uint64_t>(extra);
            last = x + w * extra;
        } else {
            if (x > b) continue;
            Z extra = floor_q(Q((b - x) / w));
            count += 1 + extra.get_ui();
            last = x + w * Q(extra);
        }
        started = true;
    }
    return count;
}

// exact covering in surrogate coordinates: true radius delta is delta*nu there
Z covering_number_qn(const QNIntervalUnion& u, const Q& delta);
inline Z covering_number_exact(const QIntervalUnion& u, const Q& delta, const Q& nu2) {
    return covering_number_qn(to_qn(u, nu2), delta);
}

// closed integer intervals (sorted, merged) covered by pieces of length wnum/wden > 0;
// exact greedy count in integer arithmetic
Z covering_number_int(const std::vector<std::pair<Z, Z>>& iv, const Z& wnum, const Z& wden = 1);
// sorts and merges overlapping or touching closed integer intervals in place
void merge_int_intervals(std::vector<std::pair<Z, Z>>& iv);

// occupied closed 1-D cells [i d, (i+1) d]
std::uint64_t mesh_count_1d(const IntervalUnion& u, double delta);

enum class CoverMode { mesh, greedy };

std::uint64_t covering_number_2d(const BallUnion& k, double delta, CoverMode mode = CoverMode::mesh);
std::uint64_t covering_number_2d(const std::vector<Point>& k, double delta, CoverMode mode = CoverMode::mesh);
// greedy lower bound
std::uint64_t packing_number_2d(const std::vector<Point>& k, double delta);

struct ScaleEntry {
    double delta = 0.0;
    double n = 0.0;
    double p = -1.0;  // negative: not measured
};

struct ScaleProfile {
    std::vector<ScaleEntry> entries;
};

struct DimensionEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    double delta_min = 0.0;
    double delta_max = 0.0;
    double max_ratio = 0.0;  // max log N / -log delta over delta < 1
    bool clamped = false;
};

// ambient_dim 1 or 2 sets the clamp range [0, ambient_dim]
DimensionEstimate estimate_box_dimension(const ScaleProfile& profile, int ambient_dim = 2);

void write_profile_csv(std::ostream& os, const ScaleProfile& profile);

struct SweepRow {
    std::size_t direction_index = 0;
    std::size_t delta_index = 0;
    double ex = 0.0, ey = 0.0;
    double delta = 0.0;
    std::uint64_t n = 0;
    std::uint64_t p = 0;
};

std::vector<SweepRow> direction_sweep(const BallUnion& k, const std::vector<Direction>& dirs,
                                      const std::vector<double>& deltas, unsigned threads = 0);
std::vector<SweepRow> direction_sweep(const std::vector<Point>& k, const std::vector<Direction>& dirs,
                                      const std::vector<double>& deltas, unsigned threads = 0);
std::vector<SweepRow> direction_sweep(const SquareUnion& k, const std::vector<Direction>& dirs,
                                      const std::vector<double>& deltas, unsigned threads = 0);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

std::vector<double> dyadic_scales(int kmin, int kmax);

}  // namespace projlab
