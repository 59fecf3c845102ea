#pragma once

#include "projlab/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace projlab {

using PointSet = std::vector<QPoint>;

// number of distinct values of the surrogate projection a*x + b*y
std::size_t projection_cardinality(const PointSet& p, const ExactDir& e);
// float mode; throws if two values differ by less than 1e-9 without coinciding
std::size_t projection_cardinality(const std::vector<Point>& p, const Direction& e);

struct CriticalDirection {
    ExactDir dir;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // index pairs collapsed by dir
};

struct CriticalDirectionSet {
    std::vector<CriticalDirection> directions;  // sorted, no duplicates
};

CriticalDirectionSet critical_directions(const PointSet& p);

// largest integer T with T <= n^s, exact for rational s
Z power_floor(std::uint64_t n, const Q& s);

struct DirectionWitness {
    ExactDir dir;
    std::size_t cardinality = 0;
};

struct ExceptionalReport {
    std::size_t n = 0;
    Z threshold;  // floor(n^s)
    std::size_t count = 0;
    std::vector<DirectionWitness> witnesses;
    double ratio = 0.0;  // count / n^(2s-1)
};

ExceptionalReport exceptional_direction_count(const PointSet& p, const Q& s, unsigned threads = 0);
void write_witness_csv(std::ostream& os, const ExceptionalReport& r);

// line {x : a x + b y = t} in surrogate units
struct Line {
    ExactDir dir;
    Q offset;
};

struct LineFamily {
    std::vector<Line> lines;
};

std::uint64_t incidence_count(const PointSet& p, const LineFamily& l);
LineFamily fiber_family(const PointSet& p, const std::vector<ExactDir>& s);

struct StReport {
    std::uint64_t incidences = 0;
    std::size_t points = 0;
    std::size_t lines = 0;
    double bound = 0.0;  // A (m^{2/3} n^{2/3} + m + n)
    double min_constant = 0.0;
    bool holds = false;
};

StReport st_bound_check(const PointSet& p, const LineFamily& l, double a);

// {1..n}^2 under e = c(1, p/q), integer surrogate q x + p y
std::size_t grid_projection_count(long n, long p, long q);

struct GridLemmaReport {
    std::size_t cases = 0;
    std::size_t violations = 0;
    std::size_t preimage_failures = 0;
    std::vector<std::string> witnesses;
};

// cardinality bound plus the preimage count in the enlarged grid, for
// 1 <= p <= pmax, 1 <= q <= qmax, nmin <= n <= nmax
GridLemmaReport verify_grid_lemma(long pmax, long qmax, long nmax, long nmin = 2, unsigned threads = 0);

}  // namespace projlab
