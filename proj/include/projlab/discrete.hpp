#pragma once

#include "projlab/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace projlab {

// half-open tubes [j delta, (j+1) delta)
long tube_index(double projection, double delta);
long tube_index(const Point& x, const Direction& e, double delta);
Z tube_index(const Q& projection, const Q& delta);

struct DeltaOneReport {
    bool separated = true;
    double min_distance = 0.0;
    double a_star = 0.0;  // max card(C cap B(x,r)) * delta / r over centers and dyadic r
    std::size_t worst_center = 0;
    double worst_radius = 0.0;
    bool passes = false;  // separated and a_star <= A
};

// dyadic radii delta 2^k up to the diameter; the general condition then holds with 2 A*
DeltaOneReport is_delta_one_set(const std::vector<Point>& c, double delta, double a);

// one point per kept tube of T_xi, kept tube indices pairwise at least 2 apart
std::vector<Point> extract_delta_one_subset(const std::vector<Point>& p, double delta, const Direction& xi);

// ceil(pi/delta) equally spaced angles in [0, pi)
std::vector<Direction> direction_net(double delta);

struct EnergyRow {
    std::size_t direction_index = 0;
    double ex = 0.0, ey = 0.0;
    std::size_t occupied_tubes = 0;
    double energy = 0.0;
    double cs_lower = 0.0;  // (total mass)^2 / occupied tubes
    std::uint64_t pair_count = 0;  // counting case: sum of squared tube masses
    std::vector<std::pair<long, double>> histogram;
};

struct EnergyReport {
    std::vector<EnergyRow> rows;
    double total = 0.0;
    bool cs_holds = true;  // checked exactly in the counting case
};

EnergyReport counting_energy(const std::vector<Point>& c, const std::vector<Direction>& dirs, double delta,
                             unsigned threads = 0);

struct WeightedPointSet {
    std::vector<Point> points;
    std::vector<double> weights;
};

// sum over e of sum_{x ~e y} w_x w_y |x-y|^kernel_exponent; diagonal only for exponent 0
EnergyReport weighted_energy(const WeightedPointSet& mu, const std::vector<Direction>& dirs, double width,
                             double kernel_exponent, unsigned threads = 0);
double riesz_energy(const WeightedPointSet& mu, double gamma);

void write_energy_csv(std::ostream& os, const EnergyReport& r);

struct MarstrandScan {
    std::vector<Direction> exceptional;
    std::size_t net_size = 0;
    std::size_t count = 0;
    double reference = 0.0;  // delta^(tau-1) log(1/delta)
    double ratio = 0.0;      // count / reference
};

struct DeltaOneViolation : std::runtime_error {
    double radius;
    DeltaOneViolation(const std::string& m, double r) : std::runtime_error(m), radius(r) {}
};

// validates C as a (delta,1)-set with constant a, then scans the direction net
MarstrandScan marstrand_exceptional_scan(const std::vector<Point>& c, double delta, double tau, double a = 3.0,
                                         unsigned threads = 0);

// net directions e with x ~e y
std::size_t co_tube_direction_count(const Point& x, const Point& y, const std::vector<Direction>& net, double delta);

struct SplitResult {
    double position = 0.0;  // left end of the window
    int branch = 0;         // 1: outside mass small, 2: outside halves comparable
    double ratio = 0.0;     // left outside mass / right outside mass
    double outside_mass = 0.0;
};

struct SplitError : std::runtime_error {
    double best_ratio;
    SplitError(const std::string& m, double r) : std::runtime_error(m), best_ratio(r) {}
};

// profile: (position along the tube, mass); window slides in steps of delta
SplitResult balanced_split(const std::vector<std::pair<double, double>>& profile, double delta, double split_width,
                           double c, double sigma);

struct ExponentIteration {
    std::vector<double> tau;  // tau_1..tau_n
    double limit = 0.0;       // rho sigma / gamma - (rho - 1)
    bool optimal_rho = false; // rho = gamma / (gamma + sigma (gamma - 1))
    double bound1 = 0.0;      // sigma gamma / (gamma + sigma (gamma - 1)) when optimal_rho
};

ExponentIteration exponent_iteration(double sigma, double gamma, double rho, double tau0, int n);

}  // namespace projlab
