#pragma once

#include "projlab/geometry.hpp"
#include "projlab/incidence.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace projlab {

inline constexpr std::uint64_t kDefaultCap = 100000000;

// a construction would exceed the configured number of primitive objects
struct SizeCapError : std::runtime_error {
    std::string what_count;
    SizeCapError(const std::string& m, std::string count) : std::runtime_error(m), what_count(std::move(count)) {}
};

// ---------------------------------------------------------------- star products and blocks

QBallUnion unit_ball();  // B(0,1/2)
SquareUnion unit_square();  // [-1/2,1/2]^2

// union of T_B(K2) over balls B of K1, T_B the homothety B(0,1/2) -> B
QBallUnion star_product(const QBallUnion& k1, const QBallUnion& k2, std::uint64_t cap = kDefaultCap);
QBallUnion star_power(const QBallUnion& k, int m, std::uint64_t cap = kDefaultCap);
// same with T_Q mapping [-1/2,1/2]^2 onto Q
SquareUnion square_star(const SquareUnion& a, const SquareUnion& b, std::uint64_t cap = kDefaultCap);

SquareUnion block_Q(long n);
SquareUnion block_L(long n, long d, std::uint64_t cap = kDefaultCap);
SquareUnion block_U(long n, std::uint64_t cap = kDefaultCap);
// balls inscribed in the squares of U_n * L_n; n = 0 gives B(0,1/2)
QBallUnion block_B(long n, long d, std::uint64_t cap = kDefaultCap);

PointSet skeleton(const QBallUnion& k);
PointSet skeleton(const SquareUnion& k);

// direction whose fibres are the lines y = -k (n!)^-d x + y0, rotated by R_base
ExactDir direction_D(long n, long d, const Z& k, const ExactDir& base = ExactDir{0, 1});
std::vector<ExactDir> directions_D(long n, long d, const ExactDir& base = ExactDir{0, 1},
                                   std::uint64_t cap = kDefaultCap);

struct DirectionsDCheck {
    Z count;             // (n!)^(d-3)
    Q max_tan;           // largest tangent of the angle to (0,1)
    bool near_vertical;  // |xi - (0,1)| <= 2 (n!)^-3
    Q min_separation;    // lower bound for the angle between consecutive directions
    bool separated;      // min_separation >= (n!)^-d / 2
};
DirectionsDCheck check_directions_D(long n, long d);

// ---------------------------------------------------------------- integer column model

// vertical columns of touching balls: column i holds `length` balls of diameter
// 2/den whose centers are (X_i, Y_i + 2j - (length-1)) / den, j = 0..length-1
struct ColumnSet {
    std::vector<std::pair<Z, Z>> centers;
    Z length = 1;
    Z den = 2;
    Q diameter() const { return Q(2) / Q(den); }
};
ColumnSet block_B_columns(long n, long d);  // (n!)^2 columns of length (n!)^d
ColumnSet ball_row_columns(long k);        // k balls of diameter 1/k centered on [-1/2,1/2] x {0}

// surrogate projection scaled by den; `outer` contains the true projection
struct ColumnProjection {
    Z nu2;
    Z den;
    std::vector<std::pair<Z, Z>> outer;  // merged, endpoints rounded outward
    Z skeleton_card;                     // exact card of the projected centers
};
ColumnProjection project_columns(const ColumnSet& c, const ExactDir& e);
// rigorous upper bound for N(rho_e(set), radius)
Z covering_upper(const ColumnProjection& p, const Q& radius);

// ---------------------------------------------------------------- skeleton line structure

struct LineIntersectReport {
    long n = 0, d = 0;
    Z factorial;
    std::uint64_t points = 0;         // card S_n
    std::uint64_t lines_checked = 0;  // (k, line) pairs meeting S_n
    std::uint64_t violations = 0;
    bool xcoord_ok = false;           // x = (r + 1/2)(n!)^-2 with r integer
    bool plus_disjoint = false;       // the three copies forming S_n^+ are disjoint
    Z max_projection_card;            // max over D_n of card rho_xi(S_n)
    Z card_bound;                     // 3 (n!)^(1+d)
    bool card_ok = false;
    std::vector<std::string> witnesses;
    bool ok() const { return violations == 0 && xcoord_ok && plus_disjoint && card_ok; }
};
LineIntersectReport verify_line_intersect(long n, long d, std::uint64_t cap = kDefaultCap);

struct RichnessReport {
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
};
// for every skeleton point and vertical skeleton line, all y_o + s (n!)^(-2-d), |s| <= (n!)^d, lie in S_n^+
RichnessReport verify_richness(long n, long d, std::uint64_t cap = kDefaultCap);

// ---------------------------------------------------------------- generations

struct Generation {
    int level = 0;
    bool squares = false;
    QBallUnion balls;
    SquareUnion square_set;
    std::vector<Arc> arcs;
    std::vector<std::pair<std::string, std::string>> params;
};
void write_generation(std::ostream& os, const Generation& g);

// ---------------------------------------------------------------- ball cascade with null projections

struct MainParams {
    std::vector<ExactDir> dirs;  // e_1, e_2, ...
    std::vector<Q> s;            // s_1 > s_2 > ... > 0
};
// Pythagorean directions in Calkin-Wilf order starting at (1,0); s_n = 10/(10+n)
MainParams default_main_params(int count);
// (m, n) of the given 1-based step in the diagonal order
std::pair<long, long> diagonal_pair(long step);
// smallest q >= 2 with p (dm/q)^s <= 1/2 and dm/q <= 1/n
Z main_subdivision(const Z& p, const Q& dm, const Q& s, long n);

struct MainStep {
    long step = 0, m = 0, n = 0;
    ExactDir e;
    Q s;
    Z p;   // balls before the step
    Q dm;  // their diameter
    Z q;   // subdivision count (1 at step 1)
    bool cover_ok = false;    // projection equals p intervals of length dm/q and p (dm/q)^s <= 1/2
    bool nested_ok = false;
    Q diameter_sum;
    double content_max = 0.0;  // content proxy over sampled e in J
    bool content_ok = false;
    std::size_t content_samples = 0;
};
struct MainResult {
    std::vector<Generation> generations;
    std::vector<MainStep> steps;
    bool ok() const;
};
MainResult construct_main(const MainParams& params, int steps, int content_samples = 16,
                          std::uint64_t cap = kDefaultCap);

// ---------------------------------------------------------------- generic exceptional arc set

// smallest n with n^(1-t) r^t >= 10
Z choose_nj(const Q& t, const Q& r_prev);

struct SetELevel {
    int j = 0;
    Q t;
    Z n;
    Q r;
    std::vector<double> midpoints;  // angles
    std::uint64_t packing_min = 0;  // min over parents of P(C_j cap I, r_{j-1}/(10 n_j))
    double packing_target = 0.0;     // (r_{j-1}/(10 n_j))^(-t_j)
    bool p1 = false, p2 = false, p3 = false;
};
struct SetEResult {
    std::vector<SetELevel> levels;  // level 0 included
    std::vector<Generation> arcs;   // arc families per level
    bool ok() const;
};
SetEResult construct_setE(const std::vector<Q>& t, int depth, std::uint64_t cap = kDefaultCap);

// ---------------------------------------------------------------- square/arc pair with small projections

struct Main2Params {
    Q gamma = 1;
    std::vector<long> k;  // gamma_j = 2 / k_j
    std::vector<Q> t;     // t_j
    int depth = 3;
};
Main2Params default_main2_params(const Q& gamma, int depth);

struct Main2Level {
    int j = 0;
    long k = 0;        // gamma_j = 2/k
    Q gamma_j;
    Q t;
    Z n;               // midpoints per parent arc
    Z m;               // ell_j^(-gamma_j/2)
    Q ell;             // square side
    Q super_side;      // side of the block of children, m * ell
    Z q;               // number of squares
    Z M;               // max (1+|p|)(1+|q|) over tags
    Q r;               // arc length
    std::vector<RationalTag> tags;   // e = c(1, p/q)
    std::vector<std::size_t> tag_parent;
    std::vector<std::pair<Z, Z>> centers;  // square midpoints times den
    Z den;
    std::vector<std::size_t> center_parent;
};
struct Main2History {
    Q gamma;
    std::vector<Main2Level> levels;  // level 0 included
    Generation generation(std::size_t j) const;
};
Main2History construct_main2(const Main2Params& p, std::uint64_t cap = kDefaultCap);

struct Main2Verification {
    bool nesting = false;        // (i)
    bool rational_tags = false;  // (ii)
    bool projections = false;    // (iii) sampled
    bool technical = false;      // (iii) shrunken squares
    bool packing = false;        // (iv)
    bool skeleton_bound = false; // skeleton projection bound
    bool tiling = false;         // children tile the block of side m * ell
    bool arcs = false;           // (P1)-(P3)
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::vector<std::string> witnesses;
    bool ok() const {
        return nesting && rational_tags && projections && technical && packing && skeleton_bound && tiling && arcs;
    }
};
Main2Verification verify_main2(const Main2History& h, int samples_per_arc = 32, int scales_per_level = 16,
                               unsigned threads = 0);

struct SweepPoint {
    std::size_t direction_index = 0;
    Q delta;
    Z n;
};
// N(rho_e(K_j), 2^-k) for k = 0..kmax along the tag directions of level j
std::vector<SweepPoint> main2_arc_sweep(const Main2History& h, std::size_t j, std::size_t max_dirs, long kmax,
                                        unsigned threads = 0);

// ---------------------------------------------------------------- bounded-depth tree

struct BigExParams {
    Q sigma = Q(19, 25);
    int depth = 1;
    long pmax = 5;  // blocks B_p checked in (IND), p = 0..pmax
    long nmax = 7;  // search cap for n_v
    unsigned threads = 0;
};

struct BigExVertex {
    int height = 0;
    ExactDir e;
    Z child_k;        // index k of e in D_n (0 for the root)
    Q c;              // c_v
    Q delta;          // ball diameter of K_v and arc length of I_v
    bool vii_ok = false;
    std::uint64_t vii_checks = 0;
};

struct BigExExpansion {
    long n = 0, m = 0;
    Z children;                 // (n!)^(d-3)
    std::vector<std::string> rejected;  // why smaller n failed
    bool in_arc = false, skeleton_ok = false, cover_ok = false, cw_ok = false, delta_s_ok = false;
    bool arcs_disjoint = false;
    Q c_w;
    Q delta_w;
    double c_tplus = 0.0;       // measured
};

struct BigExTree {
    Q sigma, tau, t, s, s_tau;
    long d = 0;
    long k_root = 1;
    double c_tau = 0.0;    // measured
    double delta_s = 0.0;  // measured
    std::vector<BigExVertex> vertices;  // root first, then tracked children
    std::vector<BigExExpansion> expansions;
    std::uint64_t ind_checks = 0;
    std::uint64_t ind_failures = 0;
    std::vector<std::string> witnesses;
    bool ok() const;
};

// expansion failed: no n <= nmax satisfies every condition
struct BigExSearchError : std::runtime_error {
    std::vector<std::string> reasons;
    BigExSearchError(const std::string& m, std::vector<std::string> r) : std::runtime_error(m), reasons(std::move(r)) {}
};

BigExTree construct_bigex(const BigExParams& p);

}  // namespace projlab
