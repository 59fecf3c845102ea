// projlab command-line runner. Exit codes: 0 ok, 1 verification failure, 2 configuration error.
#include "svg.hpp"

#include "projlab/bounds.hpp"
#include "projlab/constructions.hpp"
#include "projlab/covering.hpp"
#include "projlab/discrete.hpp"
#include "projlab/incidence.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <variant>

using namespace projlab;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kConfigError = 2;
constexpr const char* kCapEnv = "PROJLAB_CAP";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    unsigned threads = 0;
    std::uint64_t cap = kDefaultCap;
};

// ---------------------------------------------------------------- output helpers

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path, std::ios::binary);
        if (!file_) throw ConfigError("cannot open output file " + path);
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

// shortest text that round-trips
std::string num(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

Q rational_arg(const std::string& s, const char* name) {
    try {
        return parse_q(s);
    } catch (const std::exception&) {
        throw ConfigError(std::string("--") + name + ": not a rational number: " + s);
    }
}

std::vector<Q> rational_list(const std::string& s, const char* name) {
    std::vector<Q> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(rational_arg(item, name));
    }
    if (out.empty()) throw ConfigError(std::string("--") + name + ": empty list");
    return out;
}

// portable uniform doubles in [0,1) from a 64-bit engine
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

std::vector<Point> random_disk(std::mt19937_64& rng, std::size_t n, double radius = 1.0) {
    std::vector<Point> out;
    out.reserve(n);
    while (out.size() < n) {
        double x = 2 * uniform01(rng) - 1, y = 2 * uniform01(rng) - 1;
        if (x * x + y * y <= 1) out.push_back({radius * x, radius * y});
    }
    return out;
}

void check_scales(int kmin, int kmax) {
    if (kmin > kmax) throw ConfigError("scale range: need kmin <= kmax");
    if (kmax > 1000 || kmin < -60) throw ConfigError("scale range out of bounds");
}

// ---------------------------------------------------------------- set selection for sweeps

struct SetSpec {
    std::string construction = "block-b";
    long n = 3, d = 3;
    int steps = 6;
    std::string gamma = "1";
    int depth = 3;
    int level = -1;  // -1: last generation
    std::uint64_t seed = 1;
};

void add_set_options(CLI::App* c, SetSpec& s) {
    c->add_option("--construction", s.construction, "main | main2 | block-b | block-u | grid | random")
        ->check(CLI::IsMember({"main", "main2", "block-b", "block-u", "grid", "random"}))
        ->capture_default_str();
    c->add_option("--n", s.n, "block index, grid side or random point count")->capture_default_str();
    c->add_option("--d", s.d, "block exponent d")->capture_default_str();
    c->add_option("--steps", s.steps, "cascade steps (main)")->capture_default_str();
    c->add_option("--gamma", s.gamma, "target dimension (main2), rational")->capture_default_str();
    c->add_option("--depth", s.depth, "depth (main2)")->capture_default_str();
    c->add_option("--level", s.level, "generation to use; -1 for the last")->capture_default_str();
    c->add_option("--seed", s.seed, "seed for random point sets")->capture_default_str();
}

using AnySet = std::variant<BallUnion, SquareUnion, std::vector<Point>>;

struct BuiltSet {
    AnySet set;
    std::string label;
};

std::size_t pick_level(int level, std::size_t count) {
    if (level < 0) return count - 1;
    if (static_cast<std::size_t>(level) >= count)
        throw ConfigError("--level " + std::to_string(level) + " exceeds the last generation " +
                          std::to_string(count - 1));
    return static_cast<std::size_t>(level);
}

BuiltSet build_set(const SetSpec& s, const Globals& g) {
    if (s.construction == "main") {
        if (s.steps < 1) throw ConfigError("--steps must be positive");
        auto r = construct_main(default_main_params(s.steps), s.steps, 16, g.cap);
        std::size_t j = pick_level(s.level, r.generations.size());
        return {to_float(r.generations[j].balls), "main generation " + std::to_string(j)};
    }
    if (s.construction == "main2") {
        if (s.depth < 1) throw ConfigError("--depth must be at least 1");
        auto h = construct_main2(default_main2_params(rational_arg(s.gamma, "gamma"), s.depth), g.cap);
        std::size_t j = pick_level(s.level, h.levels.size());
        return {h.generation(j).square_set, "main2 level " + std::to_string(j)};
    }
    if (s.construction == "block-b") return {to_float(block_B(s.n, s.d, g.cap)), "B_n"};
    if (s.construction == "block-u") return {block_U(s.n, g.cap), "U_n"};
    if (s.construction == "grid") {
        if (s.n < 1) throw ConfigError("--n must be positive");
        if (static_cast<std::uint64_t>(s.n) * s.n > g.cap) throw ConfigError("grid exceeds the size cap");
        return {to_float(grid_points(s.n, make_q(1, s.n), QPoint{make_q(1, 2 * s.n), make_q(1, 2 * s.n)})),
                "grid"};
    }
    if (s.n < 1) throw ConfigError("--n must be positive");
    if (static_cast<std::uint64_t>(s.n) > g.cap) throw ConfigError("point count exceeds the size cap");
    std::mt19937_64 rng(s.seed);
    return {random_disk(rng, static_cast<std::size_t>(s.n), 0.5), "random"};
}

std::vector<SweepRow> sweep_any(const AnySet& k, const std::vector<Direction>& dirs, const std::vector<double>& deltas,
                                unsigned threads) {
    return std::visit([&](const auto& set) { return direction_sweep(set, dirs, deltas, threads); }, k);
}

std::vector<Direction> angle_net(std::size_t count) {
    if (count < 1) throw ConfigError("--directions must be positive");
    std::vector<Direction> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(direction_from_angle(std::numbers::pi * k / count));
    return out;
}

void write_svg_file(const std::string& path, const std::string& title, const std::vector<cli::Series>& series) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open svg file " + path);
    cli::write_loglog_svg(f, title, "1/delta", "N", series);
}

// ---------------------------------------------------------------- construct

struct ConstructOpts {
    std::string construction = "main";
    int steps = 6;
    std::string t = "1/2";
    std::string gamma = "1";
    int depth = 3;
    std::string sigma = "19/25";
    long pmax = 5, nmax = 7;
    long n = 3, d = 3;
    std::string out;
};

int run_construct(const ConstructOpts& o, const Globals& g) {
    Output out(o.out);
    std::ostream& os = out.stream();
    if (o.construction == "main") {
        if (o.steps < 1) throw ConfigError("--steps must be positive");
        auto r = construct_main(default_main_params(o.steps), o.steps, 16, g.cap);
        for (auto& gen : r.generations) write_generation(os, gen);
        std::cerr << "main: " << r.steps.size() << " steps, certificates " << (r.ok() ? "ok" : "FAILED") << '\n';
        return r.ok() ? kOk : kVerifyFailed;
    }
    if (o.construction == "setE") {
        auto t = rational_list(o.t, "t");
        auto r = construct_setE(t, static_cast<int>(t.size()), g.cap);
        for (auto& gen : r.arcs) write_generation(os, gen);
        std::cerr << "setE: " << t.size() << " levels, properties " << (r.ok() ? "ok" : "FAILED") << '\n';
        return r.ok() ? kOk : kVerifyFailed;
    }
    if (o.construction == "main2") {
        if (o.depth < 1) throw ConfigError("--depth must be at least 1");
        auto h = construct_main2(default_main2_params(rational_arg(o.gamma, "gamma"), o.depth), g.cap);
        for (std::size_t j = 0; j < h.levels.size(); ++j) write_generation(os, h.generation(j));
        std::cerr << "main2: " << h.levels.size() - 1 << " levels\n";
        return kOk;
    }
    if (o.construction == "bigex") {
        BigExParams p;
        p.sigma = rational_arg(o.sigma, "sigma");
        p.depth = o.depth;
        p.pmax = o.pmax;
        p.nmax = o.nmax;
        p.threads = g.threads;
        auto t = construct_bigex(p);
        os << "vertex,height,ex,ey,child_k,c,delta,vii_ok,vii_checks\n";
        for (std::size_t i = 0; i < t.vertices.size(); ++i) {
            auto& v = t.vertices[i];
            os << i << ',' << v.height << ',' << v.e.a.get_str() << ',' << v.e.b.get_str() << ','
               << v.child_k.get_str() << ',' << v.c.get_str() << ',' << v.delta.get_str() << ','
               << (v.vii_ok ? 1 : 0) << ',' << v.vii_checks << '\n';
        }
        std::cerr << "bigex: d=" << t.d << " tau=" << t.tau.get_str() << ", " << t.ind_checks << " (IND) checks, "
                  << t.ind_failures << " failures, tree " << (t.ok() ? "ok" : "FAILED") << '\n';
        return t.ok() ? kOk : kVerifyFailed;
    }
    Generation gen;
    if (o.construction == "block-b") {
        gen.balls = block_B(o.n, o.d, g.cap);
    } else if (o.construction == "block-u") {
        gen.squares = true;
        gen.square_set = block_U(o.n, g.cap);
    } else {  // block-l
        gen.squares = true;
        gen.square_set = block_L(o.n, o.d, g.cap);
    }
    write_generation(os, gen);
    return kOk;
}

// ---------------------------------------------------------------- sweep and dimest

struct SweepOpts {
    SetSpec set;
    std::size_t directions = 16;
    int kmin = 1, kmax = 10;
    std::string out, svg;
};

int run_sweep(const SweepOpts& o, const Globals& g) {
    check_scales(o.kmin, o.kmax);
    auto built = build_set(o.set, g);
    auto dirs = angle_net(o.directions);
    auto rows = sweep_any(built.set, dirs, dyadic_scales(o.kmin, o.kmax), g.threads);
    Output out(o.out);
    write_sweep_csv(out.stream(), rows);
    if (!o.svg.empty()) {
        std::vector<cli::Series> series(dirs.size());
        for (std::size_t i = 0; i < dirs.size(); ++i) series[i].label = "direction " + std::to_string(i);
        for (auto& r : rows) series[r.direction_index].points.push_back({1 / r.delta, static_cast<double>(r.n)});
        write_svg_file(o.svg, "N(K_e, delta) for " + built.label, series);
    }
    return kOk;
}

struct DimestOpts {
    SetSpec set;
    std::string mode = "set";  // set | projection | arcs
    double angle = 0.0;
    std::size_t arc_dirs = 8;
    int kmin = 1, kmax = 10;
    std::string profile_in, out, svg;
};

ScaleProfile read_profile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read profile " + path);
    ScaleProfile p;
    std::string line;
    std::getline(f, line);
    if (line.rfind("delta,N,P", 0) != 0) throw ConfigError("profile " + path + ": expected header delta,N,P");
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        try {
            p.entries.push_back({std::stod(a), std::stod(b), c.empty() ? -1.0 : std::stod(c)});
        } catch (const std::exception&) {
            throw ConfigError("profile " + path + ": bad row " + line);
        }
    }
    return p;
}

void report_estimate(const DimensionEstimate& e, const std::string& what) {
    std::cerr << what << ": slope " << num(e.slope) << ", intercept " << num(e.intercept) << ", residual "
              << num(e.residual) << ", scales [" << num(e.delta_min) << ", " << num(e.delta_max) << "]"
              << (e.clamped ? ", clamped" : "") << '\n';
}

int run_dimest(const DimestOpts& o, const Globals& g) {
    check_scales(o.kmin, o.kmax);
    Output out(o.out);
    std::vector<cli::Series> series;
    if (!o.profile_in.empty()) {
        auto p = read_profile(o.profile_in);
        auto e = estimate_box_dimension(p, 2);
        write_profile_csv(out.stream(), p);
        report_estimate(e, "profile");
        cli::Series s{"profile", {}};
        for (auto& x : p.entries) s.points.push_back({1 / x.delta, x.n});
        series.push_back(std::move(s));
    } else if (o.mode == "arcs") {
        if (o.set.construction != "main2") throw ConfigError("--mode arcs needs --construction main2");
        if (o.set.depth < 1) throw ConfigError("--depth must be at least 1");
        auto h = construct_main2(default_main2_params(rational_arg(o.set.gamma, "gamma"), o.set.depth), g.cap);
        std::size_t j = pick_level(o.set.level, h.levels.size());
        if (j == 0) throw ConfigError("--mode arcs needs a level >= 1");
        Q inv = 1 / h.levels[j].ell;
        long kmax = static_cast<long>(mpz_sizeinbase(inv.get_num().get_mpz_t(), 2)) - 1;
        auto sw = main2_arc_sweep(h, j, o.arc_dirs, kmax, g.threads);
        std::vector<ScaleProfile> prof;
        for (auto& p : sw) {
            if (p.direction_index >= prof.size()) prof.resize(p.direction_index + 1);
            prof[p.direction_index].entries.push_back({p.delta.get_d(), p.n.get_d(), -1});
        }
        std::ostream& os = out.stream();
        os << "direction_index,delta,N\n";
        for (auto& p : sw) os << p.direction_index << ',' << num(p.delta.get_d()) << ',' << p.n.get_str() << '\n';
        double worst = 0;
        for (std::size_t i = 0; i < prof.size(); ++i) {
            auto e = estimate_box_dimension(prof[i], 1);
            worst = std::max(worst, e.slope);
            report_estimate(e, "arc direction " + std::to_string(i));
            cli::Series s{"direction " + std::to_string(i), {}};
            for (auto& x : prof[i].entries) s.points.push_back({1 / x.delta, x.n});
            series.push_back(std::move(s));
        }
        std::cerr << "max slope " << num(worst) << '\n';
    } else {
        auto built = build_set(o.set, g);
        auto deltas = dyadic_scales(o.kmin, o.kmax);
        ScaleProfile p;
        int ambient = 2;
        if (o.mode == "projection") {
            ambient = 1;
            auto rows = sweep_any(built.set, {direction_from_angle(o.angle)}, deltas, g.threads);
            for (auto& r : rows) p.entries.push_back({r.delta, static_cast<double>(r.n), static_cast<double>(r.p)});
        } else if (o.mode == "set") {
            for (double d : deltas) {
                ScaleEntry e{d, 0, -1};
                if (auto* b = std::get_if<BallUnion>(&built.set)) {
                    e.n = static_cast<double>(covering_number_2d(*b, d));
                } else if (auto* q = std::get_if<SquareUnion>(&built.set)) {
                    // squares as their centers: within side/2 * sqrt2 of the set
                    e.n = static_cast<double>(covering_number_2d(to_float(q->centers), d));
                } else {
                    auto& pts = std::get<std::vector<Point>>(built.set);
                    e.n = static_cast<double>(covering_number_2d(pts, d));
                    e.p = static_cast<double>(packing_number_2d(pts, d));
                }
                p.entries.push_back(e);
            }
        } else {
            throw ConfigError("--mode must be set, projection or arcs");
        }
        write_profile_csv(out.stream(), p);
        report_estimate(estimate_box_dimension(p, ambient), built.label);
        cli::Series s{built.label, {}};
        for (auto& x : p.entries) s.points.push_back({1 / x.delta, x.n});
        series.push_back(std::move(s));
    }
    if (!o.svg.empty()) write_svg_file(o.svg, "box counting", series);
    return kOk;
}

// ---------------------------------------------------------------- energy

struct EnergyOpts {
    std::string points = "random";
    long n = 500;
    std::uint64_t seed = 1;
    double delta = 1.0 / 64;
    double net_delta = 0.0;  // 0: same as delta
    std::string out;
};

int run_energy(const EnergyOpts& o, const Globals& g) {
    if (!(o.delta > 0)) throw ConfigError("--delta must be positive");
    if (o.n < 1) throw ConfigError("--n must be positive");
    std::vector<Point> c;
    if (o.points == "grid") {
        c = to_float(grid_points(o.n, make_q(1, o.n), QPoint{make_q(1, 2 * o.n), make_q(1, 2 * o.n)}));
    } else {
        std::mt19937_64 rng(o.seed);
        c = random_disk(rng, static_cast<std::size_t>(o.n));
    }
    auto net = direction_net(o.net_delta > 0 ? o.net_delta : o.delta);
    auto r = counting_energy(c, net, o.delta, g.threads);
    Output out(o.out);
    write_energy_csv(out.stream(), r);
    std::cerr << "energy: " << net.size() << " directions, total " << num(r.total) << ", Cauchy-Schwarz "
              << (r.cs_holds ? "holds" : "FAILS") << '\n';
    return r.cs_holds ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    long pmax = 5, qmax = 5, nmax = 64, nmin = 2;  // grid
    long n = 3, d = 3;                             // line-intersect
    int kmin = 6, kmax = 10;                       // marstrand / product
    std::string tau = "0.3,0.5,0.7";
    long points = 20000;
    double constant = 64;
    std::uint64_t seed = 1;
    long grid_max = 14, random_sets = 500, set_size = 12;  // incidence
    std::string s_list = "1/2,3/5,3/4";
    double inc_constant = 8;
    std::string witness;
    long unions = 100;  // product
    std::string t = "1/10,1/5,3/10";  // setE
    std::string gamma = "1";          // main2
    int depth = 3;
    int samples = 32, scales = 16;
    std::string sigma = "19/25";  // bigex
    int bx_depth = 1;
    long bx_pmax = 5, bx_nmax = 7;
};

int verdict(bool ok, const std::string& summary, const std::vector<std::string>& witnesses = {}) {
    std::cout << summary << '\n';
    if (!ok) {
        for (auto& w : witnesses) std::cout << "witness: " << w << '\n';
        std::cout << "FAILED\n";
    }
    return ok ? kOk : kVerifyFailed;
}

int verify_grid(const VerifyOpts& o, const Globals& g) {
    if (o.pmax < 1 || o.qmax < 1 || o.nmin < 1 || o.nmax < o.nmin) throw ConfigError("grid: bad ranges");
    auto r = verify_grid_lemma(o.pmax, o.qmax, o.nmax, o.nmin, g.threads);
    std::ostringstream s;
    s << "grid: " << r.cases << " cases, " << r.violations << " violations, " << r.preimage_failures
      << " preimage failures";
    return verdict(r.violations == 0 && r.preimage_failures == 0, s.str(), r.witnesses);
}

int verify_lines(const VerifyOpts& o, const Globals& g) {
    auto r = verify_line_intersect(o.n, o.d, g.cap);
    std::ostringstream s;
    s << "line-intersect n=" << o.n << " d=" << o.d << ": " << r.points << " skeleton points, " << r.lines_checked
      << " lines, " << r.violations << " violations\n";
    if (r.violations == 0) s << "every meeting line hits S_n^+ in " << r.factorial.get_str() << " points\n";
    s << "x-coordinate form " << (r.xcoord_ok ? "holds" : "FAILS") << ", copies disjoint "
      << (r.plus_disjoint ? "yes" : "NO") << ", max projection card " << r.max_projection_card.get_str() << " <= "
      << r.card_bound.get_str() << ' ' << (r.card_ok ? "yes" : "NO");
    return verdict(r.ok(), s.str(), r.witnesses);
}

int verify_marstrand(const VerifyOpts& o, const Globals& g) {
    if (o.kmin < 1 || o.kmax < o.kmin || o.kmax > 16) throw ConfigError("marstrand: need 1 <= kmin <= kmax <= 16");
    if (o.points < 1 || static_cast<std::uint64_t>(o.points) > g.cap) throw ConfigError("marstrand: bad --points");
    auto taus = rational_list(o.tau, "tau");
    std::mt19937_64 rng(o.seed);
    auto pool = random_disk(rng, static_cast<std::size_t>(o.points));
    std::size_t runs = 0;
    std::vector<std::string> bad;
    for (int k = o.kmin; k <= o.kmax; ++k) {
        double delta = std::ldexp(1.0, -k);
        auto c = extract_delta_one_subset(pool, delta, direction_from_angle(0.1 * k));
        if (!counting_energy(c, direction_net(delta), delta, g.threads).cs_holds)
            bad.push_back("Cauchy-Schwarz certificate at delta=2^-" + std::to_string(k));
        for (auto& tq : taus) {
            double tau = to_double(tq);
            auto s = marstrand_exceptional_scan(c, delta, tau, 3.0, g.threads);
            ++runs;
            double cap = o.constant * std::pow(delta, tau - 1) * std::log(1 / delta);
            std::cout << "delta=2^-" << k << " tau=" << num(tau) << " n=" << c.size() << " count=" << s.count
                      << " cap=" << num(cap) << '\n';
            if (static_cast<double>(s.count) > cap)
                bad.push_back("delta=2^-" + std::to_string(k) + " tau=" + num(tau) + " count " +
                              std::to_string(s.count));
        }
    }
    return verdict(bad.empty(), "marstrand: " + std::to_string(runs) + " scans, " + std::to_string(bad.size()) +
                                    " violations",
                   bad);
}

int verify_incidence(const VerifyOpts& o, const Globals& g) {
    if (o.grid_max < 2 || o.set_size < 2 || o.random_sets < 0) throw ConfigError("incidence: bad sizes");
    auto ss = rational_list(o.s_list, "s");
    std::vector<std::string> bad;
    std::size_t sets = 0;
    ExceptionalReport last;
    auto check = [&](const PointSet& p, const std::string& name) {
        ++sets;
        double n = static_cast<double>(p.size());
        for (auto& s : ss) {
            auto r = exceptional_direction_count(p, s, g.threads);
            double cap = o.inc_constant * std::pow(n, 2 * to_double(s) - 1);
            if (static_cast<double>(r.count) > cap)
                bad.push_back(name + " s=" + s.get_str() + " count " + std::to_string(r.count));
            std::vector<ExactDir> dirs;
            for (auto& w : r.witnesses) dirs.push_back(w.dir);
            if (incidence_count(p, fiber_family(p, dirs)) != p.size() * dirs.size())
                bad.push_back(name + " s=" + s.get_str() + " incidence identity");
            last = std::move(r);
        }
    };
    for (long n = 2; n <= o.grid_max; ++n) check(grid_points(n), "grid " + std::to_string(n));
    std::mt19937_64 rng(o.seed);
    for (long it = 0; it < o.random_sets; ++it) {
        std::set<QPoint> s;
        long den = 1 + it % 4;
        while (static_cast<long>(s.size()) < o.set_size)
            s.insert(QPoint{make_q(static_cast<long>(rng() % 41) - 20, den),
                            make_q(static_cast<long>(rng() % 41) - 20, den)});
        check(PointSet(s.begin(), s.end()), "random set " + std::to_string(it));
    }
    if (!o.witness.empty()) {
        Output w(o.witness);
        write_witness_csv(w.stream(), last);
    }
    return verdict(bad.empty(), "incidence: " + std::to_string(sets) + " sets, " + std::to_string(bad.size()) +
                                    " violations",
                   bad);
}

int verify_product(const VerifyOpts& o, const Globals&) {
    if (o.kmin < 0 || o.kmax < o.kmin || o.kmax > 30) throw ConfigError("product: need 0 <= kmin <= kmax <= 30");
    std::mt19937_64 rng(o.seed);
    std::vector<std::string> bad;
    std::size_t checks = 0;
    for (long it = 0; it < o.unions; ++it) {
        BallUnion k;
        k.radius = std::ldexp(1.0, -static_cast<int>(5 + it % 6));
        Direction e = direction_from_angle(std::numbers::pi * uniform01(rng));
        Rotation r = rotate_to(e);
        long count = 5 + it % 40;
        for (long i = 0; i < count; ++i) {
            Point c{0.9 * uniform01(rng) - 0.45, 0.9 * uniform01(rng) - 0.45};
            k.balls.push_back(Ball{{c.x * r.m00 + c.y * r.m10, c.x * r.m01 + c.y * r.m11}, k.radius});
        }
        for (int j = o.kmin; j <= o.kmax; ++j) {
            double delta = std::ldexp(1.0, -j);
            auto n2 = covering_number_2d(k, delta);
            auto nx = mesh_count_1d(project_union(k, Direction{1, 0, {}}), delta);
            auto ny = mesh_count_1d(project_union(k, Direction{0, 1, {}}), delta);
            ++checks;
            if (n2 > nx * ny)
                bad.push_back("union " + std::to_string(it) + " delta=2^-" + std::to_string(j) + ": " +
                              std::to_string(n2) + " > " + std::to_string(nx) + "*" + std::to_string(ny));
        }
    }
    return verdict(bad.empty(), "product: " + std::to_string(checks) + " checks, " + std::to_string(bad.size()) +
                                    " violations",
                   bad);
}

int verify_setE(const VerifyOpts& o, const Globals& g) {
    auto t = rational_list(o.t, "t");
    auto r = construct_setE(t, static_cast<int>(t.size()), g.cap);
    std::vector<std::string> bad;
    for (std::size_t j = 1; j < r.levels.size(); ++j) {
        auto& lv = r.levels[j];
        std::cout << "level " << j << ": n=" << lv.n.get_str() << " r=" << lv.r.get_str() << " P1=" << lv.p1
                  << " P2=" << lv.p2 << " P3=" << lv.p3 << " packing " << lv.packing_min << " >= "
                  << num(lv.packing_target) << '\n';
        if (!lv.p1 || !lv.p2 || !lv.p3 || lv.packing_min < lv.n.get_ui())
            bad.push_back("level " + std::to_string(j));
    }
    return verdict(r.ok(), "setE: " + std::to_string(t.size()) + " levels", bad);
}

int verify_main2_cmd(const VerifyOpts& o, const Globals& g) {
    if (o.depth < 1 || o.samples < 1 || o.scales < 1) throw ConfigError("main2: depth, samples, scales must be >= 1");
    auto h = construct_main2(default_main2_params(rational_arg(o.gamma, "gamma"), o.depth), g.cap);
    auto v = verify_main2(h, o.samples, o.scales, g.threads);
    std::ostringstream s;
    s << "main2: nesting " << v.nesting << ", tags " << v.rational_tags << ", projections " << v.projections
      << ", technical " << v.technical << ", packing " << v.packing << ", skeleton bound " << v.skeleton_bound << ", tiling "
      << v.tiling << ", arcs " << v.arcs << "; " << v.samples << " samples, " << v.violations << " violations";
    return verdict(v.ok(), s.str(), v.witnesses);
}

int verify_bigex_cmd(const VerifyOpts& o, const Globals& g) {
    BigExParams p;
    p.sigma = rational_arg(o.sigma, "sigma");
    p.depth = o.bx_depth;
    p.pmax = o.bx_pmax;
    p.nmax = o.bx_nmax;
    p.threads = g.threads;
    BigExTree t;
    try {
        t = construct_bigex(p);
    } catch (const BigExSearchError& e) {
        return verdict(false, std::string("bigex: ") + e.what(), e.reasons);
    }
    std::ostringstream s;
    s << "bigex: d=" << t.d << " tau=" << t.tau.get_str() << " t=" << t.t.get_str() << ", measured c_tau "
      << num(t.c_tau) << ", delta_s " << num(t.delta_s) << ", " << t.vertices.size() << " vertices, "
      << t.ind_checks << " (IND) checks, " << t.ind_failures << " failures";
    for (auto& x : t.expansions)
        s << "\nexpansion n=" << x.n << " m=" << x.m << " children " << x.children.get_str() << " c_w "
          << x.c_w.get_str() << " arcs disjoint " << (x.arcs_disjoint ? "yes" : "NO");
    return verdict(t.ok(), s.str(), t.witnesses);
}

// ---------------------------------------------------------------- bounds

struct BoundsOpts {
    std::string formula = "all";
    std::optional<double> gamma, sigma, s, tau, m, dim_k;
    std::string out;
};

int run_bounds(const BoundsOpts& o) {
    BoundQuery q{o.gamma, o.sigma, o.s, o.tau, o.m, o.dim_k};
    std::vector<std::string> names;
    if (o.formula == "all") names = bound_formulas();
    else names.push_back(o.formula);
    std::ostringstream os;
    os << "formula,params,value\n";
    bool any = false;
    for (auto& f : names) {
        try {
            double v = evaluate_bound(f, q);
            os << f << ',' << format_bound_params(f, q) << ',' << num(v) << '\n';
            any = true;
        } catch (const BoundDomainError&) {
            // "all" skips formulas whose parameters are missing or out of range
            if (o.formula != "all") throw;
        }
    }
    if (!any) throw ConfigError("no formula applies to the given parameters");
    Output out(o.out);
    out.stream() << os.str();
    return kOk;
}

bool flag_on_command_line(int argc, char** argv, const std::string& flag) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projlab: projections of planar sets at finite resolution"};
    app.set_config("--config", "", "INI file of key = value lines; [section] per subcommand, e.g. [verify.grid]");
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.require_subcommand(1);

    Globals g;
    app.add_option("--threads", g.threads, "worker threads, 0 = hardware concurrency")->capture_default_str();
    app.add_option("--cap", g.cap, std::string("size cap on primitive objects (env ") + kCapEnv + ")")
        ->capture_default_str();

    ConstructOpts co;
    auto* construct = app.add_subcommand("construct", "build a set and write its generations");
    construct->add_option("--construction", co.construction)
        ->check(CLI::IsMember({"main", "setE", "main2", "bigex", "block-b", "block-u", "block-l"}))
        ->capture_default_str();
    construct->add_option("--steps", co.steps, "cascade steps (main)")->capture_default_str();
    construct->add_option("--t", co.t, "comma-separated t_j (setE)")->capture_default_str();
    construct->add_option("--gamma", co.gamma, "main2 dimension")->capture_default_str();
    construct->add_option("--depth", co.depth, "main2 or bigex depth")->capture_default_str();
    construct->add_option("--sigma", co.sigma, "bigex threshold in (3/4,1)")->capture_default_str();
    construct->add_option("--pmax", co.pmax, "bigex: blocks B_p checked")->capture_default_str();
    construct->add_option("--nmax", co.nmax, "bigex: search cap for n")->capture_default_str();
    construct->add_option("--n", co.n, "block index")->capture_default_str();
    construct->add_option("--d", co.d, "block exponent")->capture_default_str();
    construct->add_option("-o,--out", co.out, "output file, - for stdout");

    SweepOpts so;
    auto* sweep = app.add_subcommand("sweep", "N and P of projections over a direction net and dyadic scales");
    add_set_options(sweep, so.set);
    sweep->add_option("--directions", so.directions, "equally spaced directions in [0, pi)")->capture_default_str();
    sweep->add_option("--kmin", so.kmin, "largest scale 2^-kmin")->capture_default_str();
    sweep->add_option("--kmax", so.kmax, "smallest scale 2^-kmax")->capture_default_str();
    sweep->add_option("-o,--out", so.out, "CSV output, - for stdout");
    sweep->add_option("--svg", so.svg, "also write a log-log plot");

    DimestOpts dopt;
    auto* dimest = app.add_subcommand("dimest", "box-counting dimension estimate");
    add_set_options(dimest, dopt.set);
    dimest->add_option("--mode", dopt.mode, "set | projection | arcs")
        ->check(CLI::IsMember({"set", "projection", "arcs"}))
        ->capture_default_str();
    dimest->add_option("--angle", dopt.angle, "projection direction angle (mode projection)")->capture_default_str();
    dimest->add_option("--arc-directions", dopt.arc_dirs, "tag directions per level (mode arcs)")
        ->capture_default_str();
    dimest->add_option("--kmin", dopt.kmin)->capture_default_str();
    dimest->add_option("--kmax", dopt.kmax)->capture_default_str();
    dimest->add_option("--profile", dopt.profile_in, "estimate from an existing delta,N,P CSV");
    dimest->add_option("-o,--out", dopt.out, "CSV output, - for stdout");
    dimest->add_option("--svg", dopt.svg, "also write a log-log plot");

    EnergyOpts eo;
    auto* energy = app.add_subcommand("energy", "counting tube energy over a direction net");
    energy->add_option("--points", eo.points, "random | grid")
        ->check(CLI::IsMember({"random", "grid"}))
        ->capture_default_str();
    energy->add_option("--n", eo.n, "point count (random) or grid side")->capture_default_str();
    energy->add_option("--seed", eo.seed)->capture_default_str();
    energy->add_option("--delta", eo.delta, "tube width")->capture_default_str();
    energy->add_option("--net-delta", eo.net_delta, "direction net spacing, 0 = delta")->capture_default_str();
    energy->add_option("-o,--out", eo.out, "CSV output, - for stdout");

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "exact verification suites");
    verify->require_subcommand(1);
    auto* vgrid = verify->add_subcommand("grid", "grid projection bound and preimage count");
    vgrid->add_option("--pmax", vo.pmax)->capture_default_str();
    vgrid->add_option("--qmax", vo.qmax)->capture_default_str();
    vgrid->add_option("--nmax", vo.nmax)->capture_default_str();
    vgrid->add_option("--nmin", vo.nmin)->capture_default_str();
    auto* vline = verify->add_subcommand("line-intersect", "skeleton line intersections of B_n");
    vline->add_option("--n", vo.n)->capture_default_str();
    vline->add_option("--d", vo.d)->capture_default_str();
    auto* vmar = verify->add_subcommand("marstrand", "exceptional tube-scan count on extracted (delta,1)-sets");
    vmar->add_option("--kmin", vo.kmin)->capture_default_str();
    vmar->add_option("--kmax", vo.kmax)->capture_default_str();
    vmar->add_option("--tau", vo.tau, "comma-separated exponents")->capture_default_str();
    vmar->add_option("--points", vo.points, "random pool size")->capture_default_str();
    vmar->add_option("--constant", vo.constant, "cap constant")->capture_default_str();
    vmar->add_option("--seed", vo.seed)->capture_default_str();
    auto* vinc = verify->add_subcommand("incidence", "exceptional direction counts and the incidence identity");
    vinc->add_option("--grid-max", vo.grid_max)->capture_default_str();
    vinc->add_option("--random-sets", vo.random_sets)->capture_default_str();
    vinc->add_option("--set-size", vo.set_size)->capture_default_str();
    vinc->add_option("--s", vo.s_list, "comma-separated exponents")->capture_default_str();
    vinc->add_option("--constant", vo.inc_constant)->capture_default_str();
    vinc->add_option("--seed", vo.seed)->capture_default_str();
    vinc->add_option("--witness", vo.witness, "write a,b,cardinality of the last report");
    auto* vprod = verify->add_subcommand("product", "mesh count product inequality");
    vprod->add_option("--unions", vo.unions)->capture_default_str();
    vprod->add_option("--kmin", vo.kmin)->capture_default_str();
    vprod->add_option("--kmax", vo.kmax)->capture_default_str();
    vprod->add_option("--seed", vo.seed)->capture_default_str();
    auto* vset = verify->add_subcommand("setE", "circle arc set properties");
    vset->add_option("--t", vo.t, "comma-separated t_j")->capture_default_str();
    auto* vm2 = verify->add_subcommand("main2", "square/arc pair invariants");
    vm2->add_option("--gamma", vo.gamma)->capture_default_str();
    vm2->add_option("--depth", vo.depth)->capture_default_str();
    vm2->add_option("--samples", vo.samples, "directions per arc")->capture_default_str();
    vm2->add_option("--scales", vo.scales, "dyadic scales per level")->capture_default_str();
    auto* vbx = verify->add_subcommand("bigex", "bounded-depth tree certificates");
    vbx->add_option("--sigma", vo.sigma)->capture_default_str();
    vbx->add_option("--depth", vo.bx_depth)->capture_default_str();
    vbx->add_option("--pmax", vo.bx_pmax)->capture_default_str();
    vbx->add_option("--nmax", vo.bx_nmax)->capture_default_str();

    BoundsOpts bo;
    auto* bounds = app.add_subcommand("bounds", "closed-form bounds");
    bounds->require_subcommand(1);
    auto* beval = bounds->add_subcommand("eval", "evaluate one formula, or all that apply");
    beval->add_option("--formula", bo.formula, "formula name or all")->capture_default_str();
    beval->add_option("--gamma", bo.gamma);
    beval->add_option("--sigma", bo.sigma);
    beval->add_option("--s", bo.s);
    beval->add_option("--tau", bo.tau);
    beval->add_option("--m", bo.m);
    beval->add_option("--dim-k", bo.dim_k);
    beval->add_option("-o,--out", bo.out, "CSV output, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    // precedence: command line, then environment, then config file
    if (const char* env = std::getenv(kCapEnv); env && !flag_on_command_line(argc, argv, "--cap")) {
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
            g.cap = v;
        } catch (const std::exception&) {
            std::cerr << "error: " << kCapEnv << " is not a positive integer: " << env << '\n';
            return kConfigError;
        }
    }
    if (g.cap < 1) {
        std::cerr << "error: the size cap must be at least 1\n";
        return kConfigError;
    }

    try {
        if (construct->parsed()) return run_construct(co, g);
        if (sweep->parsed()) return run_sweep(so, g);
        if (dimest->parsed()) return run_dimest(dopt, g);
        if (energy->parsed()) return run_energy(eo, g);
        if (vgrid->parsed()) return verify_grid(vo, g);
        if (vline->parsed()) return verify_lines(vo, g);
        if (vmar->parsed()) return verify_marstrand(vo, g);
        if (vinc->parsed()) return verify_incidence(vo, g);
        if (vprod->parsed()) return verify_product(vo, g);
        if (vset->parsed()) return verify_setE(vo, g);
        if (vm2->parsed()) return verify_main2_cmd(vo, g);
        if (vbx->parsed()) return verify_bigex_cmd(vo, g);
        if (beval->parsed()) return run_bounds(bo);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SizeCapError& e) {
        std::cerr << "error: " << e.what() << " (raise --cap or " << kCapEnv << ")\n";
        return kConfigError;
    } catch (const BoundDomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const BigExSearchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        for (auto& r : e.reasons) std::cerr << "  " << r << '\n';
        return kVerifyFailed;
    } catch (const DeltaOneViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerifyFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerifyFailed;
    }
    return kConfigError;
}
