// Python bindings for the projlab library.
#include "projlab/bounds.hpp"
#include "projlab/constructions.hpp"
#include "projlab/covering.hpp"
#include "projlab/discrete.hpp"
#include "projlab/incidence.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace projlab;

namespace {

using PairList = std::vector<std::pair<double, double>>;

IntervalUnion make_intervals(const PairList& iv) {
    IntervalUnion u;
    for (auto& [a, b] : iv) {
        if (!(a <= b)) throw std::invalid_argument("interval endpoints must satisfy a <= b");
        u.iv.push_back({a, b});
    }
    u.normalize();
    return u;
}

std::vector<Point> make_points(const PairList& p) {
    std::vector<Point> out;
    out.reserve(p.size());
    for (auto& [x, y] : p) out.push_back({x, y});
    return out;
}

// accepts int, Fraction, or anything whose str() is a rational literal
Q to_q(const py::handle& h) { return parse_q(py::str(h)); }

PointSet make_qpoints(const std::vector<std::pair<py::object, py::object>>& p) {
    PointSet out;
    out.reserve(p.size());
    for (auto& [x, y] : p) out.push_back({to_q(x), to_q(y)});
    return out;
}

CoverMode cover_mode(const std::string& m) {
    if (m == "mesh") return CoverMode::mesh;
    if (m == "greedy") return CoverMode::greedy;
    throw std::invalid_argument("mode must be 'mesh' or 'greedy'");
}

py::object fraction(const Q& q) {
    static py::object frac = py::module_::import("fractions").attr("Fraction");
    return frac(py::int_(py::str(q.get_num().get_str())), py::int_(py::str(q.get_den().get_str())));
}

py::int_ big_int(const Z& z) { return py::int_(py::str(z.get_str())); }

}  // namespace

PYBIND11_MODULE(_projlab, m) {
    m.doc() = "Covering numbers of projections, exact incidence counts and closed-form bounds";

    py::register_exception<SizeCapError>(m, "SizeCapError", PyExc_MemoryError);
    py::register_exception<BoundDomainError>(m, "BoundDomainError", PyExc_ValueError);

    m.def(
        "covering_number_1d",
        [](const PairList& iv, double delta) { return covering_number_1d(make_intervals(iv), delta); },
        py::arg("intervals"), py::arg("delta"),
        "Least number of closed intervals of length 2*delta covering a union of intervals.");
    m.def(
        "packing_number_1d",
        [](const PairList& iv, double delta) { return packing_number_1d(make_intervals(iv), delta); },
        py::arg("intervals"), py::arg("delta"), "Largest 2*delta-separated subset of a union of intervals.");
    m.def(
        "mesh_count_1d", [](const PairList& iv, double delta) { return mesh_count_1d(make_intervals(iv), delta); },
        py::arg("intervals"), py::arg("delta"), "Number of closed mesh cells [i delta, (i+1) delta] met.");
    m.def(
        "covering_number_2d",
        [](const PairList& p, double delta, const std::string& mode) {
            return covering_number_2d(make_points(p), delta, cover_mode(mode));
        },
        py::arg("points"), py::arg("delta"), py::arg("mode") = "mesh");
    m.def(
        "packing_number_2d", [](const PairList& p, double delta) { return packing_number_2d(make_points(p), delta); },
        py::arg("points"), py::arg("delta"));

    m.def(
        "project",
        [](const PairList& p, double angle) {
            Direction e = direction_from_angle(angle);
            std::vector<double> out;
            for (auto& x : make_points(p)) out.push_back(project(x, e));
            return out;
        },
        py::arg("points"), py::arg("angle"), "Projections onto the direction (cos angle, sin angle).");
    m.def(
        "direction_sweep",
        [](const PairList& p, const std::vector<double>& angles, const std::vector<double>& deltas,
           unsigned threads) {
            std::vector<Direction> dirs;
            for (double a : angles) dirs.push_back(direction_from_angle(a));
            std::vector<py::dict> out;
            for (auto& r : direction_sweep(make_points(p), dirs, deltas, threads))
                out.push_back(py::dict(py::arg("direction_index") = r.direction_index, py::arg("delta") = r.delta,
                                       py::arg("N") = r.n, py::arg("P") = r.p));
            return out;
        },
        py::arg("points"), py::arg("angles"), py::arg("deltas"), py::arg("threads") = 0);
    m.def("dyadic_scales", &dyadic_scales, py::arg("kmin"), py::arg("kmax"));
    m.def(
        "estimate_box_dimension",
        [](const std::vector<double>& deltas, const std::vector<double>& counts, int ambient_dim) {
            if (deltas.size() != counts.size()) throw std::invalid_argument("deltas and counts differ in length");
            ScaleProfile p;
            for (std::size_t i = 0; i < deltas.size(); ++i) p.entries.push_back({deltas[i], counts[i], -1});
            auto e = estimate_box_dimension(p, ambient_dim);
            return py::dict(py::arg("slope") = e.slope, py::arg("intercept") = e.intercept,
                            py::arg("residual") = e.residual, py::arg("clamped") = e.clamped);
        },
        py::arg("deltas"), py::arg("counts"), py::arg("ambient_dim") = 2);

    m.def(
        "counting_energy",
        [](const PairList& p, double delta, unsigned threads) {
            auto r = counting_energy(make_points(p), direction_net(delta), delta, threads);
            std::ostringstream csv;
            write_energy_csv(csv, r);
            return py::dict(py::arg("total") = r.total, py::arg("cs_holds") = r.cs_holds,
                            py::arg("csv") = csv.str());
        },
        py::arg("points"), py::arg("delta"), py::arg("threads") = 0);

    m.def("grid_projection_count", &grid_projection_count, py::arg("n"), py::arg("p"), py::arg("q"));
    m.def(
        "verify_grid_lemma",
        [](long pmax, long qmax, long nmax, long nmin, unsigned threads) {
            auto r = verify_grid_lemma(pmax, qmax, nmax, nmin, threads);
            return py::dict(py::arg("cases") = r.cases, py::arg("violations") = r.violations,
                            py::arg("preimage_failures") = r.preimage_failures, py::arg("witnesses") = r.witnesses);
        },
        py::arg("pmax"), py::arg("qmax"), py::arg("nmax"), py::arg("nmin") = 2, py::arg("threads") = 0);
    m.def(
        "exceptional_direction_count",
        [](const std::vector<std::pair<py::object, py::object>>& p, const py::object& s, unsigned threads) {
            auto r = exceptional_direction_count(make_qpoints(p), to_q(s), threads);
            py::list w;
            for (auto& x : r.witnesses) w.append(py::make_tuple(big_int(x.dir.a), big_int(x.dir.b), x.cardinality));
            return py::dict(py::arg("n") = r.n, py::arg("threshold") = big_int(r.threshold),
                            py::arg("count") = r.count, py::arg("witnesses") = w);
        },
        py::arg("points"), py::arg("s"), py::arg("threads") = 0,
        "Directions (a,b) whose projection of the rational point set has at most floor(n^s) points.");

    m.def(
        "block_b",
        [](long n, long d, std::uint64_t cap) {
            auto k = block_B(n, d, cap);
            py::list centers;
            for (auto& c : k.centers) centers.append(py::make_tuple(fraction(c.x), fraction(c.y)));
            return py::make_tuple(centers, fraction(k.radius));
        },
        py::arg("n"), py::arg("d"), py::arg("cap") = kDefaultCap, "Exact centers and common radius of B_n.");

    m.def("bound_formulas", &bound_formulas);
    m.def(
        "evaluate_bound",
        [](const std::string& formula, std::optional<double> gamma, std::optional<double> sigma,
           std::optional<double> s, std::optional<double> tau, std::optional<double> m_, std::optional<double> dim_k) {
            return evaluate_bound(formula, BoundQuery{gamma, sigma, s, tau, m_, dim_k});
        },
        py::arg("formula"), py::kw_only(), py::arg("gamma") = py::none(), py::arg("sigma") = py::none(),
        py::arg("s") = py::none(), py::arg("tau") = py::none(), py::arg("m") = py::none(),
        py::arg("dim_k") = py::none());
}
