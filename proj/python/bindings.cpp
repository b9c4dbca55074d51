#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latslice/dimension.hpp"
#include "latslice/errors.hpp"
#include "latslice/finite_field.hpp"
#include "latslice/generators.hpp"
#include "latslice/geometry.hpp"
#include "latslice/report.hpp"
#include "latslice/survey.hpp"

namespace py = pybind11;
using namespace latslice;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::object& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

std::vector<Point> to_points(const std::vector<std::pair<double, double>>& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back({x, y});
  return out;
}

std::vector<std::pair<double, double>> from_points(std::span<const Point> pts) {
  std::vector<std::pair<double, double>> out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.emplace_back(p.x, p.y);
  return out;
}

}  // namespace

PYBIND11_MODULE(_latslice, m) {
  m.doc() = "Slicing and dimension counting for 1-separated planar point sets";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_AssertionError);

  py::class_<PointSet>(m, "PointSet")
      .def(py::init([](const std::vector<std::pair<double, double>>& pts) { return PointSet(to_points(pts)); }),
           py::arg("points"))
      .def("__len__", &PointSet::size)
      .def("points", [](const PointSet& s) { return from_points(s.points()); })
      .def("bbox", [](const PointSet& s) {
        const Rect& r = s.bbox();
        return py::make_tuple(r.xmin, r.ymin, r.xmax, r.ymax);
      })
      .def("in_first_quadrant", &PointSet::in_first_quadrant)
      .def("max_cell_occupancy", &PointSet::max_cell_occupancy)
      .def("validate_separation", [](const PointSet& s) {
        const SeparationReport r = s.validate_separation();
        py::dict d;
        d["min_distance"] = r.min_distance;
        d["valid"] = r.valid;
        d["pair"] = py::make_tuple(py::make_tuple(r.first.x, r.first.y), py::make_tuple(r.second.x, r.second.y));
        return d;
      });

  py::class_<Tube>(m, "Tube")
      .def_static("standard", &Tube::standard, py::arg("u"), py::arg("v"))
      .def_static("horizontal", &Tube::horizontal, py::arg("v"))
      .def_readonly("u", &Tube::u)
      .def_readonly("v", &Tube::v)
      .def("contains", [](const Tube& t, double x, double y) { return tube_contains(t, {x, y}); })
      .def("edge_distance", [](const Tube& t) { return tube_edge_distance(t); });

  py::class_<FloorLine>(m, "FloorLine")
      .def(py::init(&FloorLine::make), py::arg("u"), py::arg("v"))
      .def_readonly("u", &FloorLine::u)
      .def_readonly("v", &FloorLine::v);

  py::class_<BoxSpec>(m, "BoxSpec")
      .def_static("first_quadrant", &BoxSpec::first_quadrant, py::arg("l"))
      .def_static("centered", &BoxSpec::centered, py::arg("l"))
      .def_static("slanted", &BoxSpec::slanted, py::arg("n"), py::arg("u"), py::arg("v") = 0.0)
      .def_static("window", &BoxSpec::window, py::arg("x0"), py::arg("y0"), py::arg("l"))
      .def("contains", [](const BoxSpec& b, double x, double y) { return box_contains(b, {x, y}); });

  m.def("box_count", &box_count, py::arg("set"), py::arg("box"));
  m.def("slice_tube", &slice_tube, py::arg("set"), py::arg("tube"));
  m.def("tube_box_count", &tube_box_count, py::arg("set"), py::arg("tube"), py::arg("box"));
  m.def("slice_floor_line", &slice_floor_line, py::arg("set"), py::arg("line"), py::arg("x_max"));

  m.def("gen_unit_line", &gen_unit_line, py::arg("m"), py::arg("count"));
  m.def("gen_parabolic_staircase", &gen_parabolic_staircase, py::arg("columns"));
  m.def("staircase_box_count", [](std::int64_t columns, double l) {
    return ParabolicStaircase(columns).count_in_box(BoxSpec::first_quadrant(l));
  }, py::arg("columns"), py::arg("l"));
  m.def("gen_zigzag", [](double delta, std::int64_t levels) {
    ZigzagResult z = gen_zigzag(delta, levels);
    py::dict trace;
    trace["corners"] = from_points(z.trace.corners);
    trace["A"] = z.trace.a;
    trace["B"] = z.trace.b;
    trace["lambda1"] = z.trace.lambda1;
    trace["lambda2"] = z.trace.lambda2;
    trace["truncated"] = z.truncated;
    return py::make_tuple(std::move(z.points), trace);
  }, py::arg("delta"), py::arg("levels"));
  m.def("gen_cartesian", &gen_cartesian, py::arg("xs"), py::arg("ys"));
  m.def("gen_random_dimension", &gen_random_dimension, py::arg("alpha"), py::arg("l_max"), py::arg("seed"));
  m.def("generate", [](const py::object& spec) {
    const nlohmann::json j = from_python(spec);
    GeneratorSpec s;
    s.kind = parse_generator_kind(j.at("kind").get<std::string>());
    s.params = parse_generator_params(s.kind, j.value("params", nlohmann::json::object()));
    s.mode = parse_generation_mode(j.value("mode", std::string("materialize")));
    GeneratedSet g = generate(s);
    return py::make_tuple(g.points ? py::cast(std::move(*g.points)) : py::none(), to_python(g.info));
  }, py::arg("spec"));

  m.def("dyadic_scales", &dyadic_scales, py::arg("max_scale"));
  m.def("mass_dim_profile", [](const PointSet& s, const std::vector<double>& scales, bool centered,
                               const std::string& method) {
    ProfileOptions o;
    o.method = parse_estimate_method(method);
    return to_python(to_json(mass_dim_profile(s, scales, centered, o)));
  }, py::arg("set"), py::arg("scales"), py::arg("centered") = false, py::arg("method") = "ratio_max_tail");
  m.def("counting_dim_profile", [](const PointSet& s, const std::vector<double>& sizes) {
    return to_python(to_json(counting_dim_profile(s, sizes)));
  }, py::arg("set"), py::arg("sizes"));
  m.def("dim_1d_profile", [](const std::vector<std::int64_t>& a, const std::vector<double>& scales) {
    return to_python(to_json(dim_1d_profile(a, scales)));
  }, py::arg("values"), py::arg("scales"));
  m.def("tube_dim_along", [](const PointSet& s, const Tube& t, const std::vector<double>& scales,
                             const std::string& method) {
    ProfileOptions o;
    o.method = parse_estimate_method(method);
    return to_python(to_json(tube_dim_along(s, t, scales, o)));
  }, py::arg("set"), py::arg("tube"), py::arg("scales"), py::arg("method") = "ratio_max_tail");
  m.def("ff_dim", [](std::uint64_t cardinality, std::int64_t p) { return ff_dim(cardinality, p).value; },
        py::arg("cardinality"), py::arg("p"));
  m.def("annulus_profile", &annulus_profile, py::arg("set"), py::arg("u"), py::arg("v"), py::arg("levels"));
  m.def("find_levels", [](const PointSet& s, double u, double v, double alpha, double psi, std::int64_t bound) {
    return to_python(to_json(find_levels(s, u, v, LevelSearchConfig{alpha, psi, bound})));
  }, py::arg("set"), py::arg("u"), py::arg("v") = 0.0, py::arg("alpha") = 0.0, py::arg("psi") = 1.0,
        py::arg("bound") = 1024);

  m.def("survey_floor_lines", [](const PointSet& s, std::int64_t n, double big_m, std::int64_t grid_u,
                                 std::int64_t grid_v, std::int64_t mc, std::uint64_t seed, std::optional<double> k) {
    SurveyConfig c;
    c.n = n;
    c.m = big_m;
    c.grid_u = grid_u;
    c.grid_v = grid_v;
    c.mc_samples = mc;
    c.seed = seed;
    c.k_threshold = k;
    return to_python(to_json(survey_floor_lines(s, c)));
  }, py::arg("set"), py::arg("N"), py::arg("M"), py::arg("grid_u") = 64, py::arg("grid_v") = 64,
        py::arg("mc") = 0, py::arg("seed") = 0, py::arg("k") = py::none());

  py::class_<FiniteFieldSet>(m, "FiniteFieldSet")
      .def(py::init<std::int64_t>(), py::arg("p"))
      .def_static("full", &FiniteFieldSet::full, py::arg("p"))
      .def_static("random", &FiniteFieldSet::random, py::arg("p"), py::arg("density"), py::arg("seed"))
      .def_static("from_points", &FiniteFieldSet::from_points, py::arg("p"), py::arg("points"))
      .def_property_readonly("p", &FiniteFieldSet::p)
      .def("__len__", &FiniteFieldSet::cardinality)
      .def("contains", &FiniteFieldSet::contains)
      .def("insert", &FiniteFieldSet::insert)
      .def("points", &FiniteFieldSet::points);
  m.def("ff_line_points", &ff_line_points, py::arg("p"), py::arg("u"), py::arg("v"));
  m.def("ff_slice_count", &ff_slice_count, py::arg("set"), py::arg("u"), py::arg("v"));
  m.def("ff_double_count", &ff_double_count, py::arg("set"));
  m.def("ff_chebyshev_fraction", [](const FiniteFieldSet& s, double k) {
    return to_python(to_json(ff_chebyshev_fraction(s, k)));
  }, py::arg("set"), py::arg("k"));
  m.def("ff_affine_intersection", &ff_affine_intersection, py::arg("p"), py::arg("a"), py::arg("b"), py::arg("u"),
        py::arg("v"));

  m.def("run", [](const std::string& command, const py::object& params, std::uint64_t seed) {
    RunConfig c;
    c.command = parse_command(command);
    c.params = from_python(params);
    c.seed = seed;
    return to_python(to_json(run(c)));
  }, py::arg("command"), py::arg("params"), py::arg("seed") = 0,
        "Runs a command in memory and returns the report as a dict; no files are written.");
}
