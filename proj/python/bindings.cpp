#include "mvdfv/harness.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace mvd;

namespace {

using Pair = std::pair<double, double>;

Pair to_pair(Point2 p) { return {p.x1, p.x2}; }
Point2 to_point(const Pair& p) { return {p.first, p.second}; }

std::vector<Pair> to_pairs(const std::vector<Point2>& pts)
{
    std::vector<Pair> out;
    out.reserve(pts.size());
    for (const Point2& p : pts)
        out.push_back(to_pair(p));
    return out;
}

/// "K1".."K4", "k11 k12 k21 k22", or a sequence of four numbers.
Tensor2 to_tensor(const py::object& obj)
{
    if (py::isinstance<py::str>(obj))
        return parse_tensor(obj.cast<std::string>());
    const auto k = obj.cast<std::vector<double>>();
    if (k.size() != 4)
        throw ConfigError("tensor needs four entries");
    return {k[0], k[1], k[2], k[3]};
}

std::array<double, 4> from_tensor(const Tensor2& K) { return {K.k11, K.k12, K.k21, K.k22}; }

ScalarField field_on(const MvdMesh& mvd, std::vector<double> d, std::vector<double> v)
{
    ScalarField y{std::move(d), std::move(v), false, &mvd};
    require_on(y, mvd);
    return y;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Finite-volume diffusion-reaction solver on merged Voronoi-Delaunay meshes";

    static py::exception<Error> base_error(m, "MvdError", PyExc_RuntimeError);
    static py::exception<ParseError> parse_error(m, "ParseError", base_error.ptr());
    static py::exception<SolverError> solver_error(m, "SolverError", base_error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const ParseError& e) {
            py::set_error(parse_error, e.what());
        }
        catch (const SolverError& e) {
            py::set_error(solver_error, e.what());
        }
        catch (const Error& e) {
            py::set_error(base_error, e.what());
        }
    });

    py::class_<QualityReport>(m, "QualityReport")
        .def_readonly("min_angle", &QualityReport::min_angle)
        .def_readonly("max_angle", &QualityReport::max_angle)
        .def_readonly("num_obtuse_or_right", &QualityReport::num_obtuse_or_right)
        .def_readonly("is_acute", &QualityReport::is_acute);

    py::class_<TriMesh, std::shared_ptr<TriMesh>>(m, "TriMesh")
        .def_property_readonly("nodes", [](const TriMesh& t) { return to_pairs(t.nodes); })
        .def_readonly("triangles", &TriMesh::triangles)
        .def_readonly("boundary_nodes", &TriMesh::boundary_nodes)
        .def_property_readonly("domain", [](const TriMesh& t) { return to_pairs(t.domain); })
        .def_property_readonly("num_nodes", &TriMesh::num_nodes)
        .def_property_readonly("num_triangles", &TriMesh::num_triangles)
        .def("domain_area", &TriMesh::domain_area);

    m.def("parse_msh_file", [](const std::string& path) { return std::make_shared<TriMesh>(parse_msh_file(path)); },
          py::arg("path"));
    m.def("parse_msh_string", [](const std::string& text) { return std::make_shared<TriMesh>(parse_msh_string(text)); },
          py::arg("text"));
    m.def(
        "generate_rectangle_mesh",
        [](double h, double x1_min, double x2_min, double x1_max, double x2_max, int iters) {
            return std::make_shared<TriMesh>(generate_rectangle_mesh({x1_min, x2_min, x1_max, x2_max}, h, iters));
        },
        py::arg("h"), py::arg("x1_min") = 0.0, py::arg("x2_min") = 0.0, py::arg("x1_max") = 1.0,
        py::arg("x2_max") = 0.75, py::arg("max_smoothing_iters") = 200);
    m.def("equilateral_mesh", [](int k) { return std::make_shared<TriMesh>(equilateral_mesh(k)); }, py::arg("k"));
    m.def("validate_acute", &validate_acute, py::arg("mesh"), py::arg("angle_tol") = 0.5);

    py::class_<MvdCell>(m, "MvdCell")
        .def_property_readonly("center", [](const MvdCell& c) { return to_pair(c.center); })
        .def_readonly("d_nodes", &MvdCell::d_nodes)
        .def_readonly("v_nodes", &MvdCell::v_nodes)
        .def_property_readonly("e_D", [](const MvdCell& c) { return to_pair(c.frame.e_D); })
        .def_property_readonly("e_V", [](const MvdCell& c) { return to_pair(c.frame.e_V); })
        .def_property_readonly("theta", [](const MvdCell& c) { return c.frame.theta; })
        .def_readonly("len_D", &MvdCell::len_D)
        .def_readonly("len_V", &MvdCell::len_V)
        .def_readonly("S_star", &MvdCell::S_star)
        .def_readonly("is_boundary_degenerate", &MvdCell::is_boundary_degenerate);

    py::class_<MvdMesh, std::shared_ptr<MvdMesh>>(m, "MvdMesh")
        .def_property_readonly("num_D", &MvdMesh::num_D)
        .def_property_readonly("num_V", &MvdMesh::num_V)
        .def_property_readonly("num_cells", &MvdMesh::num_cells)
        .def_property_readonly("num_boundary_cells", &MvdMesh::num_boundary_cells)
        .def_readonly("cells", &MvdMesh::cells)
        .def_readonly("S_D", &MvdMesh::S_D)
        .def_readonly("S_V", &MvdMesh::S_V)
        .def_property_readonly("v_nodes", [](const MvdMesh& x) { return to_pairs(x.dual.vertices); })
        .def_property_readonly("d_nodes", [](const MvdMesh& x) { return to_pairs(x.tri.nodes); })
        .def_readonly("boundary_D", &MvdMesh::boundary_D)
        .def_readonly("boundary_V", &MvdMesh::boundary_V)
        .def("domain_area", &MvdMesh::domain_area)
        .def("dump_cells", [](const MvdMesh& x) {
            std::ostringstream out;
            dump_cells(out, x);
            return out.str();
        });

    m.def(
        "build_mvd",
        [](const TriMesh& mesh, bool allow_nonacute) { return std::make_shared<MvdMesh>(build_mvd(mesh, allow_nonacute)); },
        py::arg("mesh"), py::arg("allow_nonacute") = false);

    m.def("circumcenter", [](Pair a, Pair b, Pair c) { return to_pair(circumcenter(to_point(a), to_point(b), to_point(c))); });
    m.def("triangle_angles", [](Pair a, Pair b, Pair c) { return triangle_angles(to_point(a), to_point(b), to_point(c)); });
    m.def("rotate_tensor", [](const py::object& K, double theta) { return from_tensor(rotate_tensor(to_tensor(K), theta)); },
          py::arg("K"), py::arg("theta"));
    m.def("tensor_preset", [](int k) { return from_tensor(tensor_preset(k)); }, py::arg("k"));

    m.def("grad_h",
          [](const MvdMesh& mvd, std::vector<double> d, std::vector<double> v) {
              const VectorField g = grad_h(field_on(mvd, std::move(d), std::move(v)), mvd);
              return std::make_pair(g.comp_D, g.comp_V);
          },
          py::arg("mvd"), py::arg("values_D"), py::arg("values_V"));
    m.def("div_h",
          [](const MvdMesh& mvd, std::vector<double> comp_D, std::vector<double> comp_V) {
              const VectorField w{std::move(comp_D), std::move(comp_V), &mvd};
              return std::make_pair(div_D(w, mvd), div_V(w, mvd));
          },
          py::arg("mvd"), py::arg("comp_D"), py::arg("comp_V"));

    m.def(
        "solve",
        [](const MvdMesh& mvd, const py::object& K, double r, const std::function<double(double, double)>& f,
           double tol) {
            const Tensor2 k = to_tensor(K);
            const Problem problem = make_problem(mvd, k, r, [&f](Point2 x) { return f(x.x1, x.x2); });
            const LinearSystem sys = assemble(problem);
            SolveStats stats;
            const ScalarField y = solve_cg(sys, tol, 0, &stats);
            py::dict out;
            out["values_D"] = y.values_D;
            out["values_V"] = y.values_V;
            out["iterations"] = stats.iterations;
            out["energy_residual"] = energy_identity_residual(y, problem);
            return out;
        },
        py::arg("mvd"), py::arg("tensor"), py::arg("reaction"), py::arg("f"), py::arg("tol") = 1e-10);

    py::class_<CaseResult>(m, "CaseResult")
        .def_readonly("M_D", &CaseResult::M_D)
        .def_readonly("M_V", &CaseResult::M_V)
        .def_readonly("M", &CaseResult::M)
        .def_readonly("eps2_D", &CaseResult::eps2_D)
        .def_readonly("eps2_V", &CaseResult::eps2_V)
        .def_readonly("epsInf_D", &CaseResult::epsInf_D)
        .def_readonly("epsInf_V", &CaseResult::epsInf_V)
        .def_readonly("eps_grad", &CaseResult::eps_grad)
        .def_readonly("iters", &CaseResult::iters)
        .def_readonly("seconds", &CaseResult::seconds)
        .def_readonly("energy_residual", &CaseResult::energy_residual)
        .def_readonly("stability_ratio", &CaseResult::stability_ratio);

    m.def("exact_u", [](double x1, double x2) { return exact_u({x1, x2}); });
    m.def("manufactured_rhs",
          [](const py::object& K, double r, double x1, double x2) { return manufactured_rhs(to_tensor(K), r)({x1, x2}); },
          py::arg("tensor"), py::arg("reaction"), py::arg("x1"), py::arg("x2"));
    m.def(
        "solve_manufactured",
        [](const MvdMesh& mvd, const py::object& K, double r, double tol) {
            return solve_manufactured(mvd, to_tensor(K), r, tol);
        },
        py::arg("mvd"), py::arg("tensor") = "K1", py::arg("reaction") = 1.0, py::arg("tol") = 1e-10);
    m.def(
        "run_case",
        [](const std::string& mesh, double h, const py::object& K, double r, double tol, bool allow_nonacute) {
            CaseConfig c;
            c.mesh = mesh;
            c.h = h;
            c.tensor = to_tensor(K);
            c.reaction = r;
            c.tol = tol;
            c.allow_nonacute = allow_nonacute;
            py::gil_scoped_release release;
            return run_case(c);
        },
        py::arg("mesh") = "", py::arg("h") = 0.0, py::arg("tensor") = "K1", py::arg("reaction") = 1.0,
        py::arg("tol") = 1e-10, py::arg("allow_nonacute") = false);
    m.def(
        "convergence_study",
        [](const std::vector<std::string>& meshes, const py::object& K, double r, double tol, unsigned threads) {
            std::vector<CaseConfig> configs;
            for (const auto& path : meshes) {
                CaseConfig c;
                c.mesh = path;
                c.tensor = to_tensor(K);
                c.reaction = r;
                c.tol = tol;
                configs.push_back(c);
            }
            py::gil_scoped_release release;
            const StudyResult s = convergence_study(configs, threads);
            return std::make_pair(s.rows, s.slopes);
        },
        py::arg("meshes"), py::arg("tensor") = "K1", py::arg("reaction") = 1.0, py::arg("tol") = 1e-10,
        py::arg("threads") = 1);
    m.def(
        "emit_csv",
        [](const std::vector<CaseResult>& rows, bool include_timing) {
            std::ostringstream out;
            emit_csv(out, rows, include_timing);
            return out.str();
        },
        py::arg("rows"), py::arg("include_timing") = true);
}
