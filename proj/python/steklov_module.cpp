#include <steklov/dn_spectral.hpp>
#include <steklov/io.hpp>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace steklov;

namespace {

BoundaryGeometry make_geometry(const std::vector<std::tuple<double, int, int>>& circles)
{
    std::vector<CircleSpec> specs;
    for (const auto& [length, samples, orientation] : circles) specs.push_back({length, samples, orientation});
    return BoundaryGeometry(std::move(specs));
}

BoundaryFunction make_function(const BoundaryGeometry& geometry, const CVector& values)
{
    return BoundaryFunction(geometry, values);
}

py::dict diagnostics_dict(const DnDiagnostics& d)
{
    py::dict out;
    out["kernel_defect"] = d.kernel_defect;
    out["range_mean_defect"] = d.range_mean_defect;
    out["symmetry_defect"] = d.symmetry_defect;
    out["nonnegativity_defect"] = d.nonnegativity_defect;
    out["imaginary_defect"] = d.imaginary_defect;
    return out;
}

ConformalFactor make_factor(const PlanarMesh& mesh, const std::optional<Eigen::VectorXd>& lambda)
{
    return lambda ? ConformalFactor{*lambda} : ConformalFactor::constant(mesh, 1.0);
}

} // namespace

PYBIND11_MODULE(_steklov, m)
{
    m.doc() = "Dirichlet-to-Neumann maps of planar domains and the boundary identities built on them";
    m.attr("__version__") = STEKLOV_VERSION;

    static py::exception<Error> error_type(m, "SteklovError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            // args = (kind, message)
            PyErr_SetObject(error_type.ptr(), py::make_tuple(std::string(to_string(e.kind())), e.what()).ptr());
        }
    });

    // Boundary data

    py::class_<BoundaryGeometry>(m, "BoundaryGeometry")
        .def(py::init(&make_geometry), py::arg("circles"),
             "Circles as (length, samples, orientation) tuples")
        .def_property_readonly("circles", [](const BoundaryGeometry& g) {
            std::vector<std::tuple<double, int, int>> out;
            for (const auto& c : g.circles()) out.emplace_back(c.length, c.samples, c.orientation);
            return out;
        })
        .def_property_readonly("circle_count", &BoundaryGeometry::circle_count)
        .def_property_readonly("total_samples", &BoundaryGeometry::total_samples)
        .def("quadrature_weights", &BoundaryGeometry::quadrature_weights)
        .def("arc_positions", [](const BoundaryGeometry& g) {
            Eigen::VectorXd s(g.total_samples());
            for (int j = 0; j < g.circle_count(); ++j) {
                for (int k = 0; k < g.samples(j); ++k) s[g.offset(j) + k] = g.arc_position(j, k);
            }
            return s;
        });

    py::class_<BoundaryFunction>(m, "BoundaryFunction")
        .def(py::init(&make_function), py::arg("geometry"), py::arg("values"))
        .def_static("sample", &BoundaryFunction::sample, py::arg("geometry"), py::arg("fn"),
                    "Samples fn(circle, s) on the arc-length grid")
        .def_property_readonly("geometry", &BoundaryFunction::geometry)
        .def_property_readonly("values", &BoundaryFunction::values)
        .def("circle_means", &circle_means);

    m.def("random_band_limited", &random_band_limited, py::arg("geometry"), py::arg("max_mode"), py::arg("seed"));
    m.def("arc_derivative", &arc_derivative, py::arg("f"));

    // DN maps

    py::class_<DNMap>(m, "DNMap")
        .def_property_readonly("geometry", &DNMap::geometry)
        .def_property_readonly("matrix", &DNMap::matrix)
        .def_property_readonly("method", [](const DNMap& dn) { return std::string(to_string(dn.provenance().method)); })
        .def_property_readonly("domain", [](const DNMap& dn) { return dn.provenance().domain; })
        .def_property_readonly("mesh_h", [](const DNMap& dn) { return dn.provenance().mesh_h; })
        .def_property_readonly("diagnostics", [](const DNMap& dn) { return diagnostics_dict(dn.diagnostics()); })
        .def("apply", &DNMap::apply, py::arg("f"))
        .def("to_json", [](const DNMap& dn) { return dump_json(to_json(dn)); })
        .def_static("from_json", [](const std::string& text) { return dn_from_json(parse_json(text, "argument")); },
                    py::arg("text"));

    m.def("disk_geometry", &disk_geometry, py::arg("radius"), py::arg("samples"));
    m.def("annulus_geometry", &annulus_geometry, py::arg("r_in"), py::arg("r_out"), py::arg("inner_samples"),
          py::arg("outer_samples"));
    m.def("disk_dn", &disk_dn, py::arg("radius"), py::arg("geometry"));
    m.def("annulus_dn", &annulus_dn, py::arg("r_in"), py::arg("r_out"), py::arg("geometry"));
    m.def("fourier_multiplier", &fourier_multiplier, py::arg("dn"), py::arg("circle"), py::arg("mode"));

    // Meshes and FEM

    py::class_<PlanarMesh>(m, "PlanarMesh")
        .def_property_readonly("vertices", [](const PlanarMesh& mesh) {
            Eigen::MatrixX2d v(mesh.vertex_count(), 2);
            for (int i = 0; i < mesh.vertex_count(); ++i) v.row(i) = mesh.vertices[static_cast<size_t>(i)].transpose();
            return v;
        })
        .def_property_readonly("triangles", [](const PlanarMesh& mesh) {
            Eigen::MatrixX3i t(mesh.triangle_count(), 3);
            for (int i = 0; i < mesh.triangle_count(); ++i) {
                for (int c = 0; c < 3; ++c) t(i, c) = mesh.triangles[static_cast<size_t>(i)][static_cast<size_t>(c)];
            }
            return t;
        })
        .def_readonly("boundary_loops", &PlanarMesh::boundary_loops)
        .def_property_readonly("vertex_count", &PlanarMesh::vertex_count)
        .def("max_edge_length", &PlanarMesh::max_edge_length)
        .def("to_json", [](const PlanarMesh& mesh) { return dump_json(to_json(mesh)); })
        .def_static("from_json", [](const std::string& text) { return mesh_from_json(parse_json(text, "argument")); },
                    py::arg("text"));

    m.def("generate_disk_mesh", &generate_disk_mesh, py::arg("radius"), py::arg("h"));
    m.def("generate_annulus_mesh", &generate_annulus_mesh, py::arg("r_in"), py::arg("r_out"), py::arg("h"));
    m.def(
        "generate_multihole_mesh",
        [](double radius, const std::vector<std::tuple<double, double, double>>& holes, double h) {
            std::vector<Hole> list;
            for (const auto& [x, y, r] : holes) list.push_back({Point(x, y), r});
            return generate_multihole_mesh(radius, list, h);
        },
        py::arg("radius"), py::arg("holes"), py::arg("h"), "Holes as (x, y, r) tuples");
    m.def("generate_ellipse_mesh", &generate_ellipse_mesh, py::arg("a"), py::arg("b"), py::arg("h"));

    m.def(
        "compute_dn",
        [](const PlanarMesh& mesh, const std::optional<Eigen::VectorXd>& lambda, double mesh_h) {
            const ConformalFactor factor = make_factor(mesh, lambda);
            FemOptions options;
            options.mesh_h = mesh_h;
            return compute_dn(mesh, factor, metric_boundary_geometry(mesh, factor), options);
        },
        py::arg("mesh"), py::arg("conformal_factor") = py::none(), py::arg("mesh_h") = 0.0,
        "FEM DN map on the metric arc-length grid of the mesh loops");
    m.def("calibrate_fem_tolerance", [](double h) { return calibrate_fem_tolerance(h); }, py::arg("h"));

    // Topology

    py::class_<RankRule>(m, "RankRule")
        .def_static("spectral", &RankRule::spectral)
        .def_static("fem", &RankRule::fem)
        .def_readwrite("gap_ratio", &RankRule::gap_ratio)
        .def_readwrite("threshold", &RankRule::threshold)
        .def_readwrite("gap_floor", &RankRule::gap_floor)
        .def_readwrite("pinv_threshold", &RankRule::pinv_threshold)
        .def_readwrite("range_tolerance", &RankRule::range_tolerance)
        .def_readwrite("band_fraction", &RankRule::band_fraction);

    py::class_<TopologyReport>(m, "TopologyReport")
        .def_readonly("beta1", &TopologyReport::beta1)
        .def_readonly("circle_count", &TopologyReport::circle_count)
        .def_readonly("singular_values", &TopologyReport::singular_values)
        .def_readonly("rank_tolerance_used", &TopologyReport::rank_tolerance_used)
        .def_readonly("neumann_basis", &TopologyReport::neumann_basis)
        .def_readonly("t2_range_dim", &TopologyReport::t2_range_dim)
        .def_readonly("bound_holds", &TopologyReport::bound_holds);

    m.def(
        "analyze_topology",
        [](const DNMap& dn, const std::optional<RankRule>& rule) {
            return analyze_topology(dn, rule ? *rule : RankRule::for_method(dn.provenance().method));
        },
        py::arg("dn"), py::arg("rule") = py::none());

    // Holomorphic traces

    py::class_<HoloTraceResult>(m, "HoloTraceResult")
        .def_readonly("a", &HoloTraceResult::a)
        .def_readonly("b", &HoloTraceResult::b)
        .def_property_readonly("c", [](const HoloTraceResult& r) { return r.c.values; })
        .def_readonly("circle_mean_residuals", &HoloTraceResult::circle_mean_residuals)
        .def_readonly("flux_residual", &HoloTraceResult::flux_residual)
        .def_readonly("conjugate_residual", &HoloTraceResult::conjugate_residual)
        .def_readonly("dual_residual", &HoloTraceResult::dual_residual)
        .def_readonly("tolerance", &HoloTraceResult::tolerance)
        .def_readonly("member", &HoloTraceResult::member)
        .def("worst_residual", &HoloTraceResult::worst_residual);

    m.def(
        "membership_tolerance",
        [](const DNMap& dn, double fem_tolerance) { return membership_tolerance(dn.provenance().method, fem_tolerance); },
        py::arg("dn"), py::arg("fem_tolerance") = 0.0);
    m.def("conjugate_trace", &conjugate_trace, py::arg("dn"), py::arg("a"), py::arg("tolerance"));
    m.def("membership", &membership, py::arg("dn"), py::arg("a"), py::arg("b"), py::arg("tolerance"));
    m.def(
        "interior_cr_residual",
        [](const PlanarMesh& mesh, const std::optional<Eigen::VectorXd>& lambda, const BoundaryFunction& a,
           const BoundaryFunction& b) { return interior_cr_residual(mesh, make_factor(mesh, lambda), a, b); },
        py::arg("mesh"), py::arg("conformal_factor"), py::arg("a"), py::arg("b"));

    // Flattening

    py::class_<FlattenResult>(m, "FlattenResult")
        .def_readonly("phi", &FlattenResult::phi)
        .def_readonly("rho", &FlattenResult::rho)
        .def_readonly("curvature_in", &FlattenResult::curvature_in)
        .def_readonly("curvature_in_norm", &FlattenResult::curvature_in_norm)
        .def_readonly("curvature_out_norm", &FlattenResult::curvature_out_norm)
        .def_readonly("boundary_defect", &FlattenResult::boundary_defect);

    m.def(
        "solve_flattening",
        [](const PlanarMesh& mesh, const Eigen::VectorXd& lambda) { return solve_flattening(mesh, ConformalFactor{lambda}); },
        py::arg("mesh"), py::arg("conformal_factor"));
    m.def(
        "gaussian_curvature",
        [](const PlanarMesh& mesh, const Eigen::VectorXd& lambda) {
            return gaussian_curvature(mesh, ConformalFactor{lambda}).values;
        },
        py::arg("mesh"), py::arg("conformal_factor"));
    m.def(
        "conformal_invariance_check",
        [](const PlanarMesh& mesh, const Eigen::VectorXd& lambda) {
            return conformal_invariance_check(mesh, ConformalFactor{lambda});
        },
        py::arg("mesh"), py::arg("conformal_factor"));
}
