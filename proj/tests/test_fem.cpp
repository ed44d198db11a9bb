#include "support.hpp"

#include <doctest.h>

using namespace steklov;
using namespace steklov::testing;

namespace {

/// Relative multiplier error over modes 1..8 of a unit-disk FEM map.
double disk_multiplier_error(double h)
{
    const DNMap dn = unit_fem_dn(generate_disk_mesh(1.0, h), h);
    double worst = 0.0;
    for (int k = 1; k <= 8; ++k) worst = std::max(worst, std::abs(fourier_multiplier(dn, 0, k) - double(k)) / k);
    return worst;
}

/// <e_n on circle i, Lambda e_n on circle j> / <e_n, e_n>, with e_n = exp(i n theta).
Complex angular_block_entry(const DNMap& dn, int i, int j, int n)
{
    const auto& g = dn.geometry();
    const auto mode_on = [&](int circle) {
        return BoundaryFunction::sample(g, [&](int c, double s) {
            if (c != circle) return Complex(0.0, 0.0);
            const double theta = 2.0 * kPi * s / g.length(c) * g.circle(c).orientation;
            return std::polar(1.0, n * theta);
        });
    };
    const auto out = dn.apply(mode_on(j));
    const auto probe = mode_on(i);
    return l2_inner_product(out, probe) / l2_inner_product(probe, probe);
}

double max_error_on_disk(const PlanarMesh& mesh, const Eigen::VectorXd& u, const std::function<double(const Point&)>& exact)
{
    double worst = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        worst = std::max(worst, std::abs(u[v] - exact(mesh.vertices[static_cast<size_t>(v)])));
    }
    return worst;
}

/// Full vertex vector: boundary data in loop order, interior from solve_dirichlet.
Eigen::VectorXd extend(const PlanarMesh& mesh, const std::function<double(const Point&)>& boundary)
{
    const InteriorSystem system(mesh);
    Eigen::VectorXd f(system.boundary_count());
    for (int i = 0; i < system.boundary_count(); ++i) {
        f[i] = boundary(mesh.vertices[static_cast<size_t>(system.boundary_vertices()[static_cast<size_t>(i)])]);
    }
    const Eigen::VectorXd inner = solve_dirichlet(mesh, ConformalFactor::constant(mesh, 1.0), f);
    Eigen::VectorXd u(mesh.vertex_count());
    for (int i = 0; i < system.boundary_count(); ++i) u[system.boundary_vertices()[static_cast<size_t>(i)]] = f[i];
    for (int i = 0; i < system.interior_count(); ++i) u[system.interior_vertices()[static_cast<size_t>(i)]] = inner[i];
    return u;
}

} // namespace

TEST_SUITE("dn_fem meshes")
{
    TEST_CASE("disk boundary vertex count")
    {
        const PlanarMesh mesh = generate_disk_mesh(1.0, 0.1);
        REQUIRE(mesh.loop_count() == 1);
        CHECK(mesh.boundary_loops[0].size() == 64);
        CHECK(mesh.max_edge_length() <= 0.1);
        CHECK_NOTHROW(validate_mesh(mesh));
    }

    TEST_CASE("annulus loop lengths")
    {
        const PlanarMesh mesh = generate_annulus_mesh(1.0, 2.0, 0.05);
        REQUIRE(mesh.loop_count() == 2);
        // Loop 0 is the outer boundary.
        CHECK(std::abs(mesh.loop_length(0) - 4.0 * kPi) <= 0.005 * 4.0 * kPi);
        CHECK(std::abs(mesh.loop_length(1) - 2.0 * kPi) <= 0.005 * 2.0 * kPi);
        CHECK(mesh.max_edge_length() <= 0.05);
    }

    TEST_CASE("infeasible holes")
    {
        const std::vector<Hole> overlapping = {{Point(0.0, 0.0), 0.3}, {Point(0.1, 0.0), 0.3}};
        try {
            generate_multihole_mesh(1.0, overlapping, 0.1);
            FAIL("overlapping holes accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::GeometryInfeasible);
        }
        const std::vector<Hole> outside = {{Point(0.9, 0.0), 0.3}};
        CHECK_THROWS_AS(generate_multihole_mesh(1.0, outside, 0.1), Error);
    }

    TEST_CASE("generated meshes satisfy every invariant")
    {
        const std::vector<PlanarMesh> meshes = {
            generate_disk_mesh(1.0, 0.08),
            generate_annulus_mesh(0.5, 1.5, 0.08),
            generate_multihole_mesh(1.0, two_holes(), 0.06),
            generate_multihole_mesh(1.0, three_holes(), 0.06),
            generate_ellipse_mesh(1.0, 0.6, 0.06),
        };
        const std::vector<double> targets = {0.08, 0.08, 0.06, 0.06, 0.06};
        for (size_t i = 0; i < meshes.size(); ++i) {
            const PlanarMesh& mesh = meshes[i];
            CHECK_NOTHROW(validate_mesh(mesh));
            CHECK(mesh.max_edge_length() <= targets[i]);
            for (const auto& loop : mesh.boundary_loops) CHECK(loop.size() % 2 == 0);
            for (const Triangle& t : mesh.triangles) CHECK(mesh.signed_area(t) > 0.0);
        }
        CHECK(meshes[2].loop_count() == 3);
        CHECK(meshes[3].loop_count() == 4);
    }

    TEST_CASE("validation rejects broken meshes")
    {
        PlanarMesh mesh = generate_disk_mesh(1.0, 0.2);
        PlanarMesh flipped = mesh;
        std::swap(flipped.triangles[0][0], flipped.triangles[0][1]);
        try {
            validate_mesh(flipped);
            FAIL("clockwise triangle accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateTriangle);
        }
        PlanarMesh shifted = mesh;
        const int v = shifted.boundary_loops[0][1];
        shifted.vertices[static_cast<size_t>(v)] *= 0.9;
        CHECK_THROWS_AS(validate_mesh(shifted), Error);
    }
}

TEST_SUITE("dn_fem assembly")
{
    TEST_CASE("reference triangle stiffness")
    {
        PlanarMesh mesh;
        mesh.vertices = {Point(0, 0), Point(1, 0), Point(0, 1)};
        mesh.triangles = {{0, 1, 2}};
        mesh.boundary_loops = {{0, 1, 2}};
        const Eigen::MatrixXd k = Eigen::MatrixXd(assemble_stiffness(mesh));
        // Gradients of the hat functions are (-1,-1), (1,0), (0,1) on an element of area 1/2.
        const std::vector<Eigen::Vector2d> grad = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
        Eigen::Matrix3d oracle;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) oracle(a, b) = 0.5 * grad[static_cast<size_t>(a)].dot(grad[static_cast<size_t>(b)]);
        }
        CHECK((k - oracle).norm() < 1e-15);
        CHECK(oracle(0, 0) == 1.0);
        CHECK(oracle(1, 2) == 0.0);
    }

    TEST_CASE("degenerate triangle")
    {
        PlanarMesh mesh;
        mesh.vertices = {Point(0, 0), Point(1, 0), Point(2, 0)};
        mesh.triangles = {{0, 1, 2}};
        mesh.boundary_loops = {{0, 1, 2}};
        try {
            assemble_stiffness(mesh);
            FAIL("degenerate triangle accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateTriangle);
        }
    }

    TEST_CASE("stiffness is symmetric positive semidefinite with zero row sums")
    {
        for (const PlanarMesh& mesh : {generate_disk_mesh(1.0, 0.15), generate_multihole_mesh(1.0, two_holes(), 0.12)}) {
            const Eigen::MatrixXd k = Eigen::MatrixXd(assemble_stiffness(mesh));
            CHECK((k - k.transpose()).norm() <= 1e-14 * k.norm());
            CHECK(k.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * k.cwiseAbs().maxCoeff());
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
            CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());
        }
    }

    TEST_CASE("Dirichlet solves")
    {
        const PlanarMesh disk = generate_disk_mesh(1.0, 0.05);
        CHECK(max_error_on_disk(disk, extend(disk, [](const Point&) { return 1.0; }), [](const Point&) { return 1.0; }) <
              1e-12);
        // x is in the P1 space.
        const auto x = [](const Point& p) { return p.x(); };
        CHECK(max_error_on_disk(disk, extend(disk, x), x) <= 1e-10);

        // log r / log R on the annulus, second order in h.
        const double big_r = 2.0;
        const auto log_mode = [&](const Point& p) { return std::log(p.norm()) / std::log(big_r); };
        double previous = 0.0;
        for (double h : {0.1, 0.05}) {
            const PlanarMesh annulus = generate_annulus_mesh(1.0, big_r, h);
            const Eigen::VectorXd u = extend(annulus, [&](const Point& p) { return p.norm() > 1.5 ? 1.0 : 0.0; });
            const double err = max_error_on_disk(annulus, u, log_mode);
            CHECK(err <= 0.05 * h * h / 0.01);
            if (previous > 0.0) CHECK(previous / err >= 2.5);
            previous = err;
        }
    }

    TEST_CASE("metric boundary geometry")
    {
        const PlanarMesh disk = generate_disk_mesh(1.0, 0.05);
        const BoundaryGeometry unit = metric_boundary_geometry(disk, ConformalFactor::constant(disk, 1.0));
        CHECK(std::abs(unit.length(0) - 2.0 * kPi) <= 1e-3 * 2.0 * kPi);
        CHECK(unit.samples(0) == static_cast<int>(disk.boundary_loops[0].size()));
        const BoundaryGeometry four = metric_boundary_geometry(disk, ConformalFactor::constant(disk, 4.0));
        CHECK(std::abs(four.length(0) - 2.0 * unit.length(0)) <= 1e-12 * four.length(0));

        ConformalFactor bump{Eigen::VectorXd(disk.vertex_count())};
        for (int v = 0; v < disk.vertex_count(); ++v) bump.values[v] = 1.0 + (1.0 - disk.vertices[static_cast<size_t>(v)].squaredNorm());
        for (int v : disk.boundary_loops[0]) bump.values[v] = 1.0;
        CHECK(metric_boundary_geometry(disk, bump).length(0) == unit.length(0));

        const PlanarMesh annulus = generate_annulus_mesh(1.0, 2.0, 0.1);
        const BoundaryGeometry ag = metric_boundary_geometry(annulus, ConformalFactor::constant(annulus, 1.0));
        CHECK(ag.circle(0).orientation == 1);
        CHECK(ag.circle(1).orientation == -1);
    }
}

TEST_SUITE("dn_fem maps")
{
    TEST_CASE("unit disk multipliers within 2 percent at h = 0.02")
    {
        CHECK(disk_multiplier_error(0.02) <= 0.02);
    }

    TEST_CASE("refinement reduces the multiplier error at order >= 1.5")
    {
        const double coarse = disk_multiplier_error(0.04);
        const double fine = disk_multiplier_error(0.02);
        CHECK(std::log2(coarse / fine) >= 1.5);
    }

    TEST_CASE("structure of FEM maps")
    {
        const double h = 0.04;
        const double tol = calibrate_fem_tolerance(h);
        for (const PlanarMesh& mesh : {generate_disk_mesh(1.0, h), generate_annulus_mesh(1.0, 2.0, h),
                                       generate_multihole_mesh(1.0, two_holes(), h)}) {
            const DNMap dn = unit_fem_dn(mesh, h);
            CHECK(dn.apply(BoundaryFunction::constant(dn.geometry(), 1.0)).max_abs() <= tol);
            CHECK(diagnostics_within(dn.diagnostics(), fem_dn_tolerances(tol)));
            CHECK(dn.diagnostics().symmetry_defect <= 10.0 * tol);
            CHECK(dn.provenance().method == DnMethod::Fem);
        }
    }

    TEST_CASE("annulus FEM blocks agree with the spectral blocks")
    {
        const double h = 0.04;
        const double tol = calibrate_fem_tolerance(h);
        const DNMap fem = unit_fem_dn(generate_annulus_mesh(1.0, 2.0, h), h);
        // FEM circle order is (outer, inner); the spectral blocks use (inner, outer).
        for (int n = 0; n <= 8; ++n) {
            const Eigen::Matrix2d exact = annulus_mode_block(1.0, 2.0, n);
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    const Complex computed = angular_block_entry(fem, 1 - i, 1 - j, n);
                    const double scale = std::max(exact(i, i), 1.0);
                    CHECK(std::abs(computed - exact(i, j)) <= tol * scale);
                }
            }
        }
    }

    TEST_CASE("interior factor leaves the map unchanged")
    {
        const PlanarMesh mesh = generate_annulus_mesh(1.0, 2.0, 0.08);
        ConformalFactor lambda{Eigen::VectorXd(mesh.vertex_count())};
        Gen gen(3);
        for (int v = 0; v < mesh.vertex_count(); ++v) lambda.values[v] = gen.uniform(0.5, 3.0);
        for (const auto& loop : mesh.boundary_loops) {
            for (int v : loop) lambda.values[v] = 1.0;
        }
        const ConformalFactor one = ConformalFactor::constant(mesh, 1.0);
        const BoundaryGeometry g = metric_boundary_geometry(mesh, one);
        const DNMap a = compute_dn(mesh, one, g);
        const DNMap b = compute_dn(mesh, lambda, g);
        CHECK((a.matrix() - b.matrix()).norm() == 0.0);
    }

    TEST_CASE("geometry mismatch")
    {
        const PlanarMesh mesh = generate_disk_mesh(1.0, 0.1);
        try {
            compute_dn(mesh, ConformalFactor::constant(mesh, 1.0), disk_geometry(1.1, 64));
            FAIL("length mismatch accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::GeometryMismatch);
        }
    }

    TEST_CASE("repeated assembly is bitwise identical")
    {
        const PlanarMesh mesh = generate_multihole_mesh(1.0, two_holes(), 0.08);
        const DNMap a = unit_fem_dn(mesh, 0.08);
        const DNMap b = unit_fem_dn(mesh, 0.08);
        CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
    }
}
