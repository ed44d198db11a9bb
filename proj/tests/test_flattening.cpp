#include "support.hpp"

#include <steklov/flattening.hpp>

#include <doctest.h>

using namespace steklov;
using namespace steklov::testing;

namespace {

ConformalFactor factor_from(const PlanarMesh& mesh, const std::function<double(const Point&)>& f)
{
    ConformalFactor lambda{Eigen::VectorXd(mesh.vertex_count())};
    for (int v = 0; v < mesh.vertex_count(); ++v) lambda.values[v] = f(mesh.vertices[static_cast<size_t>(v)]);
    return lambda;
}

double bump(const Point& p)
{
    return 0.1 * (1.0 - p.squaredNorm());
}

/// e^{2 phi0} with phi0 = 0.1 (1 - r^2), set to exactly 1 on the boundary.
ConformalFactor bump_factor(const PlanarMesh& mesh)
{
    ConformalFactor lambda = factor_from(mesh, [](const Point& p) { return std::exp(2.0 * bump(p)); });
    for (int v : mesh.boundary_loops[0]) lambda.values[v] = 1.0;
    return lambda;
}

ConformalFactor sphere_factor(const PlanarMesh& mesh, double radius)
{
    const double r4 = std::pow(radius, 4);
    return factor_from(mesh, [&](const Point& p) {
        const double d = radius * radius + p.squaredNorm();
        return 4.0 * r4 / (d * d);
    });
}

/// Largest deviation of K from an exact field over interior vertices with |p| < core.
double pointwise_error(
    const PlanarMesh& mesh,
    const CurvatureField& k,
    const std::function<double(const Point&)>& exact,
    double core = 1.0)
{
    const std::vector<bool> boundary = mesh.boundary_mask();
    double worst = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const Point& p = mesh.vertices[static_cast<size_t>(v)];
        if (boundary[static_cast<size_t>(v)] || p.norm() >= core) continue;
        worst = std::max(worst, std::abs(k.values[v] - exact(p)));
    }
    return worst;
}

/// |sum_v m_v (K_v - K(p_v)) psi(p_v)| over interior vertices, psi = (1 - r^2)(1 + x).
double weak_error(const PlanarMesh& mesh, const CurvatureField& k, const std::function<double(const Point&)>& exact)
{
    const Eigen::VectorXd mass = lumped_vertex_mass(mesh);
    const std::vector<bool> boundary = mesh.boundary_mask();
    double sum = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (boundary[static_cast<size_t>(v)]) continue;
        const Point& p = mesh.vertices[static_cast<size_t>(v)];
        sum += mass[v] * (k.values[v] - exact(p)) * (1.0 - p.squaredNorm()) * (1.0 + p.x());
    }
    return std::abs(sum);
}

} // namespace

TEST_SUITE("curvature")
{
    TEST_CASE("constant factors are flat")
    {
        const PlanarMesh mesh = generate_annulus_mesh(0.5, 1.0, 0.08);
        for (double c : {1.0, 4.0, 0.3}) {
            const CurvatureField k = gaussian_curvature(mesh, ConformalFactor::constant(mesh, c));
            CHECK(k.values.cwiseAbs().maxCoeff() <= 1e-10);
        }
    }

    TEST_CASE("boundary vertices are flagged")
    {
        const PlanarMesh mesh = generate_disk_mesh(1.0, 0.1);
        const CurvatureField k = gaussian_curvature(mesh, ConformalFactor::constant(mesh, 1.0));
        CHECK(k.low_accuracy == mesh.boundary_mask());
    }

    // The lumped Laplacian is pointwise consistent on the hexagonal lattice
    // core only; across the band joining it to the boundary rings the nodal
    // values oscillate and converge in the weak sense.
    TEST_CASE("stereographic sphere has unit curvature")
    {
        const auto one = [](const Point&) { return 1.0; };
        double previous = 0.0;
        for (double h : {0.1, 0.05, 0.025}) {
            CAPTURE(h);
            const PlanarMesh lattice = generate_multihole_mesh(1.0, {}, h);
            const CurvatureField k = gaussian_curvature(lattice, sphere_factor(lattice, 1.0));
            CHECK(pointwise_error(lattice, k, one, 0.5) <= h);
            const PlanarMesh rings = generate_disk_mesh(1.0, h);
            const double weak = weak_error(rings, gaussian_curvature(rings, sphere_factor(rings, 1.0)), one);
            CHECK(weak <= h * h);
            if (previous > 0.0) CHECK(previous / weak >= 3.0);
            previous = weak;
        }
        const PlanarMesh lattice = generate_multihole_mesh(1.0, {}, 0.05);
        const CurvatureField k2 = gaussian_curvature(lattice, sphere_factor(lattice, 2.0));
        CHECK(pointwise_error(lattice, k2, [](const Point&) { return 0.25; }, 0.5) <= 0.05 * 0.25);
    }

    TEST_CASE("exponential factor matches the symbolic curvature")
    {
        // K = -exp(-2 phi0) Laplacian(phi0) = 0.4 exp(-2 phi0).
        const auto exact = [](const Point& p) { return 0.4 * std::exp(-2.0 * bump(p)); };
        for (double h : {0.05, 0.025}) {
            const PlanarMesh lattice = generate_multihole_mesh(1.0, {}, h);
            CHECK(pointwise_error(lattice, gaussian_curvature(lattice, bump_factor(lattice)), exact, 0.5) <= 0.4 * h);
            const PlanarMesh rings = generate_disk_mesh(1.0, h);
            CHECK(weak_error(rings, gaussian_curvature(rings, bump_factor(rings)), exact) <= 0.4 * h * h);
        }
    }

    TEST_CASE("nonpositive factor is rejected")
    {
        const PlanarMesh mesh = generate_disk_mesh(1.0, 0.2);
        ConformalFactor lambda = ConformalFactor::constant(mesh, 1.0);
        lambda.values[3] = 0.0;
        try {
            gaussian_curvature(mesh, lambda);
            FAIL("zero factor accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::PreconditionViolation);
        }
    }
}

TEST_SUITE("flattening")
{
    TEST_CASE("flat input")
    {
        const PlanarMesh mesh = generate_disk_mesh(1.0, 0.1);
        const FlattenResult r = solve_flattening(mesh, ConformalFactor::constant(mesh, 1.0));
        CHECK(r.phi.cwiseAbs().maxCoeff() == 0.0);
        CHECK((r.rho.array() - 1.0).abs().maxCoeff() == 0.0);
        CHECK(r.curvature_out_norm == 0.0);
        CHECK(r.boundary_defect == 0.0);
    }

    TEST_CASE("exponential round trip is exact at the discrete level")
    {
        for (const PlanarMesh& mesh : {generate_disk_mesh(1.0, 0.05), generate_multihole_mesh(1.0, {}, 0.05)}) {
            const ConformalFactor lambda = bump_factor(mesh);
            const FlattenResult r = solve_flattening(mesh, lambda);
            double worst = 0.0;
            for (int v = 0; v < mesh.vertex_count(); ++v) {
                worst = std::max(worst, std::abs(r.phi[v] + 0.5 * std::log(lambda.values[v])));
            }
            CHECK(worst <= 1e-8);
            CHECK((r.flattened(lambda).values.array() - 1.0).abs().maxCoeff() <= 1e-8);
            CHECK(r.boundary_defect == 0.0);
        }
    }

    TEST_CASE("spherical cap is flattened")
    {
        const PlanarMesh mesh = generate_disk_mesh(1.0, 0.02);
        const FlattenResult r = solve_flattening(mesh, sphere_factor(mesh, 1.0));
        CHECK(r.curvature_in_norm > 1.0);
        CHECK(r.curvature_out_norm <= 1e-2 * r.curvature_in_norm);
        CHECK(r.boundary_defect <= 1e-12);
    }

    TEST_CASE("flattening is deterministic and a fixed point")
    {
        const PlanarMesh mesh = generate_multihole_mesh(1.0, two_holes(), 0.06);
        const ConformalFactor lambda = factor_from(mesh, [](const Point& p) { return 1.0 + 0.5 * p.x() * p.x() + 0.2 * p.y(); });
        const FlattenResult a = solve_flattening(mesh, lambda);
        const FlattenResult b = solve_flattening(mesh, lambda);
        CHECK((a.phi - b.phi).cwiseAbs().maxCoeff() == 0.0);

        const ConformalFactor flat = a.flattened(lambda);
        const FlattenResult again = solve_flattening(mesh, flat);
        CHECK(again.phi.cwiseAbs().maxCoeff() <= 10.0 * std::max(a.curvature_out_norm, 1e-12));

        const BoundaryGeometry before = metric_boundary_geometry(mesh, lambda);
        const BoundaryGeometry after = metric_boundary_geometry(mesh, flat);
        for (int j = 0; j < before.circle_count(); ++j) {
            CHECK(std::abs(before.length(j) - after.length(j)) <= 1e-10 * before.length(j));
        }
    }
}

TEST_SUITE("conformal invariance")
{
    TEST_CASE("factors equal to one on the boundary leave the DN map unchanged")
    {
        const std::vector<PlanarMesh> meshes = {generate_disk_mesh(1.0, 0.08), generate_annulus_mesh(0.5, 1.0, 0.08),
                                                generate_multihole_mesh(1.0, three_holes(), 0.08)};
        for (const PlanarMesh& mesh : meshes) {
            CHECK(conformal_invariance_check(mesh, ConformalFactor::constant(mesh, 1.0)) == 0.0);
            // The unit-radius sphere factor is 1 on the unit circle only, so the
            // flattening factor rho (1 on every boundary loop) is used instead.
            const ConformalFactor lambda = sphere_factor(mesh, 1.0);
            const FlattenResult r = solve_flattening(mesh, lambda);
            CHECK(conformal_invariance_check(mesh, ConformalFactor{r.rho}) <= 1e-12);
        }
    }

    TEST_CASE("boundary values other than one are rejected")
    {
        const PlanarMesh mesh = generate_disk_mesh(1.0, 0.1);
        try {
            conformal_invariance_check(mesh, ConformalFactor::constant(mesh, 2.0));
            FAIL("boundary factor 2 accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::PreconditionViolation);
        }
    }
}
