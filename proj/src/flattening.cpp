#include <steklov/flattening.hpp>

#include <cmath>
#include <sstream>

namespace steklov {

namespace {

/// K from the stiffness matrix s, masses m and nodal ln lambda.
Eigen::VectorXd curvature_values(
    const SparseMatrix& s,
    const Eigen::VectorXd& mass,
    const Eigen::VectorXd& lambda,
    const Eigen::VectorXd& log_lambda)
{
    // -Delta f ~ (S f) / m, so K = (S ln lambda) / (2 lambda m).
    const Eigen::VectorXd sl = s * log_lambda;
    return sl.cwiseQuotient(2.0 * lambda.cwiseProduct(mass));
}

double interior_norm(const PlanarMesh& mesh, const Eigen::VectorXd& mass, const Eigen::VectorXd& k)
{
    const auto boundary = mesh.boundary_mask();
    double sum = 0.0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (!boundary[static_cast<size_t>(i)]) sum += mass[i] * k[i] * k[i];
    }
    return std::sqrt(sum);
}

} // namespace

CurvatureField gaussian_curvature(const PlanarMesh& mesh, const ConformalFactor& lambda)
{
    lambda.validate(mesh);
    const SparseMatrix s = assemble_stiffness(mesh);
    CurvatureField out;
    out.values = curvature_values(s, lumped_vertex_mass(mesh), lambda.values, lambda.values.array().log().matrix());
    out.low_accuracy = mesh.boundary_mask();
    return out;
}

double curvature_norm(const PlanarMesh& mesh, const CurvatureField& curvature)
{
    if (curvature.values.size() != mesh.vertex_count()) {
        fail(ErrorKind::GeometryMismatch, "curvature field size does not match the mesh");
    }
    return interior_norm(mesh, lumped_vertex_mass(mesh), curvature.values);
}

ConformalFactor FlattenResult::flattened(const ConformalFactor& lambda) const
{
    return {rho.cwiseProduct(lambda.values)};
}

FlattenResult solve_flattening(const PlanarMesh& mesh, const ConformalFactor& lambda)
{
    lambda.validate(mesh);
    const InteriorSystem system(mesh);
    const SparseMatrix& s = system.stiffness();
    const Eigen::VectorXd mass = lumped_vertex_mass(mesh);
    const Eigen::VectorXd log_lambda = lambda.values.array().log().matrix();

    FlattenResult out;
    out.curvature_in = curvature_values(s, mass, lambda.values, log_lambda);
    out.curvature_in_norm = interior_norm(mesh, mass, out.curvature_in);

    // Weak form of Delta phi = lambda K: -S phi = m lambda K on interior rows.
    const auto& interior = system.interior_vertices();
    Eigen::VectorXd rhs(system.interior_count());
    for (int i = 0; i < system.interior_count(); ++i) {
        const int v = interior[static_cast<size_t>(i)];
        rhs[i] = -mass[v] * lambda.values[v] * out.curvature_in[v];
    }
    const Eigen::VectorXd inner = system.solve_interior(rhs);
    out.phi = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int i = 0; i < system.interior_count(); ++i) out.phi[interior[static_cast<size_t>(i)]] = inner[i];
    out.rho = (2.0 * out.phi).array().exp().matrix();

    out.boundary_defect = 0.0;
    for (int v : system.boundary_vertices()) out.boundary_defect = std::max(out.boundary_defect, std::abs(out.phi[v]));

    const Eigen::VectorXd flat = out.rho.cwiseProduct(lambda.values);
    const Eigen::VectorXd k_out = curvature_values(s, mass, flat, flat.array().log().matrix());
    out.curvature_out_norm = interior_norm(mesh, mass, k_out);
    return out;
}

double conformal_invariance_check(const PlanarMesh& mesh, const ConformalFactor& lambda, const FemOptions& options)
{
    lambda.validate(mesh);
    const auto boundary = mesh.boundary_mask();
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (boundary[static_cast<size_t>(i)] && std::abs(lambda.values[i] - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "conformal factor is " << lambda.values[i] << " at boundary vertex " << i << "; 1 is required";
            fail(ErrorKind::PreconditionViolation, msg.str());
        }
    }
    const InteriorSystem system(mesh);
    const ConformalFactor one = ConformalFactor::constant(mesh, 1.0);
    const BoundaryGeometry geometry = metric_boundary_geometry(mesh, one);
    const DNMap reference = compute_dn(system, one, geometry, options);
    const DNMap changed = compute_dn(system, lambda, geometry, options);
    const double norm = reference.matrix().norm();
    return norm > 0.0 ? (changed.matrix() - reference.matrix()).norm() / norm : 0.0;
}

} // namespace steklov
