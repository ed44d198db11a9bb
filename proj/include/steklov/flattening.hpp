#pragma once

// Gaussian curvature of a conformal metric lambda (dx^2 + dy^2) on a mesh and
// the conformal change e^{2 phi} that makes it flat with phi = 0 on the boundary.

#include <steklov/fem.hpp>

namespace steklov {

struct CurvatureField
{
    /// Per-vertex K = -(1/(2 lambda)) Delta ln lambda.
    Eigen::VectorXd values;
    /// True at boundary vertices, where the value uses a one-sided stencil.
    std::vector<bool> low_accuracy;
};

/// Delta is the stiffness matrix turned into point values with the lumped
/// vertex mass, the same operator solve_flattening inverts.
CurvatureField gaussian_curvature(const PlanarMesh& mesh, const ConformalFactor& lambda);

/// Area-weighted L2 norm of a curvature field over interior vertices.
double curvature_norm(const PlanarMesh& mesh, const CurvatureField& curvature);

struct FlattenResult
{
    Eigen::VectorXd phi;
    /// exp(2 phi).
    Eigen::VectorXd rho;
    Eigen::VectorXd curvature_in;
    double curvature_in_norm = 0.0;
    /// Curvature norm of the flattened factor rho * lambda.
    double curvature_out_norm = 0.0;
    /// max |phi| over boundary vertices.
    double boundary_defect = 0.0;

    ConformalFactor flattened(const ConformalFactor& lambda) const;
};

/// Solves Delta phi = lambda K with phi = 0 on the boundary.
FlattenResult solve_flattening(const PlanarMesh& mesh, const ConformalFactor& lambda);

/// Relative Frobenius distance between the FEM DN maps of lambda and of the
/// unit factor. lambda must equal 1 at every boundary vertex.
double conformal_invariance_check(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const FemOptions& options = {});

} // namespace steklov
