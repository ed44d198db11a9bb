#pragma once

// Piecewise-linear finite elements for harmonic extension and the
// Dirichlet-to-Neumann map of a planar domain with a conformal metric.

#include <steklov/dn_map.hpp>
#include <steklov/mesh.hpp>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>

namespace steklov {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Galerkin matrix of the Euclidean Dirichlet form. The same matrix serves
/// every conformal factor.
SparseMatrix assemble_stiffness(const PlanarMesh& mesh);

/// Area of the triangles around each vertex divided by three.
Eigen::VectorXd lumped_vertex_mass(const PlanarMesh& mesh);

/// Factorisation of the interior block of the stiffness matrix. Boundary
/// vertices are ordered loop by loop.
class InteriorSystem
{
public:
    explicit InteriorSystem(const PlanarMesh& mesh);

    const PlanarMesh& mesh() const { return *m_mesh; }
    const SparseMatrix& stiffness() const { return m_stiffness; }
    const std::vector<int>& boundary_vertices() const { return m_boundary; }
    const std::vector<int>& interior_vertices() const { return m_interior; }
    int boundary_count() const { return static_cast<int>(m_boundary.size()); }
    int interior_count() const { return static_cast<int>(m_interior.size()); }

    /// Solves K_ii x = rhs.
    Eigen::VectorXd solve_interior(const Eigen::VectorXd& rhs) const;
    /// Discrete harmonic extension; returns values at every vertex.
    Eigen::VectorXd harmonic_extension(const Eigen::VectorXd& boundary_values) const;
    /// Dense weak Neumann map K_bb - K_bi K_ii^{-1} K_ib on boundary vertices.
    Eigen::MatrixXd schur_complement() const;

private:
    std::shared_ptr<const PlanarMesh> m_mesh;
    SparseMatrix m_stiffness;
    SparseMatrix m_kii;
    SparseMatrix m_kib;
    SparseMatrix m_kbb;
    std::vector<int> m_boundary;
    std::vector<int> m_interior;
    Eigen::SimplicialLDLT<SparseMatrix> m_factor;
};

/// Interior vertex values of the harmonic extension of boundary data given
/// in loop order. The factor is validated but does not enter the solve.
Eigen::VectorXd solve_dirichlet(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const Eigen::VectorXd& boundary_values);

/// Real part of f at the boundary vertices in loop order, interpolated at the
/// metric arc position of every vertex. f needs one circle per loop with the
/// metric loop length (1%).
Eigen::VectorXd boundary_vertex_values(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const BoundaryFunction& f);

/// One circle per loop: metric length sum of sqrt(lambda(midpoint)) |edge|,
/// sample count the loop size rounded up to even.
BoundaryGeometry metric_boundary_geometry(const PlanarMesh& mesh, const ConformalFactor& lambda);

enum class BoundaryMass { Lumped, Consistent };
enum class Resampling { Spectral, CubicSpline };
enum class ProbeBasis { Indicators, Fourier };

std::string_view to_string(BoundaryMass mass);
std::string_view to_string(Resampling resampling);
std::string_view to_string(ProbeBasis probes);
BoundaryMass boundary_mass_from_string(std::string_view name);
Resampling resampling_from_string(std::string_view name);
ProbeBasis probe_basis_from_string(std::string_view name);

struct FemOptions
{
    BoundaryMass mass = BoundaryMass::Lumped;
    Resampling resampling = Resampling::Spectral;
    ProbeBasis probes = ProbeBasis::Indicators;
    /// Recorded in the provenance only.
    double mesh_h = 0.0;
};

/// Dense DN map on `out_geometry`, whose circle lengths must match the metric
/// loop lengths to 1%.
DNMap compute_dn(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const BoundaryGeometry& out_geometry,
    const FemOptions& options = {});

DNMap compute_dn(
    const InteriorSystem& system,
    const ConformalFactor& lambda,
    const BoundaryGeometry& out_geometry,
    const FemOptions& options = {});

/// Largest relative multiplier error over modes 1..8 of the unit-disk FEM map
/// at mesh size h.
double calibrate_fem_tolerance(double h, const FemOptions& options = {});

/// Interpolation matrix from a uniform periodic grid of `grid` samples on
/// [0, 1) to the points `u` (trigonometric, Nyquist mode excluded).
Eigen::MatrixXd trig_interpolation_matrix(int grid, const Eigen::VectorXd& u);

/// Periodic cubic spline through nodes `x` (increasing in [0, 1)) evaluated
/// at `y`.
Eigen::MatrixXd periodic_spline_matrix(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

} // namespace steklov
