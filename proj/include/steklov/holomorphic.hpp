#pragma once

// Boundary traces of holomorphic functions: membership test, conjugate trace
// construction and Cauchy-Riemann checks, all in real form
//   b = A + c,  A = zero-circle-mean antiderivative of Lambda a,
//   da/ds + Lambda A + Lambda c = 0,  c balanced locally constant.

#include <steklov/dn_map.hpp>
#include <steklov/mesh.hpp>

#include <span>
#include <utility>

namespace steklov {

struct HoloTraceResult
{
    BoundaryFunction a;
    BoundaryFunction b;
    /// Real and balanced.
    LocallyConstantFunction c;
    /// Per-circle means of Lambda a over the RMS of Lambda a.
    std::vector<double> circle_mean_residuals;
    /// Relative residual of da/ds + Lambda b = 0.
    double flux_residual = 0.0;
    /// Relative size of the zero-mean part of b - A - c.
    double conjugate_residual = 0.0;
    /// Largest residual of the same test on the rotated pair (b, -a); -1 when
    /// not evaluated.
    double dual_residual = -1.0;
    double tolerance = 0.0;
    bool member = false;

    /// Largest of all residuals that enter the membership decision.
    double worst_residual() const;
};

/// 1e-8 for spectral maps, 50 times the calibrated FEM error otherwise.
double membership_tolerance(DnMethod method, double fem_tolerance = 0.0);

/// Per-circle means of Lambda a normalised by the RMS of Lambda a over the
/// whole boundary. All zero when Lambda a vanishes to roundoff.
std::vector<double> check_circle_means(const DNMap& dn, const BoundaryFunction& a);

/// Builds b from a by the real-form pipeline and reports the fit residual.
HoloTraceResult conjugate_trace(const DNMap& dn, const BoundaryFunction& a, double tolerance);

/// Decides whether a + ib is a holomorphic trace. b may carry any additive
/// real constant. The rotated pair (b, -a) must pass as well.
HoloTraceResult membership(
    const DNMap& dn,
    const BoundaryFunction& a,
    const BoundaryFunction& b,
    double tolerance);

struct BoundaryCrResidual
{
    /// ||db/ds - Lambda a|| / scale.
    double tangential = 0.0;
    /// ||Lambda b + da/ds|| / scale.
    double normal = 0.0;
};

/// scale = max(||Lambda a||, ||da/ds||); both residuals are 0 when the scale
/// vanishes to roundoff.
BoundaryCrResidual cr_boundary_check(const DNMap& dn, const BoundaryFunction& a, const BoundaryFunction& b);

/// Discrete harmonic extensions u, v of a, b and the area-weighted L2 norm of
/// (u_x - v_y, u_y + v_x) over the square root of the Dirichlet energy of
/// (u, v). The boundary functions must live on one circle per mesh loop with
/// the metric loop lengths.
double interior_cr_residual(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const BoundaryFunction& a,
    const BoundaryFunction& b);

/// Membership of the pointwise product of the given traces. Every factor must
/// itself pass membership (PreconditionViolation otherwise).
HoloTraceResult algebra_closure_check(
    const DNMap& dn,
    std::span<const std::pair<BoundaryFunction, BoundaryFunction>> factors,
    double tolerance);

/// Runs the pipeline on b and returns the sup distance of its output from -a
/// after removing per-circle constants, relative to sup |a - circle means|.
double dual_recovery_error(const DNMap& dn, const BoundaryFunction& a, const BoundaryFunction& b, double tolerance);

} // namespace steklov
