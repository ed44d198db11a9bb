#pragma once

// Closed-form Dirichlet-to-Neumann maps of the disk and the annulus.

#include <steklov/dn_map.hpp>

namespace steklov {

/// One counterclockwise circle of length 2 pi radius.
BoundaryGeometry disk_geometry(double radius, int samples);

/// Circles in the order (inner, outer). The inner arc-length coordinate runs
/// clockwise, so angular mode n there is sample-space mode -n.
BoundaryGeometry annulus_geometry(double r_in, double r_out, int inner_samples, int outer_samples);

/// Fourier multiplier |k| / R on the circle of length 2 pi R.
DNMap disk_dn(double radius, const BoundaryGeometry& geometry);

/// Block-diagonal map over angular modes built from the harmonic basis
/// r^{|n|} e^{in theta}, r^{-|n|} e^{in theta} (and 1, log r for n = 0).
DNMap annulus_dn(double r_in, double r_out, const BoundaryGeometry& geometry);

/// The 2x2 block of angular mode n acting on (inner, outer) coefficients.
Eigen::Matrix2d annulus_mode_block(double r_in, double r_out, int n);

} // namespace steklov
