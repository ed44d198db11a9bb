#pragma once

// Triangulated planar domains with holes and conformal metric factors.

#include <steklov/error.hpp>

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace steklov {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

/// Loop 0 is the outer boundary (counterclockwise); loops 1..m-1 bound the
/// holes and run clockwise, so the domain always lies to the left.
struct PlanarMesh
{
    std::vector<Point> vertices;
    std::vector<Triangle> triangles;
    std::vector<std::vector<int>> boundary_loops;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int loop_count() const { return static_cast<int>(boundary_loops.size()); }

    std::vector<bool> boundary_mask() const;
    double signed_area(const Triangle& t) const;
    double max_edge_length() const;
    /// Euclidean perimeter of a boundary loop.
    double loop_length(int loop) const;
};

/// Per-vertex factor of the metric lambda (dx^2 + dy^2).
struct ConformalFactor
{
    Eigen::VectorXd values;

    static ConformalFactor constant(const PlanarMesh& mesh, double value);
    void validate(const PlanarMesh& mesh) const;
};

/// Checks every PlanarMesh invariant. Loop edges must be uniformly spaced to
/// `spacing_tolerance` relative.
void validate_mesh(const PlanarMesh& mesh, double spacing_tolerance = 0.01);

struct Hole
{
    Point center = Point::Zero();
    double radius = 0.0;
};

PlanarMesh generate_disk_mesh(double radius, double target_h);
PlanarMesh generate_annulus_mesh(double r_in, double r_out, double target_h);
PlanarMesh generate_multihole_mesh(double outer_radius, const std::vector<Hole>& holes, double target_h);
/// Simply connected ellipse with semi-axes (a, b); boundary vertices are
/// equally spaced in arc length.
PlanarMesh generate_ellipse_mesh(double a, double b, double target_h);

} // namespace steklov
