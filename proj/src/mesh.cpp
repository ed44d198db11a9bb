#include <steklov/mesh.hpp>

#include <boost/polygon/voronoi.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

namespace steklov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Point& a, const Point& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

double polygon_signed_area(const std::vector<Point>& poly)
{
    double area = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        area += cross(poly[i], poly[(i + 1) % poly.size()]);
    }
    return 0.5 * area;
}

bool inside_polygon(const std::vector<Point>& poly, const Point& p)
{
    bool inside = false;
    for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

double segment_distance(const Point& p, const Point& a, const Point& b)
{
    const Point ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (a + t * ab - p).norm();
}

int even_count(double length, double h)
{
    int n = static_cast<int>(std::ceil(length / h - 1e-9));
    n += n % 2;
    return std::max(n, 8);
}

/// Uniform bucket grid for nearest-point rejection.
class PointHash
{
public:
    explicit PointHash(double cell)
        : m_cell(cell)
    {}

    void insert(const Point& p) { m_cells[key(cell_of(p.x()), cell_of(p.y()))].push_back(p); }

    bool has_within(const Point& p, double radius) const
    {
        const int reach = static_cast<int>(std::ceil(radius / m_cell));
        const long cx = cell_of(p.x());
        const long cy = cell_of(p.y());
        for (long i = cx - reach; i <= cx + reach; ++i) {
            for (long j = cy - reach; j <= cy + reach; ++j) {
                const auto it = m_cells.find(key(i, j));
                if (it == m_cells.end()) continue;
                for (const Point& q : it->second) {
                    if ((q - p).squaredNorm() < radius * radius) return true;
                }
            }
        }
        return false;
    }

private:
    long cell_of(double x) const { return static_cast<long>(std::floor(x / m_cell)); }
    static long long key(long i, long j) { return (static_cast<long long>(i) << 32) ^ (j & 0xffffffffLL); }

    double m_cell;
    std::unordered_map<long long, std::vector<Point>> m_cells;
};

/// A closed boundary curve parametrised by t in [0, 1) proportionally to arc
/// length, oriented with the domain on its left.
struct Curve
{
    std::function<Point(double)> at;
    double length = 0.0;
    /// +1 for the outer curve, -1 for holes.
    int winding = 1;

    Point inward_normal(double t) const
    {
        const double dt = 1e-6;
        const Point tangent = (at(t + dt) - at(t - dt)).normalized();
        return {-tangent.y(), tangent.x()};
    }
};

Curve circle_curve(const Point& center, double radius, int winding)
{
    Curve c;
    c.at = [=](double t) {
        const double theta = winding * kTwoPi * t;
        return Point(center.x() + radius * std::cos(theta), center.y() + radius * std::sin(theta));
    };
    c.length = kTwoPi * radius;
    c.winding = winding;
    return c;
}

Curve ellipse_curve(double a, double b)
{
    // Tabulate arc length against the angle parameter, then invert.
    const int n = 1 << 14;
    std::vector<double> arc(n + 1, 0.0);
    const auto speed = [a, b](double th) { return std::hypot(a * std::sin(th), b * std::cos(th)); };
    for (int i = 0; i < n; ++i) {
        const double t0 = kTwoPi * i / n;
        const double t1 = kTwoPi * (i + 1) / n;
        arc[i + 1] = arc[i] + (t1 - t0) / 6.0 * (speed(t0) + 4.0 * speed(0.5 * (t0 + t1)) + speed(t1));
    }
    const double total = arc[n];
    Curve c;
    c.length = total;
    c.winding = 1;
    c.at = [=](double t) {
        t -= std::floor(t);
        const double target = t * total;
        const auto it = std::upper_bound(arc.begin(), arc.end(), target);
        const long i = std::clamp<long>(static_cast<long>(it - arc.begin()) - 1, 0, n - 1);
        double th = kTwoPi * (i + (target - arc[i]) / (arc[i + 1] - arc[i])) / n;
        for (int iter = 0; iter < 3; ++iter) {
            // Newton on the Simpson-integrated arc length within the cell.
            const double t0 = kTwoPi * i / n;
            const double mid = 0.5 * (t0 + th);
            const double s = arc[i] + (th - t0) / 6.0 * (speed(t0) + 4.0 * speed(mid) + speed(th));
            th -= (s - target) / speed(th);
        }
        return Point(a * std::cos(th), b * std::sin(th));
    };
    return c;
}

struct TriangulationInput
{
    std::vector<Point> points;
    /// Polygons of the boundary loops; loop i owns points [offset_i, offset_i + size).
    std::vector<std::vector<Point>> polygons;
    std::vector<std::vector<int>> loops;
};

std::vector<Triangle> delaunay(const std::vector<Point>& points)
{
    using IntPoint = boost::polygon::point_data<int>;
    double extent = 0.0;
    for (const Point& p : points) extent = std::max({extent, std::abs(p.x()), std::abs(p.y())});
    const double scale = static_cast<double>(1 << 28) / extent;
    std::vector<IntPoint> input;
    input.reserve(points.size());
    for (const Point& p : points) {
        input.emplace_back(static_cast<int>(std::lround(p.x() * scale)),
                           static_cast<int>(std::lround(p.y() * scale)));
    }
    boost::polygon::voronoi_diagram<double> vd;
    boost::polygon::construct_voronoi(input.begin(), input.end(), &vd);

    std::vector<Triangle> triangles;
    std::vector<int> sites;
    for (const auto& vertex : vd.vertices()) {
        sites.clear();
        const auto* edge = vertex.incident_edge();
        do {
            sites.push_back(static_cast<int>(edge->cell()->source_index()));
            edge = edge->rot_next();
        } while (edge != vertex.incident_edge());
        for (size_t k = 1; k + 1 < sites.size(); ++k) {
            Triangle t{sites[0], sites[k], sites[k + 1]};
            const double area = cross(points[t[1]] - points[t[0]], points[t[2]] - points[t[0]]);
            if (area < 0.0) std::swap(t[1], t[2]);
            if (area != 0.0) triangles.push_back(t);
        }
    }
    return triangles;
}

/// Triangulates the points, keeps triangles inside the domain and drops
/// unreferenced vertices. Boundary points must come first.
PlanarMesh build_mesh(const TriangulationInput& in)
{
    const auto all = delaunay(in.points);
    PlanarMesh mesh;
    for (const Triangle& t : all) {
        const Point centroid = (in.points[t[0]] + in.points[t[1]] + in.points[t[2]]) / 3.0;
        bool keep = inside_polygon(in.polygons[0], centroid);
        for (size_t i = 1; keep && i < in.polygons.size(); ++i) {
            keep = !inside_polygon(in.polygons[i], centroid);
        }
        if (keep) mesh.triangles.push_back(t);
    }
    std::vector<int> remap(in.points.size(), -1);
    int boundary_count = 0;
    for (const auto& loop : in.loops) boundary_count += static_cast<int>(loop.size());
    for (int i = 0; i < boundary_count; ++i) remap[static_cast<size_t>(i)] = i;
    std::vector<bool> used(in.points.size(), false);
    for (const Triangle& t : mesh.triangles) {
        for (int v : t) used[static_cast<size_t>(v)] = true;
    }
    int next = boundary_count;
    for (size_t i = static_cast<size_t>(boundary_count); i < in.points.size(); ++i) {
        if (used[i]) remap[i] = next++;
    }
    mesh.vertices.resize(static_cast<size_t>(next));
    for (size_t i = 0; i < in.points.size(); ++i) {
        if (remap[i] >= 0) mesh.vertices[static_cast<size_t>(remap[i])] = in.points[i];
    }
    for (Triangle& t : mesh.triangles) {
        for (int& v : t) v = remap[static_cast<size_t>(v)];
    }
    mesh.boundary_loops = in.loops;
    return mesh;
}

/// Boundary samples of each curve followed by two offset layers and a
/// hexagonal lattice filling the rest of the domain.
TriangulationInput layered_points(const std::vector<Curve>& curves, double h, double lattice_factor)
{
    TriangulationInput in;
    std::vector<double> steps;
    for (const Curve& c : curves) {
        const int n = even_count(c.length, h);
        std::vector<int> loop;
        std::vector<Point> poly;
        for (int k = 0; k < n; ++k) {
            loop.push_back(static_cast<int>(in.points.size()));
            in.points.push_back(c.at(static_cast<double>(k) / n));
            poly.push_back(in.points.back());
        }
        in.loops.push_back(std::move(loop));
        in.polygons.push_back(std::move(poly));
        steps.push_back(c.length / n);
    }

    const double cell = h;
    PointHash accepted(cell);
    PointHash boundary(cell);
    for (const Point& p : in.points) {
        accepted.insert(p);
        boundary.insert(p);
    }
    const auto inside_domain = [&](const Point& p) {
        if (!inside_polygon(in.polygons[0], p)) return false;
        for (size_t i = 1; i < in.polygons.size(); ++i) {
            if (inside_polygon(in.polygons[i], p)) return false;
        }
        return true;
    };
    // True when p is closer than reach[i] to boundary polygon i.
    const auto near_boundary = [&](const Point& p, const std::vector<double>& reach) {
        const double widest = *std::max_element(reach.begin(), reach.end());
        if (!boundary.has_within(p, widest + h)) return false;
        for (size_t pi = 0; pi < in.polygons.size(); ++pi) {
            const auto& poly = in.polygons[pi];
            for (size_t i = 0; i < poly.size(); ++i) {
                if (segment_distance(p, poly[i], poly[(i + 1) % poly.size()]) < reach[pi]) return true;
            }
        }
        return false;
    };

    // Each layer keeps the previous count with a half-step shift while the
    // spacing does not grow (convex side); otherwise it is resampled more
    // densely and pulled closer.
    std::vector<double> band(curves.size(), 0.0);
    for (size_t ci = 0; ci < curves.size(); ++ci) {
        const Curve& c = curves[ci];
        int count = static_cast<int>(in.loops[ci].size());
        double spacing = steps[ci];
        double depth = 0.0;
        double shift = 0.0;
        for (int layer = 1; layer <= 2; ++layer) {
            const double aligned_depth = depth + spacing * std::sqrt(3.0) / 2.0;
            const double aligned_length = c.length - kTwoPi * aligned_depth * c.winding;
            if (aligned_length <= 0.0) break;
            if (aligned_length / count <= spacing) {
                depth = aligned_depth;
                shift += 0.5;
                spacing = aligned_length / count;
            } else {
                depth += 0.5 * spacing;
                const double length = c.length - kTwoPi * depth * c.winding;
                count = static_cast<int>(std::ceil(length / (0.7 * spacing)));
                spacing = length / count;
                shift = 0.0;
            }
            for (int k = 0; k < count; ++k) {
                const double t = (k + shift) / count;
                const Point p = c.at(t) + depth * c.inward_normal(t);
                if (!inside_domain(p)) continue;
                if (accepted.has_within(p, 0.6 * spacing)) continue;
                if (near_boundary(p, std::vector<double>(curves.size(), 0.45 * steps[ci]))) continue;
                accepted.insert(p);
                in.points.push_back(p);
            }
        }
        band[ci] = depth;
    }

    const double a = lattice_factor * h;
    const double row = a * std::sqrt(3.0) / 2.0;
    std::vector<double> lattice_reach;
    for (double depth : band) lattice_reach.push_back(depth + 0.5 * a);
    Eigen::AlignedBox2d box;
    for (const Point& p : in.polygons[0]) box.extend(p);
    const int rows = static_cast<int>(std::ceil(box.sizes().y() / row)) + 1;
    const int cols = static_cast<int>(std::ceil(box.sizes().x() / a)) + 2;
    for (int r = 0; r <= rows; ++r) {
        const double y = box.min().y() + r * row;
        const double x0 = box.min().x() - a + (r % 2 == 1 ? 0.5 * a : 0.0);
        for (int q = 0; q <= cols; ++q) {
            const Point p(x0 + q * a, y);
            if (!inside_domain(p)) continue;
            if (accepted.has_within(p, 0.75 * a)) continue;
            if (near_boundary(p, lattice_reach)) continue;
            accepted.insert(p);
            in.points.push_back(p);
        }
    }
    return in;
}

/// Concentric rings between two radii; `inner_radius` 0 puts a vertex at the
/// centre instead of a hole.
TriangulationInput ring_points(double inner_radius, double outer_radius, double h, double factor)
{
    TriangulationInput in;
    const int n_out = even_count(kTwoPi * outer_radius, h);
    const bool hole = inner_radius > 0.0;
    const int n_in = hole ? even_count(kTwoPi * inner_radius, h) : 0;
    std::vector<int> outer_loop;
    std::vector<Point> outer_poly;
    for (int k = 0; k < n_out; ++k) {
        const double th = kTwoPi * k / n_out;
        outer_loop.push_back(k);
        in.points.emplace_back(outer_radius * std::cos(th), outer_radius * std::sin(th));
        outer_poly.push_back(in.points.back());
    }
    in.loops.push_back(std::move(outer_loop));
    in.polygons.push_back(std::move(outer_poly));
    if (hole) {
        std::vector<int> loop;
        std::vector<Point> poly;
        for (int k = 0; k < n_in; ++k) {
            const double th = -kTwoPi * k / n_in;
            loop.push_back(static_cast<int>(in.points.size()));
            in.points.emplace_back(inner_radius * std::cos(th), inner_radius * std::sin(th));
            poly.push_back(in.points.back());
        }
        in.loops.push_back(std::move(loop));
        in.polygons.push_back(std::move(poly));
    }

    // Rings next to a boundary reuse its sample count with a half-step shift;
    // the others are spaced by at most 0.75 f h along and 0.45 f h across.
    const double width = outer_radius - inner_radius;
    const int gaps = std::max(2, static_cast<int>(std::ceil(width / (0.45 * factor * h))));
    for (int i = 1; i < gaps; ++i) {
        const double r = inner_radius + width * i / gaps;
        int n = std::max(6, static_cast<int>(std::ceil(kTwoPi * r / (0.75 * factor * h))));
        if (i == gaps - 1) n = n_out;
        if (hole && i == 1) n = n_in;
        const double shift = (gaps - i) % 2 == 1 ? 0.5 : 0.0;
        for (int k = 0; k < n; ++k) {
            const double th = kTwoPi * (k + shift) / n;
            in.points.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    if (!hole) in.points.emplace_back(0.0, 0.0);
    return in;
}

/// Bisects the longest edge of every triangle with an edge longer than h
/// until none is left.
PlanarMesh refine_long_edges(TriangulationInput in, double h)
{
    for (int pass = 0; pass < 60; ++pass) {
        PlanarMesh mesh = build_mesh(in);
        std::set<std::pair<int, int>> split;
        for (const Triangle& t : mesh.triangles) {
            // Longest-edge bisection.
            int best = -1;
            double longest = h;
            for (int e = 0; e < 3; ++e) {
                const double len = (mesh.vertices[static_cast<size_t>(t[e])] -
                                    mesh.vertices[static_cast<size_t>(t[(e + 1) % 3])]).norm();
                if (len > longest) {
                    longest = len;
                    best = e;
                }
            }
            if (best < 0) continue;
            const int a = t[best];
            const int b = t[(best + 1) % 3];
            split.insert({std::min(a, b), std::max(a, b)});
        }
        if (split.empty()) return mesh;
        for (const auto& [a, b] : split) {
            in.points.push_back(0.5 * (mesh.vertices[static_cast<size_t>(a)] + mesh.vertices[static_cast<size_t>(b)]));
        }
    }
    return build_mesh(in);
}

PlanarMesh generate_with_retries(
    const std::function<TriangulationInput(double)>& make_points,
    double h,
    std::initializer_list<double> factors,
    std::string_view what)
{
    std::string last_error;
    for (double factor : factors) {
        PlanarMesh mesh = refine_long_edges(make_points(factor), h);
        try {
            validate_mesh(mesh);
        } catch (const Error& e) {
            last_error = e.what();
            continue;
        }
        if (mesh.max_edge_length() <= h) return mesh;
        last_error = "max edge exceeds target";
    }
    fail(ErrorKind::GeometryInfeasible,
         std::string(what) + ": could not build a valid mesh (" + last_error + ")");
}

void require_positive(double value, std::string_view name)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        fail(ErrorKind::GeometryInfeasible, std::string(name) + " must be positive");
    }
}

} // namespace

std::vector<bool> PlanarMesh::boundary_mask() const
{
    std::vector<bool> mask(vertices.size(), false);
    for (const auto& loop : boundary_loops) {
        for (int v : loop) mask[static_cast<size_t>(v)] = true;
    }
    return mask;
}

double PlanarMesh::signed_area(const Triangle& t) const
{
    const Point& a = vertices[static_cast<size_t>(t[0])];
    return 0.5 * cross(vertices[static_cast<size_t>(t[1])] - a, vertices[static_cast<size_t>(t[2])] - a);
}

double PlanarMesh::max_edge_length() const
{
    double longest = 0.0;
    for (const Triangle& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            longest = std::max(longest, (vertices[static_cast<size_t>(t[e])] -
                                         vertices[static_cast<size_t>(t[(e + 1) % 3])]).norm());
        }
    }
    return longest;
}

double PlanarMesh::loop_length(int loop) const
{
    const auto& l = boundary_loops[static_cast<size_t>(loop)];
    double total = 0.0;
    for (size_t i = 0; i < l.size(); ++i) {
        total += (vertices[static_cast<size_t>(l[(i + 1) % l.size()])] - vertices[static_cast<size_t>(l[i])]).norm();
    }
    return total;
}

ConformalFactor ConformalFactor::constant(const PlanarMesh& mesh, double value)
{
    return {Eigen::VectorXd::Constant(mesh.vertex_count(), value)};
}

void ConformalFactor::validate(const PlanarMesh& mesh) const
{
    if (values.size() != mesh.vertex_count()) {
        fail(ErrorKind::GeometryMismatch, "conformal factor has " + std::to_string(values.size()) +
                                              " values for " + std::to_string(mesh.vertex_count()) + " vertices");
    }
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            fail(ErrorKind::PreconditionViolation, "conformal factor must be positive at vertex " + std::to_string(i));
        }
    }
}

void validate_mesh(const PlanarMesh& mesh, double spacing_tolerance)
{
    const int nv = mesh.vertex_count();
    if (mesh.triangles.empty()) fail(ErrorKind::Schema, "mesh has no triangles");
    if (mesh.boundary_loops.empty()) fail(ErrorKind::Schema, "mesh has no boundary loops");

    std::map<std::pair<int, int>, int> directed;
    for (size_t i = 0; i < mesh.triangles.size(); ++i) {
        const Triangle& t = mesh.triangles[i];
        for (int v : t) {
            if (v < 0 || v >= nv) fail(ErrorKind::Schema, "triangle " + std::to_string(i) + " has an invalid vertex index");
        }
        if (!(mesh.signed_area(t) > 0.0)) {
            fail(ErrorKind::DegenerateTriangle, "triangle " + std::to_string(i) + " is degenerate or clockwise");
        }
        for (int e = 0; e < 3; ++e) {
            if (++directed[{t[e], t[(e + 1) % 3]}] > 1) {
                fail(ErrorKind::GeometryInfeasible, "edge used twice with the same direction");
            }
        }
    }
    // Boundary edges are those without a reverse twin; the domain lies to their left.
    std::map<int, int> boundary_next;
    for (const auto& [edge, count] : directed) {
        if (directed.count({edge.second, edge.first}) == 0) {
            if (!boundary_next.emplace(edge.first, edge.second).second) {
                fail(ErrorKind::GeometryInfeasible, "boundary is not a union of simple cycles");
            }
        }
    }

    std::vector<int> owner(static_cast<size_t>(nv), -1);
    size_t loop_edges = 0;
    double outer_area = 0.0;
    for (size_t li = 0; li < mesh.boundary_loops.size(); ++li) {
        const auto& loop = mesh.boundary_loops[li];
        if (loop.size() < 3) fail(ErrorKind::GeometryInfeasible, "boundary loop too short");
        std::vector<Point> poly;
        double min_edge = INFINITY;
        double max_edge = 0.0;
        for (size_t k = 0; k < loop.size(); ++k) {
            const int v = loop[k];
            const int w = loop[(k + 1) % loop.size()];
            if (v < 0 || v >= nv) fail(ErrorKind::Schema, "boundary loop has an invalid vertex index");
            if (owner[static_cast<size_t>(v)] != -1) {
                fail(ErrorKind::GeometryInfeasible, "boundary loops are not disjoint simple cycles");
            }
            owner[static_cast<size_t>(v)] = static_cast<int>(li);
            const auto it = boundary_next.find(v);
            if (it == boundary_next.end() || it->second != w) {
                std::ostringstream msg;
                msg << "loop " << li << " edge (" << v << ", " << w << ") is not a boundary edge with the domain on its left";
                fail(ErrorKind::GeometryInfeasible, msg.str());
            }
            const double len = (mesh.vertices[static_cast<size_t>(w)] - mesh.vertices[static_cast<size_t>(v)]).norm();
            min_edge = std::min(min_edge, len);
            max_edge = std::max(max_edge, len);
            poly.push_back(mesh.vertices[static_cast<size_t>(v)]);
        }
        loop_edges += loop.size();
        const double mean = mesh.loop_length(static_cast<int>(li)) / static_cast<double>(loop.size());
        if (max_edge > (1.0 + spacing_tolerance) * mean || min_edge < (1.0 - spacing_tolerance) * mean) {
            fail(ErrorKind::GeometryInfeasible, "loop " + std::to_string(li) + " is not uniformly spaced");
        }
        const double area = polygon_signed_area(poly);
        if (li == 0) {
            if (!(area > 0.0)) fail(ErrorKind::GeometryInfeasible, "outer loop must be counterclockwise");
            outer_area = area;
        } else if (!(area < 0.0) || -area >= outer_area) {
            fail(ErrorKind::GeometryInfeasible, "hole loop " + std::to_string(li) + " must be clockwise and inside");
        }
    }
    if (loop_edges != boundary_next.size()) {
        fail(ErrorKind::GeometryInfeasible, "boundary loops do not cover every boundary edge");
    }
}

PlanarMesh generate_disk_mesh(double radius, double target_h)
{
    require_positive(radius, "disk radius");
    require_positive(target_h, "mesh size");
    return generate_with_retries(
        [&](double f) { return ring_points(0.0, radius, target_h, f); }, target_h,
        {1.0, 0.9, 0.8, 0.7}, "disk");
}

PlanarMesh generate_annulus_mesh(double r_in, double r_out, double target_h)
{
    require_positive(r_in, "inner radius");
    require_positive(target_h, "mesh size");
    if (!(r_out > r_in)) fail(ErrorKind::GeometryInfeasible, "annulus needs r_in < r_out");
    return generate_with_retries(
        [&](double f) { return ring_points(r_in, r_out, target_h, f); }, target_h,
        {1.0, 0.9, 0.8, 0.7}, "annulus");
}

PlanarMesh generate_multihole_mesh(double outer_radius, const std::vector<Hole>& holes, double target_h)
{
    require_positive(outer_radius, "outer radius");
    require_positive(target_h, "mesh size");
    std::vector<Curve> curves{circle_curve(Point::Zero(), outer_radius, 1)};
    for (size_t i = 0; i < holes.size(); ++i) {
        const Hole& hole = holes[i];
        require_positive(hole.radius, "hole radius");
        if (hole.center.norm() + hole.radius >= outer_radius) {
            fail(ErrorKind::GeometryInfeasible, "hole " + std::to_string(i) + " is not strictly inside the outer circle");
        }
        for (size_t j = 0; j < i; ++j) {
            if ((hole.center - holes[j].center).norm() <= hole.radius + holes[j].radius) {
                fail(ErrorKind::GeometryInfeasible,
                     "holes " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
            }
        }
        curves.push_back(circle_curve(hole.center, hole.radius, -1));
    }
    return generate_with_retries(
        [&](double f) { return layered_points(curves, target_h, f); }, target_h,
        {0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6}, "multihole");
}

PlanarMesh generate_ellipse_mesh(double a, double b, double target_h)
{
    require_positive(a, "semi-axis");
    require_positive(b, "semi-axis");
    require_positive(target_h, "mesh size");
    const std::vector<Curve> curves{ellipse_curve(a, b)};
    return generate_with_retries(
        [&](double f) { return layered_points(curves, target_h, f); }, target_h,
        {0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6}, "ellipse");
}

} // namespace steklov
