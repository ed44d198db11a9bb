#include <steklov/fem.hpp>

#include <steklov/dn_spectral.hpp>

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace steklov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Per-loop metric edge lengths; edge i joins loop[i] and loop[i + 1].
std::vector<Eigen::VectorXd> metric_edge_lengths(const PlanarMesh& mesh, const ConformalFactor& lambda)
{
    std::vector<Eigen::VectorXd> out;
    for (const auto& loop : mesh.boundary_loops) {
        const auto n = static_cast<Eigen::Index>(loop.size());
        Eigen::VectorXd len(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int a = loop[static_cast<size_t>(i)];
            const int b = loop[static_cast<size_t>((i + 1) % n)];
            const double mid = 0.5 * (lambda.values[a] + lambda.values[b]);
            len[i] = std::sqrt(mid) * (mesh.vertices[static_cast<size_t>(b)] - mesh.vertices[static_cast<size_t>(a)]).norm();
        }
        out.push_back(std::move(len));
    }
    return out;
}

/// 1D P1 mass matrix of a closed loop with the given edge lengths.
Eigen::MatrixXd loop_mass(const Eigen::VectorXd& edges, BoundaryMass kind)
{
    const auto n = edges.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index e = 0; e < n; ++e) {
        const Eigen::Index a = e;
        const Eigen::Index b = (e + 1) % n;
        if (kind == BoundaryMass::Lumped) {
            m(a, a) += 0.5 * edges[e];
            m(b, b) += 0.5 * edges[e];
        } else {
            m(a, a) += edges[e] / 3.0;
            m(b, b) += edges[e] / 3.0;
            m(a, b) += edges[e] / 6.0;
            m(b, a) += edges[e] / 6.0;
        }
    }
    return m;
}

/// Normalised metric arc position of every loop vertex, starting at 0.
Eigen::VectorXd loop_positions(const Eigen::VectorXd& edges)
{
    Eigen::VectorXd u(edges.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < edges.size(); ++i) {
        u[i] = acc;
        acc += edges[i];
    }
    return u / acc;
}

/// Least-squares trigonometric fit with weights `w` of values at points `u`,
/// evaluated on a uniform grid. Modes |k| < grid / 2.
Eigen::MatrixXd trig_fit_matrix(int grid, const Eigen::VectorXd& u, const Eigen::VectorXd& w)
{
    const int kmax = grid / 2 - 1;
    const auto count = static_cast<Eigen::Index>(2 * kmax + 1);
    const auto n = u.size();
    // Real basis 1, cos, sin keeps the fit real.
    Eigen::MatrixXd basis(n, count);
    Eigen::MatrixXd grid_basis(grid, count);
    const auto fill = [&](Eigen::MatrixXd& b, Eigen::Index row, double x) {
        b(row, 0) = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            b(row, 2 * k - 1) = std::cos(kTwoPi * k * x);
            b(row, 2 * k) = std::sin(kTwoPi * k * x);
        }
    };
    for (Eigen::Index i = 0; i < n; ++i) fill(basis, i, u[i]);
    for (int k = 0; k < grid; ++k) fill(grid_basis, k, static_cast<double>(k) / grid);
    const Eigen::MatrixXd gram = basis.transpose() * w.asDiagonal() * basis;
    const Eigen::MatrixXd coeffs = gram.ldlt().solve(basis.transpose() * w.asDiagonal());
    return grid_basis * coeffs;
}

SparseMatrix select(const SparseMatrix& k, const std::vector<int>& rows, const std::vector<int>& cols)
{
    std::vector<int> row_index(static_cast<size_t>(k.rows()), -1);
    std::vector<int> col_index(static_cast<size_t>(k.cols()), -1);
    for (size_t i = 0; i < rows.size(); ++i) row_index[static_cast<size_t>(rows[i])] = static_cast<int>(i);
    for (size_t i = 0; i < cols.size(); ++i) col_index[static_cast<size_t>(cols[i])] = static_cast<int>(i);
    std::vector<Eigen::Triplet<double>> triplets;
    for (int c = 0; c < k.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(k, c); it; ++it) {
            const int r = row_index[static_cast<size_t>(it.row())];
            const int cc = col_index[static_cast<size_t>(it.col())];
            if (r >= 0 && cc >= 0) triplets.emplace_back(r, cc, it.value());
        }
    }
    SparseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

} // namespace

SparseMatrix assemble_stiffness(const PlanarMesh& mesh)
{
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * mesh.triangles.size());
    for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const Triangle& t = mesh.triangles[ti];
        const double area = mesh.signed_area(t);
        if (!(area > 0.0)) {
            fail(ErrorKind::DegenerateTriangle, "triangle " + std::to_string(ti) + " has non-positive area");
        }
        // Edge vectors opposite each vertex, rotated, give the P1 gradients.
        Eigen::Matrix<double, 2, 3> e;
        for (int i = 0; i < 3; ++i) {
            e.col(i) = mesh.vertices[static_cast<size_t>(t[(i + 2) % 3])] - mesh.vertices[static_cast<size_t>(t[(i + 1) % 3])];
        }
        const Eigen::Matrix3d local = e.transpose() * e / (4.0 * area);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) triplets.emplace_back(t[i], t[j], local(i, j));
        }
    }
    SparseMatrix k(mesh.vertex_count(), mesh.vertex_count());
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

Eigen::VectorXd lumped_vertex_mass(const PlanarMesh& mesh)
{
    Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (const Triangle& t : mesh.triangles) {
        const double third = mesh.signed_area(t) / 3.0;
        for (int v : t) m[v] += third;
    }
    return m;
}

InteriorSystem::InteriorSystem(const PlanarMesh& mesh)
    : m_mesh(std::make_shared<const PlanarMesh>(mesh))
    , m_stiffness(assemble_stiffness(mesh))
{
    std::vector<bool> on_boundary(static_cast<size_t>(mesh.vertex_count()), false);
    for (const auto& loop : mesh.boundary_loops) {
        for (int v : loop) {
            m_boundary.push_back(v);
            on_boundary[static_cast<size_t>(v)] = true;
        }
    }
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (!on_boundary[static_cast<size_t>(v)]) m_interior.push_back(v);
    }
    m_kii = select(m_stiffness, m_interior, m_interior);
    m_kib = select(m_stiffness, m_interior, m_boundary);
    m_kbb = select(m_stiffness, m_boundary, m_boundary);
    if (!m_interior.empty()) {
        m_factor.compute(m_kii);
        if (m_factor.info() != Eigen::Success) {
            fail(ErrorKind::SingularSystem, "interior stiffness block could not be factorised");
        }
        const Eigen::VectorXd d = m_factor.vectorD();
        if (!(d.minCoeff() > 0.0)) fail(ErrorKind::SingularSystem, "interior stiffness block is not positive definite");
    }
}

Eigen::VectorXd InteriorSystem::solve_interior(const Eigen::VectorXd& rhs) const
{
    if (m_interior.empty()) return {};
    Eigen::VectorXd x = m_factor.solve(rhs);
    if (m_factor.info() != Eigen::Success || !x.allFinite()) {
        fail(ErrorKind::SingularSystem, "interior solve failed");
    }
    return x;
}

Eigen::VectorXd InteriorSystem::harmonic_extension(const Eigen::VectorXd& boundary_values) const
{
    if (boundary_values.size() != boundary_count()) {
        fail(ErrorKind::GeometryMismatch, "expected " + std::to_string(boundary_count()) + " boundary values");
    }
    Eigen::VectorXd full(m_mesh->vertex_count());
    for (int i = 0; i < boundary_count(); ++i) full[m_boundary[static_cast<size_t>(i)]] = boundary_values[i];
    const Eigen::VectorXd inner = solve_interior(-(m_kib * boundary_values));
    for (int i = 0; i < interior_count(); ++i) full[m_interior[static_cast<size_t>(i)]] = inner[i];
    return full;
}

Eigen::MatrixXd InteriorSystem::schur_complement() const
{
    Eigen::MatrixXd s = Eigen::MatrixXd(m_kbb);
    if (m_interior.empty()) return s;
    const SparseMatrix kbi = m_kib.transpose();
    const int nb = boundary_count();
    constexpr int block = 64;
    for (int c0 = 0; c0 < nb; c0 += block) {
        const int width = std::min(block, nb - c0);
        const Eigen::MatrixXd rhs = Eigen::MatrixXd(m_kib.middleCols(c0, width));
        const Eigen::MatrixXd x = m_factor.solve(rhs);
        s.middleCols(c0, width) -= kbi * x;
    }
    // Symmetric up to roundoff; remove it so downstream checks see the FEM error only.
    return 0.5 * (s + s.transpose());
}

Eigen::VectorXd solve_dirichlet(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const Eigen::VectorXd& boundary_values)
{
    lambda.validate(mesh);
    const InteriorSystem system(mesh);
    const Eigen::VectorXd full = system.harmonic_extension(boundary_values);
    Eigen::VectorXd interior(system.interior_count());
    for (int i = 0; i < system.interior_count(); ++i) {
        interior[i] = full[system.interior_vertices()[static_cast<size_t>(i)]];
    }
    return interior;
}

BoundaryGeometry metric_boundary_geometry(const PlanarMesh& mesh, const ConformalFactor& lambda)
{
    lambda.validate(mesh);
    const auto edges = metric_edge_lengths(mesh, lambda);
    std::vector<CircleSpec> circles;
    for (size_t j = 0; j < edges.size(); ++j) {
        int samples = static_cast<int>(edges[j].size());
        samples += samples % 2;
        circles.push_back({edges[j].sum(), std::max(samples, 8), j == 0 ? 1 : -1});
    }
    return BoundaryGeometry(std::move(circles));
}

Eigen::VectorXd boundary_vertex_values(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const BoundaryFunction& f)
{
    lambda.validate(mesh);
    const BoundaryGeometry& g = f.geometry();
    if (g.circle_count() != mesh.loop_count()) {
        fail(ErrorKind::GeometryMismatch, "boundary function needs one circle per boundary loop");
    }
    const auto edges = metric_edge_lengths(mesh, lambda);
    Eigen::Index total = 0;
    for (const auto& e : edges) total += e.size();
    Eigen::VectorXd out(total);
    Eigen::Index row = 0;
    for (int j = 0; j < g.circle_count(); ++j) {
        const Eigen::VectorXd& len = edges[static_cast<size_t>(j)];
        if (std::abs(g.length(j) - len.sum()) > 0.01 * len.sum()) {
            fail(ErrorKind::GeometryMismatch,
                 "circle " + std::to_string(j) + " length does not match the metric loop length");
        }
        const Eigen::MatrixXd interp = trig_interpolation_matrix(g.samples(j), loop_positions(len));
        out.segment(row, len.size()) = interp * f.circle_values(j).real();
        row += len.size();
    }
    return out;
}

std::string_view to_string(BoundaryMass mass)
{
    return mass == BoundaryMass::Lumped ? "lumped" : "consistent";
}

std::string_view to_string(Resampling resampling)
{
    return resampling == Resampling::Spectral ? "spectral" : "cubic";
}

std::string_view to_string(ProbeBasis probes)
{
    return probes == ProbeBasis::Indicators ? "indicators" : "fourier";
}

BoundaryMass boundary_mass_from_string(std::string_view name)
{
    if (name == "lumped") return BoundaryMass::Lumped;
    if (name == "consistent") return BoundaryMass::Consistent;
    fail(ErrorKind::Schema, "unknown boundary mass '" + std::string(name) + "'");
}

Resampling resampling_from_string(std::string_view name)
{
    if (name == "spectral") return Resampling::Spectral;
    if (name == "cubic") return Resampling::CubicSpline;
    fail(ErrorKind::Schema, "unknown resampling '" + std::string(name) + "'");
}

ProbeBasis probe_basis_from_string(std::string_view name)
{
    if (name == "indicators") return ProbeBasis::Indicators;
    if (name == "fourier") return ProbeBasis::Fourier;
    fail(ErrorKind::Schema, "unknown probe basis '" + std::string(name) + "'");
}

Eigen::MatrixXd trig_interpolation_matrix(int grid, const Eigen::VectorXd& u)
{
    const int kmax = grid / 2 - 1;
    Eigen::MatrixXd m(u.size(), grid);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        for (int k = 0; k < grid; ++k) {
            // Dirichlet kernel sum over |q| <= kmax of e^{2 pi i q (u - k/N)}.
            const double half = std::numbers::pi * (u[i] - static_cast<double>(k) / grid);
            const double denom = std::sin(half);
            const double kernel = std::abs(denom) < 1e-14 ? 2.0 * kmax + 1.0
                                                          : std::sin((2.0 * kmax + 1.0) * half) / denom;
            m(i, k) = kernel / grid;
        }
    }
    return m;
}

Eigen::MatrixXd periodic_spline_matrix(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const auto n = x.size();
    if (n < 3) fail(ErrorKind::PreconditionViolation, "periodic spline needs at least three nodes");
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) h[i] = (i + 1 < n ? x[i + 1] : x[0] + 1.0) - x[i];
    // Second derivatives M solve A M = B values on the periodic node set.
    std::vector<Eigen::Triplet<double>> a_t;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index prev = (i + n - 1) % n;
        const Eigen::Index next = (i + 1) % n;
        a_t.emplace_back(i, prev, h[prev] / 6.0);
        a_t.emplace_back(i, i, (h[prev] + h[i]) / 3.0);
        a_t.emplace_back(i, next, h[i] / 6.0);
        b(i, next) += 1.0 / h[i];
        b(i, i) -= 1.0 / h[i] + 1.0 / h[prev];
        b(i, prev) += 1.0 / h[prev];
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(a_t.begin(), a_t.end());
    Eigen::SparseLU<SparseMatrix> lu(a);
    const Eigen::MatrixXd second = lu.solve(b);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(y.size(), n);
    for (Eigen::Index r = 0; r < y.size(); ++r) {
        double t = y[r] - std::floor(y[r]);
        // Interval i with x_i <= t < x_{i+1}, wrapping below x_0.
        auto it = std::upper_bound(x.data(), x.data() + n, t);
        Eigen::Index i = (it - x.data()) - 1;
        if (i < 0) {
            i = n - 1;
            t += 1.0;
        }
        const Eigen::Index j = (i + 1) % n;
        const double hi = h[i];
        const double left = x[i] + hi - t;
        const double right = t - x[i];
        out(r, i) += left / hi;
        out(r, j) += right / hi;
        const double ci = (left * left * left / hi - hi * left) / 6.0;
        const double cj = (right * right * right / hi - hi * right) / 6.0;
        out.row(r) += ci * second.row(i) + cj * second.row(j);
    }
    return out;
}

DNMap compute_dn(
    const PlanarMesh& mesh,
    const ConformalFactor& lambda,
    const BoundaryGeometry& out_geometry,
    const FemOptions& options)
{
    return compute_dn(InteriorSystem(mesh), lambda, out_geometry, options);
}

DNMap compute_dn(
    const InteriorSystem& system,
    const ConformalFactor& lambda,
    const BoundaryGeometry& out_geometry,
    const FemOptions& options)
{
    const PlanarMesh& mesh = system.mesh();
    lambda.validate(mesh);
    if (out_geometry.circle_count() != mesh.loop_count()) {
        fail(ErrorKind::GeometryMismatch, "output geometry needs one circle per boundary loop");
    }
    const auto edges = metric_edge_lengths(mesh, lambda);
    for (int j = 0; j < mesh.loop_count(); ++j) {
        const double metric = edges[static_cast<size_t>(j)].sum();
        if (std::abs(out_geometry.length(j) - metric) > 0.01 * metric) {
            std::ostringstream msg;
            msg << "circle " << j << " length " << out_geometry.length(j) << " differs from the metric loop length "
                << metric << " by more than 1%";
            fail(ErrorKind::GeometryMismatch, msg.str());
        }
    }

    const Eigen::MatrixXd weak = system.schur_complement();
    const int nb = system.boundary_count();
    const int total = out_geometry.total_samples();

    // Strong Neumann values: block-diagonal boundary mass inverse.
    Eigen::MatrixXd strong(nb, nb);
    Eigen::MatrixXd resample_in = Eigen::MatrixXd::Zero(nb, total);
    Eigen::MatrixXd resample_out = Eigen::MatrixXd::Zero(total, nb);
    int row = 0;
    for (int j = 0; j < mesh.loop_count(); ++j) {
        const Eigen::VectorXd& len = edges[static_cast<size_t>(j)];
        const auto n = len.size();
        const Eigen::MatrixXd mass = loop_mass(len, options.mass);
        const double smallest = mass.diagonal().minCoeff();
        if (!(smallest > 1e-12 * mass.diagonal().maxCoeff())) {
            fail(ErrorKind::IllConditionedMass, "boundary mass of loop " + std::to_string(j) + " is ill-conditioned");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(mass);
        if (llt.info() != Eigen::Success) {
            fail(ErrorKind::IllConditionedMass, "boundary mass of loop " + std::to_string(j) + " is not positive definite");
        }
        strong.middleRows(row, n) = llt.solve(weak.middleRows(row, n));

        const Eigen::VectorXd u = loop_positions(len);
        const int grid = out_geometry.samples(j);
        const int offset = out_geometry.offset(j);
        // Neumann data is a density; rescale to the output arc length.
        const double density = len.sum() / out_geometry.length(j);
        if (options.resampling == Resampling::Spectral) {
            resample_in.block(row, offset, n, grid) = trig_interpolation_matrix(grid, u);
            const Eigen::VectorXd w = mass.rowwise().sum();
            resample_out.block(offset, row, grid, n) = density * trig_fit_matrix(grid, u, w);
        } else {
            const Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(grid, 0.0, (grid - 1.0) / grid);
            resample_in.block(row, offset, n, grid) = periodic_spline_matrix(g, u);
            resample_out.block(offset, row, grid, n) = density * periodic_spline_matrix(u, g);
        }
        row += static_cast<int>(n);
    }

    const Eigen::MatrixXd core = resample_out * strong;
    Eigen::MatrixXd dense;
    if (options.probes == ProbeBasis::Indicators) {
        dense = core * resample_in;
    } else {
        // Apply to real Fourier probes per circle, then change basis back.
        Eigen::MatrixXd probes = Eigen::MatrixXd::Zero(total, total);
        for (int j = 0; j < out_geometry.circle_count(); ++j) {
            const int grid = out_geometry.samples(j);
            const int offset = out_geometry.offset(j);
            for (int k = 0; k < grid; ++k) {
                const double x = static_cast<double>(k) / grid;
                probes(offset + k, offset) = 1.0;
                for (int q = 1; q < grid / 2; ++q) {
                    probes(offset + k, offset + 2 * q - 1) = std::cos(kTwoPi * q * x);
                    probes(offset + k, offset + 2 * q) = std::sin(kTwoPi * q * x);
                }
                probes(offset + k, offset + grid - 1) = (k % 2 == 0) ? 1.0 : -1.0;
            }
        }
        const Eigen::MatrixXd response = core * (resample_in * probes);
        dense = response * probes.partialPivLu().inverse();
    }

    BoundaryOperator op(out_geometry, dense.cast<Complex>(), SubspaceTag::All, SubspaceTag::ZeroGlobalMean);
    std::ostringstream domain;
    domain << "mesh(vertices=" << mesh.vertex_count() << ",loops=" << mesh.loop_count() << ",mass="
           << to_string(options.mass) << ",resampling=" << to_string(options.resampling) << ")";
    int modes = 0;
    for (int j = 0; j < out_geometry.circle_count(); ++j) modes = std::max(modes, out_geometry.samples(j));
    return {std::move(op), Provenance{DnMethod::Fem, domain.str(), modes, options.mesh_h}};
}

double calibrate_fem_tolerance(double h, const FemOptions& options)
{
    const PlanarMesh mesh = generate_disk_mesh(1.0, h);
    const ConformalFactor one = ConformalFactor::constant(mesh, 1.0);
    FemOptions opts = options;
    opts.mesh_h = h;
    const DNMap dn = compute_dn(mesh, one, metric_boundary_geometry(mesh, one), opts);
    double worst = 0.0;
    for (int k = 1; k <= 8; ++k) {
        worst = std::max(worst, std::abs(fourier_multiplier(dn, 0, k).real() - k) / k);
    }
    return worst;
}

} // namespace steklov
