#include <steklov/dn_map.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace steklov {

std::string_view to_string(DnMethod method)
{
    return method == DnMethod::Spectral ? "spectral" : "fem";
}

DnMethod dn_method_from_string(std::string_view name)
{
    if (name == "spectral") return DnMethod::Spectral;
    if (name == "fem") return DnMethod::Fem;
    fail(ErrorKind::Schema, "unknown DN method '" + std::string(name) + "'");
}

DnTolerances spectral_dn_tolerances()
{
    return {};
}

DnTolerances fem_dn_tolerances(double fem_tolerance)
{
    DnTolerances tol;
    tol.kernel = 1e-10;
    tol.range_mean = 1e-8;
    tol.symmetry = 10.0 * fem_tolerance;
    tol.nonnegativity = fem_tolerance;
    return tol;
}

DNMap::DNMap(BoundaryOperator op, Provenance provenance)
    : m_op(std::move(op))
    , m_provenance(std::move(provenance))
    , m_diagnostics(compute_diagnostics(m_op))
{}

DNMap DNMap::permuted(std::span<const int> order) const
{
    const auto& g = geometry();
    if (static_cast<int>(order.size()) != g.circle_count()) {
        fail(ErrorKind::GeometryMismatch, "permutation must list every circle once");
    }
    std::vector<CircleSpec> circles;
    std::vector<int> index; // new stacked index -> old stacked index
    std::vector<bool> seen(order.size(), false);
    for (int j : order) {
        if (j < 0 || j >= g.circle_count() || seen[static_cast<size_t>(j)]) {
            fail(ErrorKind::GeometryMismatch, "invalid circle permutation");
        }
        seen[static_cast<size_t>(j)] = true;
        circles.push_back(g.circle(j));
        for (int k = 0; k < g.samples(j); ++k) index.push_back(g.offset(j) + k);
    }
    const auto n = static_cast<Eigen::Index>(index.size());
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = matrix()(index[static_cast<size_t>(r)], index[static_cast<size_t>(c)]);
        }
    }
    BoundaryOperator op(BoundaryGeometry(std::move(circles)), std::move(m), m_op.domain(), m_op.range());
    return {std::move(op), m_provenance};
}

DnDiagnostics compute_diagnostics(const BoundaryOperator& op)
{
    DnDiagnostics d;
    const auto& g = op.geometry();
    const CMatrix& a = op.matrix();
    const Eigen::VectorXd w = g.quadrature_weights();

    const double norm_inf = a.cwiseAbs().rowwise().sum().maxCoeff();
    if (norm_inf == 0.0) return d;

    d.kernel_defect = (a.rowwise().sum()).cwiseAbs().maxCoeff() / norm_inf;

    // Column i is Lambda applied to the i-th unit sample.
    const Eigen::RowVectorXcd integrals = w.transpose().cast<Complex>() * a;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        const double col_norm = a.col(i).cwiseAbs().maxCoeff();
        if (col_norm == 0.0) continue;
        d.range_mean_defect = std::max(
            d.range_mean_defect, std::abs(integrals[i]) / (col_norm * g.total_length()));
    }

    const CMatrix wa = w.asDiagonal() * a;
    d.symmetry_defect = (wa - wa.adjoint()).norm() / wa.norm();
    d.imaginary_defect = op.imaginary_ratio();

    const CMatrix weighted = op.weighted_matrix();
    Eigen::VectorXd eig;
    if (d.imaginary_defect == 0.0) {
        const Eigen::MatrixXd s = 0.5 * (weighted.real() + weighted.real().transpose());
        eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
    } else {
        const CMatrix s = 0.5 * (weighted + weighted.adjoint());
        eig = Eigen::SelfAdjointEigenSolver<CMatrix>(s, Eigen::EigenvaluesOnly).eigenvalues();
    }
    const double top = eig.maxCoeff();
    if (top > 0.0) d.nonnegativity_defect = std::max(0.0, -eig.minCoeff()) / top;
    return d;
}

bool diagnostics_within(const DnDiagnostics& d, const DnTolerances& tol)
{
    return d.kernel_defect <= tol.kernel && d.range_mean_defect <= tol.range_mean &&
           d.symmetry_defect <= tol.symmetry && d.nonnegativity_defect <= tol.nonnegativity;
}

Complex fourier_multiplier(const DNMap& dn, int circle, int mode)
{
    const auto& g = dn.geometry();
    const double length = g.length(circle);
    const auto e = BoundaryFunction::sample(g, [&](int j, double s) {
        return j == circle ? std::polar(1.0, 2.0 * std::numbers::pi * mode * s / length) : Complex(0.0);
    });
    return l2_inner_product(dn.apply(e), e) / l2_inner_product(e, e);
}

} // namespace steklov
