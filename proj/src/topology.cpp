#include <steklov/topology.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace steklov {

namespace {

struct Svd
{
    Eigen::VectorXd values;
    CMatrix u;
    CMatrix v;
};

/// SVD that stays in real arithmetic when the matrix is real or purely
/// imaginary (the common case for these operators).
Svd svd(const CMatrix& m, bool vectors)
{
    const int options = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0;
    const double scale = m.cwiseAbs().maxCoeff();
    Svd out;
    if (scale == 0.0) {
        out.values = Eigen::VectorXd::Zero(std::min(m.rows(), m.cols()));
        if (vectors) {
            out.u = CMatrix::Identity(m.rows(), out.values.size());
            out.v = CMatrix::Identity(m.cols(), out.values.size());
        }
        return out;
    }
    const double re = m.real().cwiseAbs().maxCoeff();
    const double im = m.imag().cwiseAbs().maxCoeff();
    if (im <= 1e-15 * scale || re <= 1e-15 * scale) {
        const bool imaginary = re <= 1e-15 * scale;
        const Eigen::MatrixXd r = imaginary ? Eigen::MatrixXd(m.imag()) : Eigen::MatrixXd(m.real());
        Eigen::BDCSVD<Eigen::MatrixXd> s(r, options);
        out.values = s.singularValues();
        if (vectors) {
            // i R = U S (i V)^H  requires the factor on one side only.
            out.u = s.matrixU().cast<Complex>();
            out.v = s.matrixV().cast<Complex>();
            if (imaginary) out.u *= Complex(0.0, 1.0);
        }
        return out;
    }
    Eigen::BDCSVD<CMatrix> s(m, options);
    out.values = s.singularValues();
    if (vectors) {
        out.u = s.matrixU();
        out.v = s.matrixV();
    }
    return out;
}

Eigen::VectorXd sqrt_weights(const BoundaryGeometry& g)
{
    return g.quadrature_weights().cwiseSqrt();
}

CMatrix weighted(const BoundaryOperator& op)
{
    return op.weighted_matrix();
}

double spectral_norm(const CMatrix& m)
{
    const auto s = svd(m, false);
    return s.values.size() ? s.values[0] : 0.0;
}

double weighted_norm(const BoundaryFunction& f)
{
    return l2_norm(f);
}

int band_dimension(const BoundaryGeometry& g, const std::vector<int>& band)
{
    int dim = 0;
    for (int j = 0; j < g.circle_count(); ++j) {
        const int kmax = band.empty() ? g.samples(j) / 2 - 1 : band[static_cast<size_t>(j)];
        dim += 2 * kmax + 1;
    }
    return dim;
}

CMatrix band_limited(const BoundaryOperator& op, const std::vector<int>& band)
{
    if (band.empty()) return op.matrix();
    const CMatrix b = band_operator(op.geometry(), band).matrix();
    return b * op.matrix() * b;
}

/// W-orthonormal basis of balanced locally constant functions (m - 1 of them).
std::vector<BoundaryFunction> balanced_constant_basis(const BoundaryGeometry& g)
{
    const int m = g.circle_count();
    std::vector<BoundaryFunction> out;
    if (m < 2) return out;
    Eigen::VectorXd a(m);
    for (int j = 0; j < m; ++j) a[j] = std::sqrt(g.length(j));
    a /= a.norm();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    for (int l = 1; l < m; ++l) {
        std::vector<Complex> values(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) values[static_cast<size_t>(j)] = q(j, l) / std::sqrt(g.length(j));
        out.push_back(BoundaryFunction::locally_constant(g, values));
    }
    return out;
}

struct LinearFit
{
    CVector coefficients;
    double residual = 0.0;
    double uniqueness_defect = -1.0;
};

/// Minimum-norm least squares of lhs by the columns in the W inner product.
LinearFit fit_columns(
    const BoundaryGeometry& g,
    const CVector& lhs,
    const CMatrix& columns,
    double reference,
    std::optional<unsigned> seed)
{
    LinearFit fit;
    const Eigen::VectorXd sw = sqrt_weights(g);
    const CVector b = sw.cast<Complex>().asDiagonal() * lhs;
    const double scale = b.norm();
    const auto p = columns.cols();
    if (reference == 0.0) return fit;
    const auto solve = [&](const CMatrix& a) -> CVector {
        if (a.cols() == 0) return CVector(0);
        Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
        cod.setThreshold(1e-10);
        return cod.solve(b);
    };
    const CMatrix a = sw.cast<Complex>().asDiagonal() * columns;
    fit.coefficients = solve(a);
    const CVector r = p ? CVector(b - a * fit.coefficients) : b;
    fit.residual = r.norm() / reference;
    if (seed) {
        if (p == 0) {
            fit.uniqueness_defect = 0.0;
        } else {
            std::mt19937 rng(*seed);
            std::normal_distribution<double> normal;
            Eigen::MatrixXd gauss(p, p);
            for (Eigen::Index i = 0; i < gauss.size(); ++i) gauss.data()[i] = normal(rng);
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
            const CMatrix q = (qr.householderQ() * Eigen::MatrixXd::Identity(p, p)).cast<Complex>();
            const CVector rotated = q * solve(a * q);
            const double amax = spectral_norm(a);
            const double denom = std::max(fit.coefficients.norm(), amax > 0.0 ? scale / amax : 0.0);
            fit.uniqueness_defect = denom > 0.0 ? (rotated - fit.coefficients).norm() / denom : 0.0;
        }
    }
    return fit;
}

/// ||B D f||_W, or 0 when D f vanishes to roundoff.
double derivative_reference(const BoundaryFunction& f, const CMatrix& band_d, double d_norm)
{
    const BoundaryFunction df(f.geometry(), band_d * f.values());
    const double n = weighted_norm(df);
    return n <= 1e-12 * d_norm * weighted_norm(f) ? 0.0 : n;
}

} // namespace

RankRule RankRule::spectral()
{
    return {};
}

RankRule RankRule::fem()
{
    RankRule r;
    r.threshold = 1e-3;
    r.gap_floor = 1e-5;
    r.pinv_threshold = 1e-6;
    r.range_tolerance = 1e-6;
    r.band_fraction = 1.0 / 16.0;
    return r;
}

RankRule RankRule::for_method(DnMethod method)
{
    return method == DnMethod::Spectral ? spectral() : fem();
}

RankDecision decide_rank(
    const Eigen::VectorXd& singular_values,
    double reference,
    int effective_count,
    const RankRule& rule)
{
    RankDecision d;
    const int n = std::min<int>(effective_count, static_cast<int>(singular_values.size()));
    const double cutoff = rule.threshold * reference;
    for (int i = 0; i < n; ++i) d.threshold_rank += singular_values[i] > cutoff ? 1 : 0;

    // Sequence (reference, s_1, ..., s_n); gap after position r means rank r.
    // Values below the noise level are clamped so that structure inside the
    // noise (roundoff tails, modes the discretisation reproduces exactly)
    // cannot produce a gap.
    double best = rule.gap_ratio;
    double prev = reference;
    const double floor = std::max({
        std::numeric_limits<double>::epsilon() * reference * static_cast<double>(singular_values.size()),
        rule.gap_floor * reference,
        std::numeric_limits<double>::min()});
    for (int i = 0; i < n; ++i) {
        const double cur = std::max(singular_values[i], floor);
        const double ratio = std::max(prev, floor) / cur;
        if (ratio > best) {
            best = ratio;
            d.gap_found = true;
            d.gap_rank = i;
            d.tolerance_used = std::sqrt(std::max(prev, floor) * cur);
        }
        prev = cur;
    }
    if (d.gap_found && d.gap_rank != d.threshold_rank) {
        std::ostringstream msg;
        msg << "gap rule gives rank " << d.gap_rank << " but threshold " << cutoff << " gives rank "
            << d.threshold_rank << "; singular values:";
        for (int i = 0; i < n; ++i) msg << ' ' << singular_values[i];
        fail(ErrorKind::AmbiguousRank, msg.str());
    }
    if (d.gap_found) {
        d.rank = d.gap_rank;
    } else {
        d.rank = d.threshold_rank;
        d.tolerance_used = cutoff;
    }
    return d;
}

DnPseudoInverse::DnPseudoInverse(const DNMap& dn, const RankRule& rule)
    : m_dn(&dn)
    , m_rule(rule)
{
    const auto& g = dn.geometry();
    const Eigen::VectorXd sw = sqrt_weights(g);
    const Svd s = svd(weighted(dn.op()), true);
    m_sigma_max = s.values.size() ? s.values[0] : 0.0;
    const double cut = rule.pinv_threshold * m_sigma_max;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        if (s.values[i] > cut) inv[i] = 1.0 / s.values[i];
    }
    const CMatrix pinv_w = s.v * inv.cast<Complex>().asDiagonal() * s.u.adjoint();
    m_pinv = sw.cwiseInverse().cast<Complex>().asDiagonal() * pinv_w * sw.cast<Complex>().asDiagonal();
}

BoundaryFunction DnPseudoInverse::solve(const BoundaryFunction& r) const
{
    require_same_geometry(m_dn->geometry(), r.geometry(), "dn_pseudo_solve");
    if (!in_subspace(r, SubspaceTag::ZeroGlobalMean, m_rule.range_tolerance)) {
        fail(ErrorKind::PreconditionViolation, "right side does not have zero global mean");
    }
    BoundaryFunction h(r.geometry(), m_pinv * r.values());
    const double rn = weighted_norm(r);
    if (rn > 0.0) {
        const double res = weighted_norm(m_dn->apply(h) - r) / rn;
        if (res > m_rule.range_tolerance) {
            std::ostringstream msg;
            msg << "right side is not in the range of the DN map (relative residual " << res << ")";
            fail(ErrorKind::NotInRange, msg.str());
        }
    }
    const Complex mean = global_weighted_mean(h) / r.geometry().total_length();
    return h - BoundaryFunction::constant(r.geometry(), mean);
}

BoundaryFunction dn_pseudo_solve(const DNMap& dn, const BoundaryFunction& r, const RankRule& rule)
{
    return DnPseudoInverse(dn, rule).solve(r);
}

BoundaryOperator neumann_range_operator(const DNMap& dn, const RankRule& rule)
{
    const auto& g = dn.geometry();
    const double kernel_tol = dn.provenance().method == DnMethod::Spectral ? 1e-10 : 1e-8;
    if (dn.diagnostics().kernel_defect > kernel_tol) {
        std::ostringstream msg;
        msg << "DN map does not annihilate constants (kernel defect " << dn.diagnostics().kernel_defect
            << "); derivatives are not in its range";
        fail(ErrorKind::NotInRange, msg.str());
    }
    const DnPseudoInverse pinv(dn, rule);
    const CMatrix d = derivative_operator(g).matrix();
    const CMatrix h = pinv.matrix() * d;
    // Every column D e_i must be reproduced by Lambda h_i.
    const Eigen::VectorXd sw = sqrt_weights(g);
    const CMatrix residual = sw.cast<Complex>().asDiagonal() * (dn.matrix() * h - d);
    const CMatrix dw = sw.cast<Complex>().asDiagonal() * d;
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
        const double dn_c = dw.col(c).norm();
        if (dn_c == 0.0) continue;
        const double res = residual.col(c).norm() / dn_c;
        if (res > rule.range_tolerance) {
            std::ostringstream msg;
            msg << "derivative column " << c << " is not in the range of the DN map (relative residual " << res << ")";
            fail(ErrorKind::NotInRange, msg.str());
        }
    }
    CMatrix t1 = dn.matrix() - d * h;
    return {g, std::move(t1), SubspaceTag::All, SubspaceTag::ZeroGlobalMean};
}

BoundaryOperator derivative_defect_operator(const DNMap& dn)
{
    const auto& g = dn.geometry();
    const BoundaryOperator d = derivative_operator(g);
    const BoundaryOperator x = compose(projection_operator(g), compose(dn.op(), antiderivative_operator(g)));
    const BoundaryOperator xxd = compose(x, compose(x, d));
    return add(d, scale(xxd, -1.0));
}

std::vector<int> band_limits(const BoundaryGeometry& geometry, const RankRule& rule)
{
    std::vector<int> band;
    if (!(rule.band_fraction > 0.0)) return band;
    // One bound for every circle, set by the coarsest one.
    int nyquist = geometry.samples(0) / 2;
    for (int j = 1; j < geometry.circle_count(); ++j) nyquist = std::min(nyquist, geometry.samples(j) / 2);
    const int k = std::clamp(static_cast<int>(std::floor(rule.band_fraction * nyquist)), 1, std::max(1, nyquist - 1));
    band.assign(static_cast<size_t>(geometry.circle_count()), k);
    return band;
}

TopologyReport recover_beta1(const BoundaryOperator& range_op, double reference, const RankRule& rule)
{
    const auto& g = range_op.geometry();
    TopologyReport report;
    report.circle_count = g.circle_count();
    report.band = band_limits(g, rule);
    const Eigen::VectorXd sw = sqrt_weights(g);
    const CMatrix m = sw.cast<Complex>().asDiagonal() * band_limited(range_op, report.band) *
                      sw.cwiseInverse().cast<Complex>().asDiagonal();
    const Svd s = svd(m, true);
    const double ref = std::max(reference, s.values.size() ? s.values[0] : 0.0);
    // Constants are an exact null direction of the operator.
    const int effective = band_dimension(g, report.band) - 1;
    const RankDecision d = decide_rank(s.values, ref, effective, rule);
    report.beta1 = d.rank;
    report.rank_tolerance_used = d.tolerance_used;
    const int keep = std::min<int>(effective, static_cast<int>(s.values.size()));
    report.singular_values.assign(s.values.data(), s.values.data() + keep);
    for (int i = 0; i < d.rank; ++i) {
        CVector v = sw.cwiseInverse().cast<Complex>().asDiagonal() * s.u.col(i);
        // Fix the phase so the largest entry is real positive.
        Eigen::Index at = 0;
        v.cwiseAbs().maxCoeff(&at);
        v *= std::conj(v[at]) / std::abs(v[at]);
        report.neumann_basis.emplace_back(g, std::move(v));
    }
    return report;
}

RankDecision t2_range_dim(const DNMap& dn, const RankRule& rule, std::vector<double>* singular_values)
{
    const auto& g = dn.geometry();
    const auto band = band_limits(g, rule);
    const BoundaryOperator t2 = derivative_defect_operator(dn);
    const Eigen::VectorXd sw = sqrt_weights(g);
    const CMatrix m = sw.cast<Complex>().asDiagonal() * band_limited(t2, band) *
                      sw.cwiseInverse().cast<Complex>().asDiagonal();
    const Svd s = svd(m, false);
    const double ref = std::max(spectral_norm(weighted(derivative_operator(g))), s.values.size() ? s.values[0] : 0.0);
    // Locally constant functions are exact null directions.
    const int effective = band_dimension(g, band) - g.circle_count();
    if (singular_values) {
        const int keep = std::min<int>(effective, static_cast<int>(s.values.size()));
        singular_values->assign(s.values.data(), s.values.data() + keep);
    }
    return decide_rank(s.values, ref, effective, rule);
}

TopologyReport analyze_topology(const DNMap& dn, const RankRule& rule)
{
    const BoundaryOperator t1 = neumann_range_operator(dn, rule);
    TopologyReport report = recover_beta1(t1, spectral_norm(weighted(dn.op())), rule);
    report.t2_range_dim = t2_range_dim(dn, rule, &report.t2_singular_values).rank;
    report.bound_holds = report.t2_range_dim <= report.beta1 + report.circle_count - 1;
    return report;
}

DerivativeDecomposition fit_derivative_decomposition(
    const DNMap& dn,
    const BoundaryFunction& f,
    const TopologyReport& report,
    const RankRule& rule,
    std::optional<unsigned> uniqueness_seed)
{
    const auto& g = dn.geometry();
    require_same_geometry(g, f.geometry(), "derivative decomposition");
    const auto band = band_limits(g, rule);
    const CMatrix b = band.empty() ? CMatrix::Identity(g.total_samples(), g.total_samples())
                                   : band_operator(g, band).matrix();
    const BoundaryOperator d = derivative_operator(g);
    const BoundaryOperator p = projection_operator(g);
    const BoundaryOperator y = compose(p, compose(dn.op(), compose(antiderivative_operator(g), p)));
    const BoundaryOperator lambda_c = compose(p, dn.op());

    const CVector lhs = b * derivative_defect_operator(dn).matrix() * b * f.values();
    const auto constants = balanced_constant_basis(g);
    const auto n_lambda = static_cast<Eigen::Index>(report.neumann_basis.size());
    const auto n_c = static_cast<Eigen::Index>(constants.size());
    CMatrix columns(g.total_samples(), n_lambda + n_c);
    for (Eigen::Index i = 0; i < n_lambda; ++i) {
        columns.col(i) = b * (y.matrix() * report.neumann_basis[static_cast<size_t>(i)].values());
    }
    for (Eigen::Index l = 0; l < n_c; ++l) {
        columns.col(n_lambda + l) = -(b * (lambda_c.matrix() * constants[static_cast<size_t>(l)].values()));
    }
    const double reference = derivative_reference(f, b * d.matrix() * b, spectral_norm(weighted(d)));
    DerivativeDecomposition out;
    out.lambda = BoundaryFunction::zeros(g);
    std::vector<Complex> c_values(static_cast<size_t>(g.circle_count()), Complex(0.0));
    if (reference == 0.0) {
        out.c = LocallyConstantFunction::make(g, c_values);
        out.lambda_coefficients.assign(static_cast<size_t>(n_lambda), Complex(0.0));
        out.uniqueness_defect = uniqueness_seed ? 0.0 : -1.0;
        return out;
    }
    const LinearFit fit = fit_columns(g, lhs, columns, reference, uniqueness_seed);
    out.residual = fit.residual;
    out.uniqueness_defect = fit.uniqueness_defect;
    for (Eigen::Index i = 0; i < n_lambda; ++i) {
        out.lambda_coefficients.push_back(fit.coefficients[i]);
        out.lambda += fit.coefficients[i] * report.neumann_basis[static_cast<size_t>(i)];
    }
    for (Eigen::Index l = 0; l < n_c; ++l) {
        for (int j = 0; j < g.circle_count(); ++j) {
            c_values[static_cast<size_t>(j)] += fit.coefficients[n_lambda + l] * constants[static_cast<size_t>(l)](j, 0);
        }
    }
    out.c = LocallyConstantFunction::make(g, c_values, 1e-10);
    return out;
}

DerivativeDecomposition fit_single_circle_identity(
    const DNMap& dn,
    const BoundaryFunction& f,
    const TopologyReport& report,
    const RankRule& rule)
{
    const auto& g = dn.geometry();
    if (g.circle_count() != 1) {
        fail(ErrorKind::PreconditionViolation, "single-circle identity needs exactly one boundary circle");
    }
    require_same_geometry(g, f.geometry(), "single-circle identity");
    const auto band = band_limits(g, rule);
    const CMatrix b = band.empty() ? CMatrix::Identity(g.total_samples(), g.total_samples())
                                   : band_operator(g, band).matrix();
    const BoundaryOperator d = derivative_operator(g);
    const BoundaryOperator ld = compose(dn.op(), antiderivative_operator(g));
    const CMatrix dm = d.matrix();
    const CMatrix x = ld.matrix();
    const CVector df = dm * (b * f.values());
    const CVector lhs = b * (df - x * (x * df));
    const auto n_lambda = static_cast<Eigen::Index>(report.neumann_basis.size());
    CMatrix columns(g.total_samples(), n_lambda);
    for (Eigen::Index i = 0; i < n_lambda; ++i) {
        columns.col(i) = b * (x * report.neumann_basis[static_cast<size_t>(i)].values());
    }
    const double reference = derivative_reference(f, b * dm * b, spectral_norm(weighted(d)));
    DerivativeDecomposition out;
    out.lambda = BoundaryFunction::zeros(g);
    out.c = LocallyConstantFunction::make(g, {Complex(0.0)});
    if (reference == 0.0) {
        out.lambda_coefficients.assign(static_cast<size_t>(n_lambda), Complex(0.0));
        return out;
    }
    const LinearFit fit = fit_columns(g, lhs, columns, reference, std::nullopt);
    out.residual = fit.residual;
    for (Eigen::Index i = 0; i < n_lambda; ++i) {
        out.lambda_coefficients.push_back(fit.coefficients[i]);
        out.lambda += fit.coefficients[i] * report.neumann_basis[static_cast<size_t>(i)];
    }
    return out;
}

} // namespace steklov
