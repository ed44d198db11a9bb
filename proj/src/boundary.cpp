#include <steklov/boundary.hpp>

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace steklov {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::PreconditionViolation: return "precondition_violation";
    case ErrorKind::GeometryMismatch: return "geometry_mismatch";
    case ErrorKind::TagMismatch: return "tag_mismatch";
    case ErrorKind::GeometryInfeasible: return "geometry_infeasible";
    case ErrorKind::DegenerateTriangle: return "degenerate_triangle";
    case ErrorKind::SingularSystem: return "singular_system";
    case ErrorKind::IllConditionedMass: return "ill_conditioned_mass";
    case ErrorKind::NotInRange: return "not_in_range";
    case ErrorKind::AmbiguousRank: return "ambiguous_rank";
    case ErrorKind::Io: return "io";
    case ErrorKind::Schema: return "schema";
    }
    return "unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Complex> to_std(const CVector& v)
{
    return {v.data(), v.data() + v.size()};
}

CVector fft_forward(const CVector& samples)
{
    Eigen::FFT<double> fft;
    std::vector<Complex> in = to_std(samples);
    std::vector<Complex> out;
    fft.fwd(out, in);
    CVector result(samples.size());
    const double n = static_cast<double>(samples.size());
    for (Eigen::Index k = 0; k < result.size(); ++k) {
        result[k] = out[static_cast<size_t>(k)] / n;
    }
    return result;
}

CVector fft_inverse(const CVector& coefficients)
{
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<Complex> in = to_std(coefficients);
    std::vector<Complex> out;
    fft.inv(out, in);
    return Eigen::Map<const CVector>(out.data(), static_cast<Eigen::Index>(out.size()));
}

} // namespace

// ---------------------------------------------------------------------------
// BoundaryGeometry

BoundaryGeometry::BoundaryGeometry(std::vector<CircleSpec> circles)
    : m_circles(std::move(circles))
{
    if (m_circles.empty()) {
        fail(ErrorKind::PreconditionViolation, "boundary geometry needs at least one circle");
    }
    m_offsets.reserve(m_circles.size() + 1);
    m_offsets.push_back(0);
    for (const auto& c : m_circles) {
        if (!(c.length > 0.0) || !std::isfinite(c.length)) {
            fail(ErrorKind::PreconditionViolation, "circle length must be positive");
        }
        if (c.samples < 8 || c.samples % 2 != 0) {
            fail(ErrorKind::PreconditionViolation,
                 "circle sample count must be even and at least 8, got " +
                     std::to_string(c.samples));
        }
        if (c.orientation != 1 && c.orientation != -1) {
            fail(ErrorKind::PreconditionViolation, "circle orientation must be +1 or -1");
        }
        m_offsets.push_back(m_offsets.back() + c.samples);
    }
}

double BoundaryGeometry::total_length() const
{
    double total = 0.0;
    for (const auto& c : m_circles) total += c.length;
    return total;
}

Eigen::VectorXd BoundaryGeometry::quadrature_weights() const
{
    Eigen::VectorXd w(total_samples());
    for (int j = 0; j < circle_count(); ++j) {
        w.segment(offset(j), samples(j)).setConstant(spacing(j));
    }
    return w;
}

bool BoundaryGeometry::matches(const BoundaryGeometry& other, double rel_tol) const
{
    if (circle_count() != other.circle_count()) return false;
    for (int j = 0; j < circle_count(); ++j) {
        const auto& a = circle(j);
        const auto& b = other.circle(j);
        if (a.samples != b.samples || a.orientation != b.orientation) return false;
        if (std::abs(a.length - b.length) > rel_tol * std::max(a.length, b.length)) return false;
    }
    return true;
}

void require_same_geometry(
    const BoundaryGeometry& a,
    const BoundaryGeometry& b,
    std::string_view context)
{
    if (!a.matches(b)) {
        fail(ErrorKind::GeometryMismatch, std::string(context) + ": boundary geometries differ");
    }
}

int wavenumber(int k, int n)
{
    return 2 * k <= n ? k : k - n;
}

// ---------------------------------------------------------------------------
// BoundaryFunction

BoundaryFunction::BoundaryFunction(BoundaryGeometry geometry, CVector values)
    : m_geometry(std::move(geometry))
    , m_values(std::move(values))
{
    if (m_values.size() != m_geometry.total_samples()) {
        fail(ErrorKind::GeometryMismatch, "sample vector length does not match geometry");
    }
}

BoundaryFunction BoundaryFunction::zeros(const BoundaryGeometry& geometry)
{
    return {geometry, CVector::Zero(geometry.total_samples())};
}

BoundaryFunction BoundaryFunction::constant(const BoundaryGeometry& geometry, Complex value)
{
    return {geometry, CVector::Constant(geometry.total_samples(), value)};
}

BoundaryFunction BoundaryFunction::locally_constant(
    const BoundaryGeometry& geometry,
    std::span<const Complex> values)
{
    if (static_cast<int>(values.size()) != geometry.circle_count()) {
        fail(ErrorKind::GeometryMismatch, "one constant per circle expected");
    }
    CVector v(geometry.total_samples());
    for (int j = 0; j < geometry.circle_count(); ++j) {
        v.segment(geometry.offset(j), geometry.samples(j)).setConstant(values[static_cast<size_t>(j)]);
    }
    return {geometry, std::move(v)};
}

BoundaryFunction BoundaryFunction::sample(
    const BoundaryGeometry& geometry,
    const std::function<Complex(int, double)>& fn)
{
    CVector v(geometry.total_samples());
    for (int j = 0; j < geometry.circle_count(); ++j) {
        for (int k = 0; k < geometry.samples(j); ++k) {
            v[geometry.offset(j) + k] = fn(j, geometry.arc_position(j, k));
        }
    }
    return {geometry, std::move(v)};
}

BoundaryFunction random_band_limited(const BoundaryGeometry& geometry, int max_mode, unsigned seed)
{
    if (max_mode < 1) fail(ErrorKind::PreconditionViolation, "probe needs max_mode >= 1");
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<std::vector<std::pair<double, double>>> coeffs(static_cast<size_t>(geometry.circle_count()));
    for (int j = 0; j < geometry.circle_count(); ++j) {
        if (2 * max_mode >= geometry.samples(j)) {
            fail(ErrorKind::PreconditionViolation, "probe mode reaches the Nyquist limit of circle " + std::to_string(j));
        }
        for (int k = 1; k <= max_mode; ++k) {
            const double a = normal(rng);
            coeffs[static_cast<size_t>(j)].emplace_back(a, normal(rng));
        }
    }
    return BoundaryFunction::sample(geometry, [&](int j, double s) {
        const double t = 2.0 * std::numbers::pi * s / geometry.length(j);
        double v = 0.0;
        for (int k = 1; k <= max_mode; ++k) {
            const auto& [a, b] = coeffs[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            v += a * std::cos(k * t) + b * std::sin(k * t);
        }
        return Complex(v, 0.0);
    });
}

BoundaryFunction BoundaryFunction::from_fourier(
    const BoundaryGeometry& geometry,
    const std::vector<CVector>& coefficients)
{
    if (static_cast<int>(coefficients.size()) != geometry.circle_count()) {
        fail(ErrorKind::GeometryMismatch, "one coefficient block per circle expected");
    }
    CVector v(geometry.total_samples());
    for (int j = 0; j < geometry.circle_count(); ++j) {
        const auto& c = coefficients[static_cast<size_t>(j)];
        if (c.size() != geometry.samples(j)) {
            fail(ErrorKind::GeometryMismatch, "coefficient block length does not match circle");
        }
        v.segment(geometry.offset(j), geometry.samples(j)) = fft_inverse(c);
    }
    return {geometry, std::move(v)};
}

CVector BoundaryFunction::circle_values(int j) const
{
    return m_values.segment(m_geometry.offset(j), m_geometry.samples(j));
}

CVector BoundaryFunction::fourier(int j) const
{
    return fft_forward(circle_values(j));
}

std::vector<CVector> BoundaryFunction::fourier() const
{
    std::vector<CVector> out;
    out.reserve(static_cast<size_t>(m_geometry.circle_count()));
    for (int j = 0; j < m_geometry.circle_count(); ++j) out.push_back(fourier(j));
    return out;
}

Complex BoundaryFunction::interpolate(int j, double s) const
{
    const CVector c = fourier(j);
    const int n = m_geometry.samples(j);
    const double t = s / m_geometry.length(j);
    Complex sum = 0.0;
    for (int k = 0; k < n; ++k) {
        if (is_nyquist(k, n)) continue;
        sum += c[k] * std::polar(1.0, kTwoPi * wavenumber(k, n) * t);
    }
    return sum;
}

BoundaryFunction BoundaryFunction::real() const
{
    return {m_geometry, m_values.real().cast<Complex>()};
}

BoundaryFunction BoundaryFunction::imag() const
{
    return {m_geometry, m_values.imag().cast<Complex>()};
}

BoundaryFunction BoundaryFunction::conj() const
{
    return {m_geometry, m_values.conjugate()};
}

double BoundaryFunction::max_abs() const
{
    return m_values.size() == 0 ? 0.0 : m_values.cwiseAbs().maxCoeff();
}

double BoundaryFunction::max_abs_imag() const
{
    return m_values.size() == 0 ? 0.0 : m_values.imag().cwiseAbs().maxCoeff();
}

BoundaryFunction& BoundaryFunction::operator+=(const BoundaryFunction& other)
{
    require_same_geometry(m_geometry, other.m_geometry, "function sum");
    m_values += other.m_values;
    return *this;
}

BoundaryFunction& BoundaryFunction::operator-=(const BoundaryFunction& other)
{
    require_same_geometry(m_geometry, other.m_geometry, "function difference");
    m_values -= other.m_values;
    return *this;
}

BoundaryFunction& BoundaryFunction::operator*=(Complex scale)
{
    m_values *= scale;
    return *this;
}

BoundaryFunction BoundaryFunction::times(const BoundaryFunction& other) const
{
    require_same_geometry(m_geometry, other.m_geometry, "pointwise product");
    return {m_geometry, m_values.cwiseProduct(other.m_values)};
}

// ---------------------------------------------------------------------------
// LocallyConstantFunction

LocallyConstantFunction LocallyConstantFunction::make(
    const BoundaryGeometry& geometry,
    std::vector<Complex> values,
    double tol)
{
    LocallyConstantFunction c{std::move(values), false};
    if (static_cast<int>(c.values.size()) != geometry.circle_count()) {
        fail(ErrorKind::GeometryMismatch, "one constant per circle expected");
    }
    c.balanced = c.balance_defect(geometry) <= tol;
    return c;
}

double LocallyConstantFunction::balance_defect(const BoundaryGeometry& geometry) const
{
    Complex sum = 0.0;
    double cmax = 0.0;
    for (int j = 0; j < geometry.circle_count(); ++j) {
        sum += values[static_cast<size_t>(j)] * geometry.length(j);
        cmax = std::max(cmax, std::abs(values[static_cast<size_t>(j)]));
    }
    if (cmax == 0.0) return 0.0;
    return std::abs(sum) / (cmax * geometry.total_length());
}

BoundaryFunction LocallyConstantFunction::to_function(const BoundaryGeometry& geometry) const
{
    return BoundaryFunction::locally_constant(geometry, values);
}

// ---------------------------------------------------------------------------
// Subspaces and quadrature

std::string_view to_string(SubspaceTag tag)
{
    switch (tag) {
    case SubspaceTag::All: return "All";
    case SubspaceTag::ZeroGlobalMean: return "ZeroGlobalMean";
    case SubspaceTag::ZeroCircleMeans: return "ZeroCircleMeans";
    case SubspaceTag::LocallyConstantBalanced: return "LocallyConstantBalanced";
    }
    return "All";
}

SubspaceTag subspace_tag_from_string(std::string_view name)
{
    for (auto tag : {SubspaceTag::All, SubspaceTag::ZeroGlobalMean, SubspaceTag::ZeroCircleMeans,
                     SubspaceTag::LocallyConstantBalanced}) {
        if (to_string(tag) == name) return tag;
    }
    fail(ErrorKind::Schema, "unknown subspace tag '" + std::string(name) + "'");
}

bool subspace_contains(SubspaceTag outer, SubspaceTag inner)
{
    if (outer == inner || outer == SubspaceTag::All) return true;
    if (outer == SubspaceTag::ZeroGlobalMean) {
        return inner == SubspaceTag::ZeroCircleMeans ||
               inner == SubspaceTag::LocallyConstantBalanced;
    }
    return false;
}

std::vector<Complex> circle_means(const BoundaryFunction& f)
{
    const auto& g = f.geometry();
    std::vector<Complex> means(static_cast<size_t>(g.circle_count()));
    for (int j = 0; j < g.circle_count(); ++j) {
        means[static_cast<size_t>(j)] =
            f.values().segment(g.offset(j), g.samples(j)).sum() / static_cast<double>(g.samples(j));
    }
    return means;
}

Complex global_weighted_mean(const BoundaryFunction& f)
{
    const auto& g = f.geometry();
    const auto means = circle_means(f);
    Complex total = 0.0;
    for (int j = 0; j < g.circle_count(); ++j) total += means[static_cast<size_t>(j)] * g.length(j);
    return total;
}

Complex l2_inner_product(const BoundaryFunction& f, const BoundaryFunction& g)
{
    require_same_geometry(f.geometry(), g.geometry(), "l2_inner_product");
    const Eigen::VectorXd w = f.geometry().quadrature_weights();
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) sum += w[i] * f.values()[i] * std::conj(g.values()[i]);
    return sum;
}

double l2_norm(const BoundaryFunction& f)
{
    return std::sqrt(std::max(0.0, l2_inner_product(f, f).real()));
}

double subspace_defect(const BoundaryFunction& f, SubspaceTag tag)
{
    const double scale = f.max_abs();
    if (scale == 0.0) return 0.0;
    const auto& g = f.geometry();
    switch (tag) {
    case SubspaceTag::All: return 0.0;
    case SubspaceTag::ZeroGlobalMean:
        return std::abs(global_weighted_mean(f)) / (scale * g.total_length());
    case SubspaceTag::ZeroCircleMeans: {
        double worst = 0.0;
        for (auto m : circle_means(f)) worst = std::max(worst, std::abs(m));
        return worst / scale;
    }
    case SubspaceTag::LocallyConstantBalanced: {
        const auto means = circle_means(f);
        double worst = 0.0;
        for (int j = 0; j < g.circle_count(); ++j) {
            const auto block = f.values().segment(g.offset(j), g.samples(j));
            const Complex m = means[static_cast<size_t>(j)];
            for (Eigen::Index k = 0; k < block.size(); ++k) {
                worst = std::max(worst, std::abs(block[k] - m));
            }
        }
        const double balance = LocallyConstantFunction{means, false}.balance_defect(g);
        return std::max(worst / scale, balance);
    }
    }
    return 0.0;
}

bool in_subspace(const BoundaryFunction& f, SubspaceTag tag, double tol)
{
    return subspace_defect(f, tag) <= tol;
}

// ---------------------------------------------------------------------------
// Fourier multipliers

BoundaryFunction apply_multiplier(
    const BoundaryFunction& f,
    const std::function<Complex(int, int)>& fn,
    bool drop_nyquist)
{
    const auto& g = f.geometry();
    std::vector<CVector> coeffs = f.fourier();
    for (int j = 0; j < g.circle_count(); ++j) {
        auto& c = coeffs[static_cast<size_t>(j)];
        const int n = g.samples(j);
        for (int k = 0; k < n; ++k) {
            if (drop_nyquist && is_nyquist(k, n)) {
                c[k] = 0.0;
            } else {
                c[k] *= fn(j, wavenumber(k, n));
            }
        }
    }
    return BoundaryFunction::from_fourier(g, coeffs);
}

namespace {

Complex derivative_symbol(const BoundaryGeometry& g, int j, int kappa)
{
    return kTwoPi * kappa / g.length(j);
}

Complex antiderivative_symbol(const BoundaryGeometry& g, int j, int kappa)
{
    return kappa == 0 ? Complex(0.0) : Complex(g.length(j) / (kTwoPi * kappa));
}

} // namespace

BoundaryFunction derivative_D(const BoundaryFunction& f)
{
    const auto& g = f.geometry();
    return apply_multiplier(f, [&](int j, int kappa) { return derivative_symbol(g, j, kappa); }, true);
}

BoundaryFunction antiderivative_Dinv(const BoundaryFunction& f, double tol)
{
    const double defect = subspace_defect(f, SubspaceTag::ZeroCircleMeans);
    if (defect > tol) {
        std::ostringstream msg;
        msg << "antiderivative requires zero circle means; relative mean " << defect
            << " exceeds " << tol;
        fail(ErrorKind::PreconditionViolation, msg.str());
    }
    const auto& g = f.geometry();
    return apply_multiplier(f, [&](int j, int kappa) { return antiderivative_symbol(g, j, kappa); }, true);
}

BoundaryFunction arc_derivative(const BoundaryFunction& f)
{
    return Complex(0.0, 1.0) * derivative_D(f);
}

BoundaryFunction arc_antiderivative(const BoundaryFunction& f, double tol)
{
    return Complex(0.0, -1.0) * antiderivative_Dinv(f, tol);
}

Projection project_P(const BoundaryFunction& h, double tol)
{
    const double defect = subspace_defect(h, SubspaceTag::ZeroGlobalMean);
    if (defect > tol) {
        std::ostringstream msg;
        msg << "projection requires zero global mean; relative mean " << defect << " exceeds " << tol;
        fail(ErrorKind::PreconditionViolation, msg.str());
    }
    const auto& g = h.geometry();
    auto means = circle_means(h);
    // Remove the admitted global-mean residue so that c is balanced to roundoff.
    const Complex shift = global_weighted_mean(h) / g.total_length();
    for (auto& c : means) c -= shift;
    BoundaryFunction projected = h - BoundaryFunction::locally_constant(g, means);
    auto constants = LocallyConstantFunction::make(g, std::move(means), std::max(tol, 1e-12));
    return {std::move(projected), std::move(constants)};
}

// ---------------------------------------------------------------------------
// BoundaryOperator

BoundaryOperator::BoundaryOperator(
    BoundaryGeometry geometry,
    CMatrix matrix,
    SubspaceTag domain,
    SubspaceTag range)
    : m_geometry(std::move(geometry))
    , m_matrix(std::move(matrix))
    , m_domain(domain)
    , m_range(range)
{
    const int n = m_geometry.total_samples();
    if (m_matrix.rows() != n || m_matrix.cols() != n) {
        fail(ErrorKind::GeometryMismatch, "operator matrix must be square of the total sample count");
    }
}

BoundaryFunction BoundaryOperator::apply(const BoundaryFunction& f) const
{
    require_same_geometry(m_geometry, f.geometry(), "operator apply");
    return {m_geometry, m_matrix * f.values()};
}

double BoundaryOperator::imaginary_ratio() const
{
    const double total = m_matrix.cwiseAbs().maxCoeff();
    if (total == 0.0) return 0.0;
    return m_matrix.imag().cwiseAbs().maxCoeff() / total;
}

CMatrix BoundaryOperator::weighted_matrix() const
{
    const Eigen::VectorXd sw = m_geometry.quadrature_weights().cwiseSqrt();
    return sw.asDiagonal() * m_matrix * sw.cwiseInverse().asDiagonal();
}

BoundaryOperator compose(const BoundaryOperator& left, const BoundaryOperator& right)
{
    require_same_geometry(left.geometry(), right.geometry(), "operator compose");
    if (right.range() != SubspaceTag::All && left.domain() != SubspaceTag::All &&
        !subspace_contains(left.domain(), right.range())) {
        fail(ErrorKind::TagMismatch,
             "cannot compose: range " + std::string(to_string(right.range())) +
                 " is not inside domain " + std::string(to_string(left.domain())));
    }
    return {left.geometry(), left.matrix() * right.matrix(), right.domain(), left.range()};
}

namespace {

SubspaceTag narrower(SubspaceTag a, SubspaceTag b)
{
    if (subspace_contains(a, b)) return b;
    if (subspace_contains(b, a)) return a;
    fail(ErrorKind::TagMismatch, "operator domains are not nested");
}

SubspaceTag wider(SubspaceTag a, SubspaceTag b)
{
    if (subspace_contains(a, b)) return a;
    if (subspace_contains(b, a)) return b;
    if (subspace_contains(SubspaceTag::ZeroGlobalMean, a) &&
        subspace_contains(SubspaceTag::ZeroGlobalMean, b)) {
        return SubspaceTag::ZeroGlobalMean;
    }
    return SubspaceTag::All;
}

} // namespace

BoundaryOperator add(const BoundaryOperator& a, const BoundaryOperator& b)
{
    require_same_geometry(a.geometry(), b.geometry(), "operator add");
    return {a.geometry(), a.matrix() + b.matrix(), narrower(a.domain(), b.domain()),
            wider(a.range(), b.range())};
}

BoundaryOperator scale(const BoundaryOperator& a, Complex s)
{
    return {a.geometry(), s * a.matrix(), a.domain(), a.range()};
}

BoundaryFunction apply(const BoundaryOperator& op, const BoundaryFunction& f)
{
    return op.apply(f);
}

BoundaryOperator identity_operator(const BoundaryGeometry& geometry)
{
    const int n = geometry.total_samples();
    return {geometry, CMatrix::Identity(n, n)};
}

BoundaryOperator multiplier_operator(
    const BoundaryGeometry& geometry,
    const std::function<Complex(int, int)>& fn,
    bool drop_nyquist,
    SubspaceTag domain,
    SubspaceTag range)
{
    const int total = geometry.total_samples();
    CMatrix m = CMatrix::Zero(total, total);
    for (int j = 0; j < geometry.circle_count(); ++j) {
        const int n = geometry.samples(j);
        // Circulant block: entry (k, l) depends on k - l only.
        CVector symbol(n);
        for (int k = 0; k < n; ++k) {
            symbol[k] = (drop_nyquist && is_nyquist(k, n)) ? Complex(0.0) : fn(j, wavenumber(k, n));
        }
        const CVector column = fft_inverse(symbol) / static_cast<double>(n);
        const int o = geometry.offset(j);
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                m(o + k, o + l) = column[(k - l + n) % n];
            }
        }
    }
    return {geometry, std::move(m), domain, range};
}

BoundaryOperator derivative_operator(const BoundaryGeometry& geometry)
{
    return multiplier_operator(
        geometry,
        [&](int j, int kappa) { return derivative_symbol(geometry, j, kappa); },
        true,
        SubspaceTag::All,
        SubspaceTag::ZeroCircleMeans);
}

BoundaryOperator antiderivative_operator(const BoundaryGeometry& geometry)
{
    return multiplier_operator(
        geometry,
        [&](int j, int kappa) { return antiderivative_symbol(geometry, j, kappa); },
        true,
        SubspaceTag::ZeroCircleMeans,
        SubspaceTag::ZeroCircleMeans);
}

BoundaryOperator projection_operator(const BoundaryGeometry& geometry)
{
    const int total = geometry.total_samples();
    CMatrix m = CMatrix::Identity(total, total);
    for (int j = 0; j < geometry.circle_count(); ++j) {
        const int n = geometry.samples(j);
        m.block(geometry.offset(j), geometry.offset(j), n, n).array() -= 1.0 / n;
    }
    return {geometry, std::move(m), SubspaceTag::ZeroGlobalMean, SubspaceTag::ZeroCircleMeans};
}

BoundaryOperator band_operator(const BoundaryGeometry& geometry, int max_mode)
{
    return multiplier_operator(
        geometry,
        [max_mode](int, int kappa) { return std::abs(kappa) <= max_mode ? 1.0 : 0.0; },
        true,
        SubspaceTag::All,
        SubspaceTag::All);
}

BoundaryOperator band_operator(const BoundaryGeometry& geometry, const std::vector<int>& max_modes)
{
    if (static_cast<int>(max_modes.size()) != geometry.circle_count()) {
        fail(ErrorKind::GeometryMismatch, "band limit needs one mode bound per circle");
    }
    return multiplier_operator(
        geometry,
        [&max_modes](int j, int kappa) {
            return std::abs(kappa) <= max_modes[static_cast<size_t>(j)] ? 1.0 : 0.0;
        },
        true,
        SubspaceTag::All,
        SubspaceTag::All);
}

} // namespace steklov
