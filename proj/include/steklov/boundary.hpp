#pragma once

// Discrete function space on a union of boundary circles, sampled uniformly in
// arc length, together with the operators D = -i d/ds, its zero-mean inverse,
// and the projection that strips locally constant parts.

#include <steklov/error.hpp>

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace steklov {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Default relative tolerance for subspace membership tests.
inline constexpr double kSubspaceTolerance = 1e-8;

struct CircleSpec
{
    double length = 0.0;
    int samples = 0;
    /// +1 when the arc-length parameter runs counterclockwise in the plane,
    /// -1 when it runs clockwise (hole boundaries of a planar domain).
    int orientation = 1;
};

class BoundaryGeometry
{
public:
    BoundaryGeometry() = default;
    explicit BoundaryGeometry(std::vector<CircleSpec> circles);

    const std::vector<CircleSpec>& circles() const { return m_circles; }
    const CircleSpec& circle(int j) const { return m_circles[static_cast<size_t>(j)]; }
    int circle_count() const { return static_cast<int>(m_circles.size()); }
    int samples(int j) const { return circle(j).samples; }
    double length(int j) const { return circle(j).length; }
    int offset(int j) const { return m_offsets[static_cast<size_t>(j)]; }
    int total_samples() const { return m_offsets.empty() ? 0 : m_offsets.back(); }
    double total_length() const;
    double spacing(int j) const { return length(j) / samples(j); }
    double arc_position(int j, int k) const { return k * spacing(j); }

    /// Trapezoid weights L_j / N_j for every stacked sample.
    Eigen::VectorXd quadrature_weights() const;

    /// Same circle count, sample counts and orientations, lengths equal to
    /// `rel_tol` relative.
    bool matches(const BoundaryGeometry& other, double rel_tol = 1e-12) const;

private:
    std::vector<CircleSpec> m_circles;
    std::vector<int> m_offsets; // size m + 1
};

void require_same_geometry(
    const BoundaryGeometry& a,
    const BoundaryGeometry& b,
    std::string_view context);

/// Signed wavenumber of FFT index `k` on a grid of `n` samples. The Nyquist
/// index n/2 maps to +n/2.
int wavenumber(int k, int n);
inline bool is_nyquist(int k, int n) { return 2 * k == n; }

class BoundaryFunction
{
public:
    BoundaryFunction() = default;
    BoundaryFunction(BoundaryGeometry geometry, CVector values);

    static BoundaryFunction zeros(const BoundaryGeometry& geometry);
    static BoundaryFunction constant(const BoundaryGeometry& geometry, Complex value);
    static BoundaryFunction locally_constant(
        const BoundaryGeometry& geometry,
        std::span<const Complex> values);
    /// Samples fn(circle, s) at s = k L_j / N_j.
    static BoundaryFunction sample(
        const BoundaryGeometry& geometry,
        const std::function<Complex(int, double)>& fn);
    /// Inverse of fourier(): per-circle coefficients in FFT index order.
    static BoundaryFunction from_fourier(
        const BoundaryGeometry& geometry,
        const std::vector<CVector>& coefficients);

    const BoundaryGeometry& geometry() const { return m_geometry; }
    const CVector& values() const { return m_values; }
    CVector circle_values(int j) const;
    Complex operator()(int j, int k) const { return m_values[m_geometry.offset(j) + k]; }

    /// Per-circle discrete Fourier coefficients c_k = (1/N) sum_n f_n e^{-2 pi i k n / N}.
    CVector fourier(int j) const;
    std::vector<CVector> fourier() const;

    /// Band-limited trigonometric interpolant on circle j evaluated at arc
    /// length s. The Nyquist mode is excluded.
    Complex interpolate(int j, double s) const;

    BoundaryFunction real() const;
    BoundaryFunction imag() const;
    BoundaryFunction conj() const;
    double max_abs() const;
    double max_abs_imag() const;

    BoundaryFunction& operator+=(const BoundaryFunction& other);
    BoundaryFunction& operator-=(const BoundaryFunction& other);
    BoundaryFunction& operator*=(Complex scale);

    friend BoundaryFunction operator+(BoundaryFunction a, const BoundaryFunction& b) { return a += b; }
    friend BoundaryFunction operator-(BoundaryFunction a, const BoundaryFunction& b) { return a -= b; }
    friend BoundaryFunction operator*(Complex s, BoundaryFunction a) { return a *= s; }
    friend BoundaryFunction operator*(BoundaryFunction a, Complex s) { return a *= s; }
    friend BoundaryFunction operator-(BoundaryFunction a) { return a *= -1.0; }

    /// Pointwise product (a1 + i b1)(a2 + i b2).
    BoundaryFunction times(const BoundaryFunction& other) const;

private:
    BoundaryGeometry m_geometry;
    CVector m_values;
};

struct LocallyConstantFunction
{
    std::vector<Complex> values;
    bool balanced = false;

    /// Sets `balanced` from the lengths of `geometry`.
    static LocallyConstantFunction make(
        const BoundaryGeometry& geometry,
        std::vector<Complex> values,
        double tol = 1e-12);

    /// |sum_j c_j L_j| relative to max_j |c_j| * sum_j L_j.
    double balance_defect(const BoundaryGeometry& geometry) const;
    BoundaryFunction to_function(const BoundaryGeometry& geometry) const;
};

enum class SubspaceTag {
    All,
    ZeroGlobalMean,
    ZeroCircleMeans,
    LocallyConstantBalanced,
};

std::string_view to_string(SubspaceTag tag);
SubspaceTag subspace_tag_from_string(std::string_view name);
/// True when every function in `inner` also lies in `outer`.
bool subspace_contains(SubspaceTag outer, SubspaceTag inner);

/// Real trigonometric polynomial with modes 1..max_mode on every circle and
/// standard normal cosine and sine coefficients drawn from `seed`.
BoundaryFunction random_band_limited(const BoundaryGeometry& geometry, int max_mode, unsigned seed);

std::vector<Complex> circle_means(const BoundaryFunction& f);
/// Integral of f over the whole boundary, sum_j mean_j L_j.
Complex global_weighted_mean(const BoundaryFunction& f);
Complex l2_inner_product(const BoundaryFunction& f, const BoundaryFunction& g);
double l2_norm(const BoundaryFunction& f);

/// Relative distance of f from the tagged subspace (0 means exact membership).
double subspace_defect(const BoundaryFunction& f, SubspaceTag tag);
bool in_subspace(const BoundaryFunction& f, SubspaceTag tag, double tol = kSubspaceTolerance);

/// D = -i d/ds as the Fourier multiplier 2 pi k / L_j; the Nyquist mode is dropped.
BoundaryFunction derivative_D(const BoundaryFunction& f);
/// Zero-circle-mean antiderivative, multiplier L_j / (2 pi k). Throws
/// PreconditionViolation if a circle mean exceeds tol * max|f|.
BoundaryFunction antiderivative_Dinv(const BoundaryFunction& f, double tol = kSubspaceTolerance);
/// Real-valued wrappers: d/ds = iD and its zero-mean inverse -i D^{-1}.
BoundaryFunction arc_derivative(const BoundaryFunction& f);
BoundaryFunction arc_antiderivative(const BoundaryFunction& f, double tol = kSubspaceTolerance);

struct Projection
{
    BoundaryFunction projected;
    LocallyConstantFunction constants;
};

/// Splits a zero-global-mean function into its zero-circle-mean part and a
/// balanced locally constant remainder.
Projection project_P(const BoundaryFunction& h, double tol = kSubspaceTolerance);

/// Applies the per-circle Fourier multiplier fn(circle, wavenumber). The
/// Nyquist coefficient is passed through fn with wavenumber n/2 unless
/// `drop_nyquist` is set.
BoundaryFunction apply_multiplier(
    const BoundaryFunction& f,
    const std::function<Complex(int, int)>& fn,
    bool drop_nyquist);

class BoundaryOperator
{
public:
    BoundaryOperator() = default;
    BoundaryOperator(
        BoundaryGeometry geometry,
        CMatrix matrix,
        SubspaceTag domain = SubspaceTag::All,
        SubspaceTag range = SubspaceTag::All);

    const BoundaryGeometry& geometry() const { return m_geometry; }
    const CMatrix& matrix() const { return m_matrix; }
    SubspaceTag domain() const { return m_domain; }
    SubspaceTag range() const { return m_range; }
    int dimension() const { return static_cast<int>(m_matrix.rows()); }

    BoundaryFunction apply(const BoundaryFunction& f) const;
    /// Largest imaginary entry relative to the largest entry.
    double imaginary_ratio() const;
    /// W^{1/2} A W^{-1/2}, the matrix of the operator in L2-orthonormal coordinates.
    CMatrix weighted_matrix() const;

private:
    BoundaryGeometry m_geometry;
    CMatrix m_matrix;
    SubspaceTag m_domain = SubspaceTag::All;
    SubspaceTag m_range = SubspaceTag::All;
};

/// left * right. Requires right.range() to lie in left.domain() (All is
/// compatible with everything).
BoundaryOperator compose(const BoundaryOperator& left, const BoundaryOperator& right);
BoundaryOperator add(const BoundaryOperator& a, const BoundaryOperator& b);
BoundaryOperator scale(const BoundaryOperator& a, Complex s);
BoundaryFunction apply(const BoundaryOperator& op, const BoundaryFunction& f);

BoundaryOperator identity_operator(const BoundaryGeometry& geometry);
BoundaryOperator multiplier_operator(
    const BoundaryGeometry& geometry,
    const std::function<Complex(int, int)>& fn,
    bool drop_nyquist,
    SubspaceTag domain,
    SubspaceTag range);
BoundaryOperator derivative_operator(const BoundaryGeometry& geometry);
BoundaryOperator antiderivative_operator(const BoundaryGeometry& geometry);
/// I minus the per-circle mean, the matrix of P on zero-global-mean functions.
BoundaryOperator projection_operator(const BoundaryGeometry& geometry);
/// Orthogonal projector onto modes |k| <= max_mode on every circle.
BoundaryOperator band_operator(const BoundaryGeometry& geometry, int max_mode);
/// Same with a separate bound for every circle.
BoundaryOperator band_operator(const BoundaryGeometry& geometry, const std::vector<int>& max_modes);

} // namespace steklov
