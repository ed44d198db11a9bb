#pragma once

// Shared generators and oracles for the unit tests.

#include <steklov/dn_spectral.hpp>
#include <steklov/fem.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace steklov::testing {

inline constexpr double kPi = std::numbers::pi;

/// Hand-rolled generator for property tests.
class Gen
{
public:
    explicit Gen(unsigned seed)
        : m_rng(seed)
    {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(m_rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(m_rng); }
    double normal() { return std::normal_distribution<double>()(m_rng); }
    Complex complex_normal() { return {normal(), normal()}; }
    unsigned seed() { return static_cast<unsigned>(m_rng()); }

    /// 1 to 3 circles, lengths in [1, 10], even sample counts in [8, 64].
    BoundaryGeometry geometry(int max_circles = 3)
    {
        std::vector<CircleSpec> circles;
        const int m = integer(1, max_circles);
        for (int j = 0; j < m; ++j) {
            circles.push_back({uniform(1.0, 10.0), 2 * integer(4, 32), j == 0 ? 1 : -1});
        }
        return BoundaryGeometry(std::move(circles));
    }

    /// Complex trigonometric polynomial strictly below the Nyquist mode; the
    /// constant mode is kept unless `zero_means`.
    BoundaryFunction function(const BoundaryGeometry& g, bool zero_means = false)
    {
        std::vector<CVector> coefficients;
        for (int j = 0; j < g.circle_count(); ++j) {
            const int n = g.samples(j);
            CVector c = CVector::Zero(n);
            for (int k = 0; k < n; ++k) {
                if (is_nyquist(k, n) || (zero_means && k == 0)) continue;
                c[k] = complex_normal();
            }
            coefficients.push_back(std::move(c));
        }
        return BoundaryFunction::from_fourier(g, coefficients);
    }

    /// Zero total weighted mean: circle means adjusted by a multiple of 1/L_j on circle 0.
    BoundaryFunction zero_global_mean_function(const BoundaryGeometry& g)
    {
        BoundaryFunction f = function(g);
        const Complex total = global_weighted_mean(f);
        std::vector<Complex> shift(static_cast<size_t>(g.circle_count()), 0.0);
        shift[0] = total / g.length(0);
        return f - BoundaryFunction::locally_constant(g, shift);
    }

private:
    std::mt19937 m_rng;
};

/// Relative sup distance, with the scale floored at 1.
inline double sup_distance(const CVector& a, const CVector& b)
{
    const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline std::vector<Hole> two_holes()
{
    return {{Point(-0.4, 0.0), 0.2}, {Point(0.4, 0.0), 0.2}};
}

inline std::vector<Hole> three_holes()
{
    return {{Point(-0.45, 0.0), 0.18}, {Point(0.3, 0.35), 0.15}, {Point(0.3, -0.35), 0.15}};
}

/// FEM DN map with the unit factor on the metric grid of the mesh loops.
inline DNMap unit_fem_dn(const PlanarMesh& mesh, double h)
{
    const ConformalFactor one = ConformalFactor::constant(mesh, 1.0);
    FemOptions options;
    options.mesh_h = h;
    return compute_dn(mesh, one, metric_boundary_geometry(mesh, one), options);
}

} // namespace steklov::testing
