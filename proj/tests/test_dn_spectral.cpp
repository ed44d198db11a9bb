#include "support.hpp"

#include <doctest.h>

using namespace steklov;
using namespace steklov::testing;

namespace {

/// Neumann-from-Dirichlet 2x2 block from the radial basis, solved directly.
Eigen::Matrix2d radial_block_oracle(double r_in, double r_out, int n)
{
    Eigen::Matrix2d values;
    Eigen::Matrix2d fluxes; // outward normal derivative: -d/dr inside, +d/dr outside
    if (n == 0) {
        values << 1.0, std::log(r_in), 1.0, std::log(r_out);
        fluxes << 0.0, -1.0 / r_in, 0.0, 1.0 / r_out;
    } else {
        const double a = std::abs(n);
        values << std::pow(r_in, a), std::pow(r_in, -a), std::pow(r_out, a), std::pow(r_out, -a);
        fluxes << -a * std::pow(r_in, a - 1.0), a * std::pow(r_in, -a - 1.0), a * std::pow(r_out, a - 1.0),
            -a * std::pow(r_out, -a - 1.0);
    }
    return fluxes * values.inverse();
}

} // namespace

TEST_SUITE("dn_spectral")
{
    TEST_CASE("disk multipliers are |k| / R")
    {
        for (double radius : {1.0, 2.0}) {
            const DNMap dn = disk_dn(radius, disk_geometry(radius, 128));
            for (int k = -32; k <= 32; ++k) {
                const Complex mu = fourier_multiplier(dn, 0, k);
                const double expected = std::abs(k) / radius;
                CHECK(std::abs(mu - expected) <= 1e-12 * std::max(1.0, expected));
            }
        }
        const DNMap unit = disk_dn(1.0, disk_geometry(1.0, 64));
        CHECK(std::abs(fourier_multiplier(unit, 0, 0)) < 1e-13);
        CHECK(std::abs(fourier_multiplier(unit, 0, 3) - 3.0) < 1e-12);
        const DNMap two = disk_dn(2.0, disk_geometry(2.0, 64));
        CHECK(std::abs(fourier_multiplier(two, 0, 1) - 0.5) < 1e-12);
    }

    TEST_CASE("disk rejects a wrong circle length")
    {
        try {
            disk_dn(1.0, disk_geometry(1.01, 32));
            FAIL("length mismatch accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::GeometryMismatch);
        }
        CHECK_THROWS_AS(disk_dn(1.0, annulus_geometry(1.0, 2.0, 16, 16)), Error);
    }

    TEST_CASE("annulus blocks match the radial harmonic basis")
    {
        for (const auto& [r_in, r_out] : {std::pair{1.0, 2.0}, std::pair{0.5, 3.0}}) {
            for (int n = -6; n <= 6; ++n) {
                const Eigen::Matrix2d block = annulus_mode_block(r_in, r_out, n);
                const Eigen::Matrix2d oracle = radial_block_oracle(r_in, r_out, n);
                CHECK((block - oracle).norm() <= 1e-12 * std::max(1.0, oracle.norm()));
            }
        }
    }

    TEST_CASE("annulus log mode")
    {
        const double big_r = 2.0;
        const BoundaryGeometry g = annulus_geometry(1.0, big_r, 32, 48);
        const DNMap dn = annulus_dn(1.0, big_r, g);
        const std::vector<Complex> boundary = {0.0, 1.0};
        const BoundaryFunction flux = dn.apply(BoundaryFunction::locally_constant(g, boundary));
        const double inner = -1.0 / std::log(big_r);
        const double outer = 1.0 / (big_r * std::log(big_r));
        const std::vector<Complex> oracle = {inner, outer};
        CHECK(sup_distance(flux.values(), BoundaryFunction::locally_constant(g, oracle).values()) < 1e-12);
        CHECK(dn.apply(BoundaryFunction::constant(g, 1.0)).max_abs() < 1e-12);
    }

    TEST_CASE("annulus angular mode on the clockwise inner circle")
    {
        // u = r cos(theta) restricted to both circles; inner samples run clockwise.
        const double r_in = 1.0, r_out = 2.0;
        const BoundaryGeometry g = annulus_geometry(r_in, r_out, 64, 64);
        const DNMap dn = annulus_dn(r_in, r_out, g);
        const auto theta = [&](int j, double s) { return j == 0 ? -s / r_in : s / r_out; };
        const auto u = BoundaryFunction::sample(g, [&](int j, double s) {
            return Complex((j == 0 ? r_in : r_out) * std::cos(theta(j, s)), 0.0);
        });
        // Outward derivative of r cos(theta): -cos on the inner circle, +cos on the outer.
        const auto flux = BoundaryFunction::sample(g, [&](int j, double s) {
            return Complex((j == 0 ? -1.0 : 1.0) * std::cos(theta(j, s)), 0.0);
        });
        CHECK(sup_distance(dn.apply(u).values(), flux.values()) < 1e-12);
    }

    TEST_CASE("structural diagnostics")
    {
        const DNMap disk = disk_dn(1.0, disk_geometry(1.0, 64));
        const DNMap annulus = annulus_dn(1.0, 2.0, annulus_geometry(1.0, 2.0, 48, 64));
        for (const DNMap* dn : {&disk, &annulus}) {
            CHECK(diagnostics_within(dn->diagnostics(), spectral_dn_tolerances()));
            CHECK(dn->diagnostics().kernel_defect <= 1e-10);
            CHECK(dn->diagnostics().range_mean_defect <= 1e-10);
            CHECK(dn->diagnostics().symmetry_defect <= 1e-10);
            CHECK(dn->diagnostics().nonnegativity_defect <= 1e-10);
            CHECK(dn->provenance().method == DnMethod::Spectral);
        }
    }
}

TEST_SUITE("dn_spectral properties")
{
    TEST_CASE("disk identity (Lambda D^-1)^2 = 1 on zero circle means")
    {
        const BoundaryGeometry g = disk_geometry(1.0, 64);
        const DNMap dn = disk_dn(1.0, g);
        const BoundaryOperator l_dinv = compose(dn.op(), antiderivative_operator(g));
        const CMatrix square = l_dinv.matrix() * l_dinv.matrix();
        Gen gen(17);
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = gen.function(g, true);
            CHECK(sup_distance(square * f.values(), f.values()) < 1e-12);
        }
    }

    TEST_CASE("disk acts diagonally on random radii and band-limited data")
    {
        Gen gen(23);
        for (int trial = 0; trial < 15; ++trial) {
            const double radius = gen.uniform(0.3, 4.0);
            const int n = 2 * gen.integer(8, 40);
            const BoundaryGeometry g = disk_geometry(radius, n);
            const auto f = gen.function(g);
            const CVector c = f.fourier(0);
            std::vector<CVector> expected(1, CVector(n));
            for (int k = 0; k < n; ++k) expected[0][k] = c[k] * (std::abs(wavenumber(k, n)) / radius);
            const auto oracle = BoundaryFunction::from_fourier(g, expected);
            CHECK(sup_distance(disk_dn(radius, g).apply(f).values(), oracle.values()) < 1e-11);
        }
    }

    TEST_CASE("annulus is W-symmetric, nonnegative and kills constants for random radii")
    {
        Gen gen(29);
        for (int trial = 0; trial < 10; ++trial) {
            const double r_in = gen.uniform(0.2, 1.0);
            const double r_out = r_in * gen.uniform(1.3, 4.0);
            const BoundaryGeometry g = annulus_geometry(r_in, r_out, 2 * gen.integer(8, 24), 2 * gen.integer(8, 24));
            const DNMap dn = annulus_dn(r_in, r_out, g);
            CHECK(diagnostics_within(dn.diagnostics(), spectral_dn_tolerances()));
            for (int n = -4; n <= 4; ++n) {
                const Eigen::Matrix2d block = annulus_mode_block(r_in, r_out, n);
                const Eigen::Vector2d w(r_in, r_out);
                const Eigen::Matrix2d weighted = w.asDiagonal() * block;
                CHECK(std::abs(weighted(0, 1) - weighted(1, 0)) <= 1e-12 * weighted.norm());
                const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(weighted);
                CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * eig.eigenvalues().maxCoeff());
            }
        }
    }
}
