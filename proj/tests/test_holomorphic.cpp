#include "support.hpp"

#include <steklov/holomorphic.hpp>

#include <doctest.h>

using namespace steklov;
using namespace steklov::testing;

namespace {

using Pair = std::pair<BoundaryFunction, BoundaryFunction>;

/// Radius of every boundary circle of a domain centred at the origin.
struct Concentric
{
    std::vector<double> radii;
};

/// Real and imaginary traces of sum_k c_k z^k on concentric circles; the
/// angle follows the circle orientation and starts at theta = 0.
Pair laurent_traces(const BoundaryGeometry& g, const Concentric& domain, const std::map<int, Complex>& coefficients)
{
    const auto value = [&](int j, double s) {
        const double theta = g.circle(j).orientation * 2.0 * kPi * s / g.length(j);
        const Complex z = std::polar(domain.radii[static_cast<size_t>(j)], theta);
        Complex w = 0.0;
        for (const auto& [k, c] : coefficients) w += c * std::pow(z, k);
        return w;
    };
    return {BoundaryFunction::sample(g, [&](int j, double s) { return Complex(value(j, s).real(), 0.0); }),
            BoundaryFunction::sample(g, [&](int j, double s) { return Complex(value(j, s).imag(), 0.0); })};
}

/// sup |f - g| after removing the circle means of the difference.
double distance_mod_constants(const BoundaryFunction& f, const BoundaryFunction& g)
{
    const BoundaryFunction d = f - g;
    return (d - BoundaryFunction::locally_constant(f.geometry(), circle_means(d))).max_abs();
}

BoundaryFunction trig(const BoundaryGeometry& g, int k, bool sine, double sign = 1.0)
{
    return BoundaryFunction::sample(g, [&](int j, double s) {
        const double t = 2.0 * kPi * k * s / g.length(j);
        return Complex(sign * (sine ? std::sin(t) : std::cos(t)), 0.0);
    });
}

} // namespace

TEST_SUITE("holomorphic traces: spectral")
{
    TEST_CASE("disk conjugates cos ks to sin ks")
    {
        const BoundaryGeometry g = disk_geometry(1.0, 64);
        const DNMap dn = disk_dn(1.0, g);
        const double tol = membership_tolerance(DnMethod::Spectral);
        CHECK(tol == 1e-8);
        for (int k = 1; k <= 8; ++k) {
            const HoloTraceResult r = conjugate_trace(dn, trig(g, k, false), tol);
            CHECK(r.member);
            CHECK((r.b - trig(g, k, true)).max_abs() <= 1e-10);
            CHECK(std::abs(r.c.values[0]) <= 1e-12);
            CHECK(r.flux_residual <= 1e-10);
        }
    }

    TEST_CASE("circle means")
    {
        const BoundaryGeometry disk = disk_geometry(1.0, 32);
        for (double v : check_circle_means(disk_dn(1.0, disk), trig(disk, 1, false))) CHECK(std::abs(v) <= 1e-12);
        for (double v : check_circle_means(disk_dn(1.0, disk), BoundaryFunction::constant(disk, 3.0))) CHECK(v == 0.0);

        const double big_r = 2.0;
        const BoundaryGeometry g = annulus_geometry(1.0, big_r, 32, 32);
        const DNMap dn = annulus_dn(1.0, big_r, g);
        const std::vector<Complex> log_r = {0.0, std::log(big_r)};
        const std::vector<double> means = check_circle_means(dn, BoundaryFunction::locally_constant(g, log_r));
        CHECK(means[0] <= -0.1);
        CHECK(std::abs(means[0]) >= 0.1);
        CHECK(std::abs(means[1]) >= 0.1);
        const HoloTraceResult r = conjugate_trace(dn, BoundaryFunction::locally_constant(g, log_r), 1e-8);
        CHECK_FALSE(r.member);
    }

    TEST_CASE("constants")
    {
        const BoundaryGeometry g = annulus_geometry(1.0, 2.0, 32, 32);
        const DNMap dn = annulus_dn(1.0, 2.0, g);
        const HoloTraceResult r = conjugate_trace(dn, BoundaryFunction::constant(g, 1.5), 1e-8);
        CHECK(r.member);
        CHECK(r.b.max_abs() <= 1e-12);
        CHECK(membership(dn, BoundaryFunction::constant(g, 1.5), BoundaryFunction::constant(g, 0.3), 1e-8).member);
        // A non-constant locally constant b is the trace of a multiple of log r, not a conjugate.
        const std::vector<Complex> b_values = {0.3, -0.7};
        CHECK_FALSE(
            membership(dn, BoundaryFunction::constant(g, 1.5), BoundaryFunction::locally_constant(g, b_values), 1e-8)
                .member);
    }

    TEST_CASE("annulus z + 1/z")
    {
        const BoundaryGeometry g = annulus_geometry(1.0, 2.0, 64, 64);
        const DNMap dn = annulus_dn(1.0, 2.0, g);
        const auto [a, b] = laurent_traces(g, {{1.0, 2.0}}, {{1, 1.0}, {-1, 1.0}});
        const HoloTraceResult r = conjugate_trace(dn, a, 1e-8);
        CHECK(r.member);
        CHECK(distance_mod_constants(r.b, b) <= 1e-8);
        CHECK((r.b - b).max_abs() <= 1e-8);
        CHECK(r.c.balance_defect(g) <= 1e-12);
    }

    TEST_CASE("membership separates z from its conjugate")
    {
        const BoundaryGeometry g = disk_geometry(1.0, 64);
        const DNMap dn = disk_dn(1.0, g);
        const HoloTraceResult yes = membership(dn, trig(g, 1, false), trig(g, 1, true), 1e-8);
        CHECK(yes.member);
        CHECK(yes.dual_residual >= 0.0);
        CHECK(yes.dual_residual <= 1e-10);
        const HoloTraceResult no = membership(dn, trig(g, 1, false), trig(g, 1, true, -1.0), 1e-8);
        CHECK_FALSE(no.member);
        CHECK(no.worst_residual() >= 0.5);
    }

    TEST_CASE("boundary Cauchy-Riemann residuals")
    {
        const BoundaryGeometry g = disk_geometry(1.0, 64);
        const DNMap dn = disk_dn(1.0, g);
        const BoundaryCrResidual good = cr_boundary_check(dn, trig(g, 1, false), trig(g, 1, true));
        CHECK(good.tangential <= 1e-12);
        CHECK(good.normal <= 1e-12);
        const BoundaryCrResidual bad = cr_boundary_check(dn, trig(g, 1, false), trig(g, 1, true, -1.0));
        CHECK(bad.tangential >= 1.0);
        const BoundaryCrResidual flat =
            cr_boundary_check(dn, BoundaryFunction::constant(g, 1.0), BoundaryFunction::constant(g, 2.0));
        CHECK(flat.tangential == 0.0);
        CHECK(flat.normal == 0.0);
    }

    TEST_CASE("algebra closure")
    {
        const BoundaryGeometry g = disk_geometry(1.0, 64);
        const DNMap dn = disk_dn(1.0, g);
        const Pair z = {trig(g, 1, false), trig(g, 1, true)};
        const std::vector<Pair> square = {z, z};
        const HoloTraceResult r = algebra_closure_check(dn, square, 1e-8);
        CHECK(r.member);
        CHECK((r.a - trig(g, 2, false)).max_abs() <= 1e-12);
        CHECK((r.b - trig(g, 2, true)).max_abs() <= 1e-10);

        const Pair one = {BoundaryFunction::constant(g, 1.0), BoundaryFunction::constant(g, 0.0)};
        const std::vector<Pair> with_unit = {z, one};
        CHECK(algebra_closure_check(dn, with_unit, 1e-8).member);

        const Pair anti = {trig(g, 1, false), trig(g, 1, true, -1.0)};
        const std::vector<Pair> bad = {z, anti};
        try {
            algebra_closure_check(dn, bad, 1e-8);
            FAIL("non-member factor accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::PreconditionViolation);
        }

        const BoundaryGeometry ag = annulus_geometry(1.0, 2.0, 64, 64);
        const DNMap adn = annulus_dn(1.0, 2.0, ag);
        const std::vector<Pair> inverse_pair = {laurent_traces(ag, {{1.0, 2.0}}, {{1, 1.0}}),
                                                laurent_traces(ag, {{1.0, 2.0}}, {{-1, 1.0}})};
        const HoloTraceResult product = algebra_closure_check(adn, inverse_pair, 1e-8);
        CHECK(product.member);
        CHECK((product.a - BoundaryFunction::constant(ag, 1.0)).max_abs() <= 1e-12);
    }
}

TEST_SUITE("holomorphic traces: properties")
{
    TEST_CASE("random Laurent polynomials on annuli pass with exact conjugates")
    {
        Gen gen(51);
        for (int trial = 0; trial < 12; ++trial) {
            const double r_in = gen.uniform(0.4, 1.0);
            const double r_out = r_in * gen.uniform(1.5, 2.5);
            const BoundaryGeometry g = annulus_geometry(r_in, r_out, 64, 64);
            const DNMap dn = annulus_dn(r_in, r_out, g);
            std::map<int, Complex> coefficients;
            for (int k = -4; k <= 4; ++k) {
                if (k != 0) coefficients[k] = gen.complex_normal() * std::pow(r_out / r_in, -std::abs(k) / 2.0);
            }
            const auto [a, b] = laurent_traces(g, {{r_in, r_out}}, coefficients);
            const HoloTraceResult r = conjugate_trace(dn, a, 1e-8);
            CHECK(r.member);
            const double scale = std::max(1.0, b.max_abs());
            CHECK(distance_mod_constants(r.b, b) <= 1e-8 * scale);

            // Boundary CR residuals stay within 10x the fit residual (floored at roundoff).
            const BoundaryCrResidual cr = cr_boundary_check(dn, a, r.b);
            const double floor = 1e-12;
            CHECK(cr.normal <= 10.0 * std::max(r.flux_residual, floor));

            // Duality: the pipeline on b gives -a up to constants.
            CHECK(dual_recovery_error(dn, a, r.b, 1e-8) <= 10.0 * std::max(r.worst_residual(), floor));
        }
    }

    TEST_CASE("conjugation is linear up to locally constant functions")
    {
        Gen gen(53);
        const BoundaryGeometry g = annulus_geometry(1.0, 2.0, 48, 64);
        const DNMap dn = annulus_dn(1.0, 2.0, g);
        for (int trial = 0; trial < 10; ++trial) {
            std::map<int, Complex> c1, c2;
            for (int k : {-2, -1, 1, 2, 3}) {
                c1[k] = gen.complex_normal() * 0.3;
                c2[k] = gen.complex_normal() * 0.3;
            }
            const BoundaryFunction a1 = laurent_traces(g, {{1.0, 2.0}}, c1).first;
            const BoundaryFunction a2 = laurent_traces(g, {{1.0, 2.0}}, c2).first;
            const double alpha = gen.normal(), beta = gen.normal();
            const BoundaryFunction b1 = conjugate_trace(dn, a1, 1e-8).b;
            const BoundaryFunction b2 = conjugate_trace(dn, a2, 1e-8).b;
            const BoundaryFunction b12 = conjugate_trace(dn, a1 * alpha + a2 * beta, 1e-8).b;
            CHECK(distance_mod_constants(b12, b1 * alpha + b2 * beta) <= 1e-8 * std::max(1.0, b12.max_abs()));
        }
    }

    TEST_CASE("products of random disk traces pass")
    {
        Gen gen(57);
        const BoundaryGeometry g = disk_geometry(1.0, 64);
        const DNMap dn = disk_dn(1.0, g);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Pair> factors;
            const int count = gen.integer(2, 3);
            for (int f = 0; f < count; ++f) {
                std::map<int, Complex> c;
                for (int k = 0; k <= 3; ++k) c[k] = gen.complex_normal();
                factors.push_back(laurent_traces(g, {{1.0}}, c));
            }
            double input = 0.0;
            for (const Pair& p : factors) input = std::max(input, membership(dn, p.first, p.second, 1e-8).worst_residual());
            const HoloTraceResult r = algebra_closure_check(dn, factors, 1e-8);
            CHECK(r.member);
            CHECK(r.worst_residual() <= 10.0 * std::max(input, 1e-12));
        }
    }
}

TEST_SUITE("holomorphic traces: FEM")
{
    TEST_CASE("disk conjugates and interior residuals")
    {
        const double h = 0.04;
        const PlanarMesh mesh = generate_disk_mesh(1.0, h);
        const DNMap dn = unit_fem_dn(mesh, h);
        const double tol = membership_tolerance(DnMethod::Fem, calibrate_fem_tolerance(h));
        CHECK(tol == doctest::Approx(50.0 * calibrate_fem_tolerance(h)));
        const BoundaryGeometry& g = dn.geometry();
        const ConformalFactor one = ConformalFactor::constant(mesh, 1.0);
        for (int k = 1; k <= 3; ++k) {
            const HoloTraceResult r = conjugate_trace(dn, trig(g, k, false), tol);
            CHECK(r.member);
            CHECK((r.b - trig(g, k, true)).max_abs() <= 0.02);
        }
        CHECK(interior_cr_residual(mesh, one, trig(g, 1, false), trig(g, 1, true)) <= 1e-10);
        CHECK(interior_cr_residual(mesh, one, trig(g, 1, false), trig(g, 1, true, -1.0)) >= 0.5);
        CHECK(interior_cr_residual(mesh, one, BoundaryFunction::constant(g, 1.0), BoundaryFunction::constant(g, 2.0)) ==
              0.0);
        CHECK(interior_cr_residual(mesh, one, trig(g, 2, false), trig(g, 2, true)) <= calibrate_fem_tolerance(h));
    }

    TEST_CASE("FEM annulus log mode fails the mean test")
    {
        const double h = 0.04;
        const PlanarMesh mesh = generate_annulus_mesh(1.0, 2.0, h);
        const DNMap dn = unit_fem_dn(mesh, h);
        const std::vector<Complex> values = {std::log(2.0), 0.0};
        const HoloTraceResult r =
            conjugate_trace(dn, BoundaryFunction::locally_constant(dn.geometry(), values), membership_tolerance(DnMethod::Fem, calibrate_fem_tolerance(h)));
        CHECK_FALSE(r.member);
        double worst = 0.0;
        for (double v : r.circle_mean_residuals) worst = std::max(worst, std::abs(v));
        CHECK(worst >= 0.1);
    }
}
