#include <steklov/dn_spectral.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace steklov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_length(const BoundaryGeometry& g, int j, double radius, std::string_view what)
{
    const double expected = kTwoPi * radius;
    if (std::abs(g.length(j) - expected) > 1e-10 * expected) {
        std::ostringstream msg;
        msg << what << ": circle " << j << " has length " << g.length(j) << ", expected " << expected;
        fail(ErrorKind::GeometryMismatch, msg.str());
    }
}

std::string describe(std::string_view name, std::initializer_list<double> params)
{
    std::ostringstream out;
    out << name << '(';
    bool first = true;
    for (double p : params) {
        if (!first) out << ',';
        out << p;
        first = false;
    }
    out << ')';
    return out.str();
}

} // namespace

BoundaryGeometry disk_geometry(double radius, int samples)
{
    return BoundaryGeometry({CircleSpec{kTwoPi * radius, samples, 1}});
}

BoundaryGeometry annulus_geometry(double r_in, double r_out, int inner_samples, int outer_samples)
{
    return BoundaryGeometry({CircleSpec{kTwoPi * r_in, inner_samples, -1},
                             CircleSpec{kTwoPi * r_out, outer_samples, 1}});
}

DNMap disk_dn(double radius, const BoundaryGeometry& geometry)
{
    if (!(radius > 0.0)) fail(ErrorKind::PreconditionViolation, "disk radius must be positive");
    if (geometry.circle_count() != 1) {
        fail(ErrorKind::GeometryMismatch, "disk DN map needs exactly one boundary circle");
    }
    require_length(geometry, 0, radius, "disk_dn");
    auto op = multiplier_operator(
        geometry,
        [radius](int, int kappa) { return Complex(std::abs(kappa) / radius); },
        true,
        SubspaceTag::All,
        SubspaceTag::ZeroGlobalMean);
    // Even real symbol, so the circulant is real up to roundoff.
    BoundaryOperator real_op(
        geometry, op.matrix().real().cast<Complex>(), op.domain(), op.range());
    Provenance prov{DnMethod::Spectral, describe("disk", {radius}), geometry.samples(0), 0.0};
    return {std::move(real_op), std::move(prov)};
}

Eigen::Matrix2d annulus_mode_block(double r_in, double r_out, int n)
{
    Eigen::Matrix2d block;
    if (n == 0) {
        const double ell = std::log(r_out / r_in);
        block << 1.0 / (r_in * ell), -1.0 / (r_in * ell),
                 -1.0 / (r_out * ell), 1.0 / (r_out * ell);
        return block;
    }
    const double a = std::abs(n);
    // q = (r_in / r_out)^|n| underflows gracefully for large |n|.
    const double q = std::exp(a * std::log(r_in / r_out));
    const double d = 1.0 - q * q;
    block << (1.0 + q * q) / r_in, -2.0 * q / r_in,
             -2.0 * q / r_out, (1.0 + q * q) / r_out;
    return (a / d) * block;
}

DNMap annulus_dn(double r_in, double r_out, const BoundaryGeometry& geometry)
{
    if (!(r_in > 0.0) || !(r_out > r_in)) {
        fail(ErrorKind::PreconditionViolation, "annulus needs 0 < r_in < r_out");
    }
    if (geometry.circle_count() != 2) {
        fail(ErrorKind::GeometryMismatch, "annulus DN map needs exactly two boundary circles");
    }
    require_length(geometry, 0, r_in, "annulus_dn");
    require_length(geometry, 1, r_out, "annulus_dn");

    // Angle of sample k on circle j; the inner circle is traversed clockwise.
    const auto angle = [&](int j, int k) {
        const double sign = j == 0 ? -1.0 : 1.0;
        return sign * kTwoPi * k / geometry.samples(j);
    };
    const auto representable = [&](int j, int n) { return 2 * std::abs(n) < geometry.samples(j); };

    const int total = geometry.total_samples();
    CMatrix m = CMatrix::Zero(total, total);
    const int n_max = std::max(geometry.samples(0), geometry.samples(1)) / 2;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            std::vector<int> modes;
            for (int n = -n_max; n <= n_max; ++n) {
                if (representable(i, n) && representable(j, n)) modes.push_back(n);
            }
            const int ni = geometry.samples(i);
            const int nj = geometry.samples(j);
            const auto count = static_cast<Eigen::Index>(modes.size());
            CMatrix out_basis(ni, count);
            CMatrix in_basis(nj, count);
            CVector symbol(count);
            for (Eigen::Index c = 0; c < count; ++c) {
                const int n = modes[static_cast<size_t>(c)];
                for (int k = 0; k < ni; ++k) out_basis(k, c) = std::polar(1.0, n * angle(i, k));
                for (int l = 0; l < nj; ++l) in_basis(l, c) = std::polar(1.0, n * angle(j, l));
                symbol[c] = annulus_mode_block(r_in, r_out, n)(i, j) / static_cast<double>(nj);
            }
            m.block(geometry.offset(i), geometry.offset(j), ni, nj) =
                out_basis * symbol.asDiagonal() * in_basis.adjoint();
        }
    }
    // The exact map is real; drop roundoff in the imaginary part.
    m = m.real().cast<Complex>();
    BoundaryOperator op(geometry, std::move(m), SubspaceTag::All, SubspaceTag::ZeroGlobalMean);
    Provenance prov{DnMethod::Spectral, describe("annulus", {r_in, r_out}),
                    std::max(geometry.samples(0), geometry.samples(1)), 0.0};
    return {std::move(op), std::move(prov)};
}

} // namespace steklov
