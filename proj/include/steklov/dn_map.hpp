#pragma once

#include <steklov/boundary.hpp>

#include <string>

namespace steklov {

enum class DnMethod { Spectral, Fem };

std::string_view to_string(DnMethod method);
DnMethod dn_method_from_string(std::string_view name);

struct Provenance
{
    DnMethod method = DnMethod::Spectral;
    /// Free-form description of the domain, e.g. "disk(R=1)".
    std::string domain;
    /// Grid samples per circle (spectral) or the largest sample count (fem).
    int modes = 0;
    /// Target mesh size for FEM maps, 0 for spectral ones.
    double mesh_h = 0.0;
};

struct DnDiagnostics
{
    /// ||Lambda 1||_inf / ||Lambda||_inf.
    double kernel_defect = 0.0;
    /// max over unit sample probes of |int Lambda f ds| / (||Lambda f||_inf |Gamma|).
    double range_mean_defect = 0.0;
    /// ||W Lambda - (W Lambda)^T||_F / ||W Lambda||_F.
    double symmetry_defect = 0.0;
    /// max(0, -lambda_min) / lambda_max of the symmetrised weighted matrix.
    double nonnegativity_defect = 0.0;
    /// Largest imaginary entry relative to the largest entry.
    double imaginary_defect = 0.0;
};

struct DnTolerances
{
    double kernel = 1e-10;
    double range_mean = 1e-10;
    double symmetry = 1e-10;
    double nonnegativity = 1e-10;
};

DnTolerances spectral_dn_tolerances();
/// Tolerances for a FEM map whose calibrated multiplier error is `fem_tolerance`.
DnTolerances fem_dn_tolerances(double fem_tolerance);

/// A Dirichlet-to-Neumann matrix on stacked boundary samples.
class DNMap
{
public:
    DNMap() = default;
    DNMap(BoundaryOperator op, Provenance provenance);

    const BoundaryOperator& op() const { return m_op; }
    const BoundaryGeometry& geometry() const { return m_op.geometry(); }
    const CMatrix& matrix() const { return m_op.matrix(); }
    const Provenance& provenance() const { return m_provenance; }
    const DnDiagnostics& diagnostics() const { return m_diagnostics; }

    BoundaryFunction apply(const BoundaryFunction& f) const { return m_op.apply(f); }

    /// Re-orders the circles; `order[i]` is the old index of new circle i.
    DNMap permuted(std::span<const int> order) const;

private:
    BoundaryOperator m_op;
    Provenance m_provenance;
    DnDiagnostics m_diagnostics;
};

DnDiagnostics compute_diagnostics(const BoundaryOperator& op);
bool diagnostics_within(const DnDiagnostics& d, const DnTolerances& tol);

/// <Lambda e_k, e_k> / <e_k, e_k> for the Fourier mode e^{2 pi i k s / L_j}
/// supported on circle j.
Complex fourier_multiplier(const DNMap& dn, int circle, int mode);

} // namespace steklov
