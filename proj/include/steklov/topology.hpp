#pragma once

// First Betti number and Neumann-field traces from a DN map, via the operator
// Lambda - D Lambda^+ D, plus the derivative identities that involve them.

#include <steklov/dn_map.hpp>

#include <optional>

namespace steklov {

/// Numerical rank policy. Singular values are compared against a reference
/// scale (the norm of the operator the tested one is built from).
struct RankRule
{
    /// Minimum ratio between consecutive singular values that counts as a gap.
    double gap_ratio = 1e3;
    /// Fallback cutoff relative to the reference scale.
    double threshold = 1e-6;
    /// Singular values below this fraction of the reference are treated as
    /// one noise level by the gap search (roundoff is always such a level).
    double gap_floor = 0.0;
    /// Pseudo-inverse cutoff relative to the largest singular value of Lambda.
    double pinv_threshold = 1e-10;
    /// Relative least-squares residual above which a right side is not in Ran Lambda.
    double range_tolerance = 1e-8;
    /// When positive, ranks are taken on the band |k| <= max(1, floor(f N / 2))
    /// of every circle, N the smallest sample count.
    double band_fraction = 0.0;

    static RankRule spectral();
    static RankRule fem();
    static RankRule for_method(DnMethod method);
};

struct RankDecision
{
    int rank = 0;
    double tolerance_used = 0.0;
    bool gap_found = false;
    int gap_rank = 0;
    int threshold_rank = 0;
};

/// Applies the gap rule to the first `effective_count` singular values and
/// cross-checks it with the threshold rule. Throws AmbiguousRank when a gap is
/// found whose rank disagrees with the threshold.
RankDecision decide_rank(
    const Eigen::VectorXd& singular_values,
    double reference,
    int effective_count,
    const RankRule& rule);

/// Weighted minimum-norm pseudo-inverse of a DN map, computed once.
class DnPseudoInverse
{
public:
    DnPseudoInverse(const DNMap& dn, const RankRule& rule);

    const CMatrix& matrix() const { return m_pinv; }
    double largest_singular_value() const { return m_sigma_max; }
    /// Minimum-norm h with Lambda h = r, constant component removed.
    BoundaryFunction solve(const BoundaryFunction& r) const;

private:
    const DNMap* m_dn;
    RankRule m_rule;
    CMatrix m_pinv;
    double m_sigma_max = 0.0;
};

BoundaryFunction dn_pseudo_solve(const DNMap& dn, const BoundaryFunction& r, const RankRule& rule);

/// Lambda - D Lambda^+ D.
BoundaryOperator neumann_range_operator(const DNMap& dn, const RankRule& rule);
/// (1 - (P Lambda D^{-1})^2) D.
BoundaryOperator derivative_defect_operator(const DNMap& dn);

/// Per-circle band bounds implied by the rule, or empty when unlimited.
std::vector<int> band_limits(const BoundaryGeometry& geometry, const RankRule& rule);

struct TopologyReport
{
    int beta1 = 0;
    int circle_count = 0;
    std::vector<double> singular_values;
    double rank_tolerance_used = 0.0;
    /// W-orthonormal, zero global mean.
    std::vector<BoundaryFunction> neumann_basis;
    int t2_range_dim = 0;
    std::vector<double> t2_singular_values;
    bool bound_holds = false;
    std::vector<int> band;
};

/// Betti number and Neumann basis from the range operator alone; the
/// derivative-defect fields are left empty.
TopologyReport recover_beta1(const BoundaryOperator& range_op, double reference, const RankRule& rule);

/// Rank of the derivative defect operator.
RankDecision t2_range_dim(const DNMap& dn, const RankRule& rule, std::vector<double>* singular_values = nullptr);

/// Full analysis: range operator, Betti number, derivative-defect rank and
/// the bound rank <= beta1 + m - 1.
TopologyReport analyze_topology(const DNMap& dn, const RankRule& rule);

struct DerivativeDecomposition
{
    /// Fitted combination of the Neumann basis.
    BoundaryFunction lambda;
    LocallyConstantFunction c;
    std::vector<Complex> lambda_coefficients;
    /// ||lhs - fit||_W / ||Df||_W, 0 when Df = 0.
    double residual = 0.0;
    /// Largest relative change of (lambda, c) after refitting in a randomly
    /// rotated basis; negative when not evaluated.
    double uniqueness_defect = -1.0;
};

/// Least-squares fit of (1 - (P Lambda D^{-1})^2) D f = P (Lambda D^{-1} P lambda - Lambda c)
/// over lambda in span(neumann_basis) and balanced c.
DerivativeDecomposition fit_derivative_decomposition(
    const DNMap& dn,
    const BoundaryFunction& f,
    const TopologyReport& report,
    const RankRule& rule,
    std::optional<unsigned> uniqueness_seed = std::nullopt);

/// Single-circle form: fit (1 - (Lambda D^{-1})^2) D f = Lambda D^{-1} lambda.
DerivativeDecomposition fit_single_circle_identity(
    const DNMap& dn,
    const BoundaryFunction& f,
    const TopologyReport& report,
    const RankRule& rule);

} // namespace steklov
