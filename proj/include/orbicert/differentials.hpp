#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbicert/arrangement.hpp"
#include "orbicert/fermat.hpp"
#include "orbicert/mpoly.hpp"
#include "orbicert/rewriter.hpp"

namespace orbicert {

using PolyMatrix = std::vector<std::vector<MPoly>>;

/// Determinant by Laplace expansion along the first row (memoized over
/// column subsets). Fine for the n + 1 <= 8 sizes used here.
MPoly poly_det(const PolyMatrix& m);

/// The n x (n+1) matrix with entry (r, i) = a_i^{j_r - n} w_{i, j_r},
/// i = 0..n, in homogeneous variables. `coefficients` defaults to cov.A.
PolyMatrix cramer_matrix(const FermatCover& cov, const IndexSet& rows,
                         const std::optional<RationalMatrix>& coefficients = std::nullopt);

/// Default row choice {n+1, .., 2n}.
IndexSet default_rows(const FermatCover& cov);

/// Chart expression of sigma (before any reduction modulo the ideal):
///   chart 0:      det of columns 1..n of the Cramer matrix;
///   chart c <= n: (-1)^c times the minor without column c;
///   chart n+s:    det of the Cramer matrix bordered by the row
///                 (a_0^s z_0, .., a_n^s z_n), i.e. relation s's coefficients.
/// The chart variable is set to 1 and its fiber variable to 0.
MPoly generate_sigma(const FermatCover& cov, const IndexSet& rows, std::size_t chart);

struct TwistedSection {
  FermatCover cover;
  IndexSet rows;                        // j_1..j_n in n+1..N
  std::int64_t twist = 0;               // 2n + 1 - m, exponent of Z_c
  std::size_t symmetric_degree = 0;     // n
  std::map<std::size_t, MPoly> charts;  // chart index -> expression

  const MPoly& expression(std::size_t chart) const;
};

/// Expressions for the given charts (all charts 0..N when empty).
TwistedSection generate_section(const FermatCover& cov, const IndexSet& rows,
                                const std::vector<std::size_t>& charts = {});

/// Rewriter for chart c of the cover.
CoverIdealRewriter chart_rewriter(const FermatCover& cov, std::size_t chart,
                                  std::optional<std::size_t> keep_free = std::nullopt);

/// Every row of the Cramer matrix annihilates (z_0^{m-1}, .., z_n^{m-1}) in
/// chart 0, modulo the ideal of the cover. With `coefficients`, the matrix
/// is built from those instead of the cover's own relations.
bool verify_cramer_annihilation(const FermatCover& cov, const IndexSet& rows,
                                const std::optional<RationalMatrix>& coefficients = std::nullopt);

/// Rewrites a chart-c1 expression in the coordinates of chart c2:
/// z_i = y_i / y_{c1}, z_i' = (y_i' y_{c1} - y_i y_{c1}') / y_{c1}^2. Returns
/// the numerator P and the exponent D with expression = P / y_{c1}^D.
std::pair<MPoly, std::uint32_t> transport(const MPoly& f, std::size_t c1, std::size_t c2);

/// sigma_{c2} = y_{c1}^{twist} sigma_{c1}, denominators cleared, reduced in
/// chart c2. Missing charts are generated on demand.
bool verify_chart_compatibility(const TwistedSection& sec, std::size_t c1, std::size_t c2);

/// Order of the extra vanishing along Z_{c1} = 0 seen from chart c2: in chart
/// c2 coordinates the minor omitting column c1 equals, modulo the ideal,
/// +-y_{c1}^e times the chart-c2 expression. Returns e (m - 1 for the
/// standard pairs); c1 must be a base index (0..n). Throws PreconditionError
/// on a zero expression or when the reduced forms are not related by a
/// signed power of y_{c1}.
std::uint32_t extra_vanishing_order(const TwistedSection& sec, std::size_t c1, std::size_t c2);

struct BWFactorization {
  PolyMatrix B;           // k x (n+1), b_i^j = a_i^j w_{i, n+j}
  PolyMatrix W;           // binom(n+1,2) x (n+1), row (p<q) = w_{p,q}(E_p - E_q)
  PolyMatrix W_weighted;  // row (p<q) = w_{p,q}(z_q^{m-1} E_p - z_p^{m-1} E_q)
  A2Matrix A2;
};

BWFactorization build_bw(const FermatCover& cov);

/// z_{n+j}^{m-1} b_{i1}^j - (A_(2)^T W_weighted)[j, i1] for all (j, i1), in
/// chart 0, before reduction. W_weighted = D_row W D_col with
/// D_row = diag(z_p^{m-1} z_q^{m-1}) and D_col = diag(z_i^{-(m-1)}), so it
/// has the rank of W wherever all z_i are nonzero.
std::vector<std::vector<MPoly>> bw_residuals(const FermatCover& cov,
                                             const std::optional<A2Matrix>& a2 = std::nullopt);

bool verify_bw_factorization(const FermatCover& cov,
                             const std::optional<A2Matrix>& a2 = std::nullopt);

/// Evaluations at a cover point (chart 0).
FpMatrix evaluate_W(const FermatCover& cov, const CoverPoint& pt);
FpMatrix evaluate_B(const FermatCover& cov, const CoverPoint& pt);

struct RankWitness {
  std::size_t bound = 0;  // certified lower bound on rank W
  std::vector<std::pair<std::size_t, std::size_t>> rows;  // W rows (p<q), ascending
  IndexSet cols;                                          // 1..n
  Fp minor;                                               // nonzero
  std::size_t pivot = 0;                                  // i with w_{0,i} = z_i' != 0
};

/// Explicit nonzero n x n minor of W at an interior point. Throws
/// PreconditionError when z_1' = .. = z_n' = 0 (degenerate tangent) or the
/// point is not interior.
RankWitness rank_W_minor(const FermatCover& cov, const CoverPoint& pt);

/// Transforms a chart-0 point to chart c coordinates.
CoverPoint to_chart_point(const CoverPoint& pt, std::size_t chart);

/// Evaluates a chart-c expression at a chart-0 sample (after transforming).
Fp evaluate_in_chart(const MPoly& f, const CoverPoint& pt, std::size_t chart);

struct SampledChartReport {
  std::uint64_t samples = 0;
  std::uint64_t mismatches = 0;
};

/// sigma_0(z) = z_c^{twist} sigma_c(y) at sampled points, over F_p.
SampledChartReport sampled_chart_check(const TwistedSection& sec, std::size_t chart,
                                       std::uint64_t p, std::uint64_t samples,
                                       std::uint64_t seed);

struct BaseLocusReport {
  std::optional<std::string> precondition_failure;
  bool bw_exact = false;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t trials = 0;
  std::uint64_t bound_certified = 0;  // points with rank W >= n witnessed
  std::uint64_t rank_equal = 0;       // points with rank B = rank W
  std::uint64_t counterexamples = 0;
  std::optional<RankWitness> first_witness;
  std::string statement;

  bool passed() const {
    return !precondition_failure && bw_exact && counterexamples == 0 &&
           bound_certified == samples && rank_equal == samples;
  }
};

/// Requires m > 2n + 1 and rank A_(2) = binom(n+1, 2); failures are reported
/// in precondition_failure. Sampled evidence, never a proof.
BaseLocusReport baselocus_evidence(const FermatCover& cov, std::uint64_t p,
                                   std::uint64_t samples, std::uint64_t seed);

}  // namespace orbicert
