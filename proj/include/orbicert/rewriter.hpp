#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "orbicert/matrix.hpp"
#include "orbicert/mpoly.hpp"

namespace orbicert {

enum class RewriteOrder {
  canonical,  // relations j descending
  ascending,  // relations j ascending
};

/// Rewriting system for the ideal of a Fermat cover and its tangent
/// relations, written in one affine chart (z_c = 1, z_c' = 0).
///
/// Relation j (1..k) is Z_{n+j}^m = sum_i a_i^j Z_i^m together with its
/// differential z_{n+j}^{m-1} z_{n+j}' = sum_i a_i^j z_i^{m-1} z_i'. Each
/// relation eliminates one variable e_j: z_{n+j} itself, except in the chart
/// c = n+j where z_{n+j} = 1 and a base variable is eliminated instead. Two
/// rules per relation:
///   tangent: z_e^{m-1} z_e'  ->  tail
///   fermat:  z_e^m           ->  tail
/// Tangent rules take priority over Fermat rules; within a class relations
/// are tried in the configured order.
///
/// normal_form() is the fixpoint of that strategy. It is not a canonical
/// form on its own: the overlap of the two rules of a relation leaves
/// irreducible ideal members behind. is_zero_mod_ideal() first multiplies by
/// z_e^{(m-1) deg_{z_e'}} for every eliminated e (a unit wherever the
/// eliminated coordinates are nonzero), after which the fixpoint contains no
/// eliminated fiber variable and no eliminated exponent >= m. Such remainders
/// form a basis of the coordinate ring localized at the eliminated
/// variables, so the test is exact there.
class CoverIdealRewriter {
 public:
  struct Rule {
    std::size_t relation = 0;     // j, 1-based
    std::uint32_t eliminated = 0;  // variable index e_j
    Monomial fermat_lead;
    MPoly fermat_tail;
    Monomial tangent_lead;
    MPoly tangent_tail;
  };

  /// `keep_free` names a base index that must not be eliminated (only
  /// relevant in charts c > n). Throws PreconditionError on m < 2, bad
  /// chart, or a relation with no admissible eliminated variable.
  CoverIdealRewriter(std::size_t n, const RationalMatrix& A, std::uint32_t m,
                     std::size_t chart,
                     std::optional<std::size_t> keep_free = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t k() const { return A_.rows(); }
  std::size_t ambient() const { return n_ + A_.rows(); }  // N
  std::uint32_t m() const { return m_; }
  std::size_t chart() const { return chart_; }
  const std::vector<Rule>& rules() const { return rules_; }  // j descending
  bool is_eliminated(std::uint32_t index) const;

  /// Substitutes z_c = 1 and z_c' = 0.
  MPoly to_chart(const MPoly& f) const;

  /// Chart forms of relation j, moved to one side (lhs - rhs).
  MPoly fermat_relation(std::size_t j) const;
  MPoly tangent_relation(std::size_t j) const;

  MPoly normal_form(const MPoly& f, RewriteOrder order = RewriteOrder::canonical) const;
  /// Any applicable rule, chosen uniformly at random at each step.
  MPoly normal_form_randomized(const MPoly& f, std::uint64_t seed) const;

  /// Product of z_e^{(m-1) deg_{z_e'} f} over eliminated e.
  Monomial saturation_factor(const MPoly& f) const;
  MPoly saturate(const MPoly& f) const;
  bool is_zero_mod_ideal(const MPoly& f) const;

 private:
  std::vector<Rule> rules_;
  std::size_t n_;
  RationalMatrix A_;
  std::uint32_t m_;
  std::size_t chart_;
};

}  // namespace orbicert
