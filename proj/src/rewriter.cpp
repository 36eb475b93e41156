#include "orbicert/rewriter.hpp"

#include <string>

#include "orbicert/random.hpp"

namespace orbicert {

CoverIdealRewriter::CoverIdealRewriter(std::size_t n, const RationalMatrix& A,
                                       std::uint32_t m, std::size_t chart,
                                       std::optional<std::size_t> keep_free)
    : n_(n), A_(A), m_(m), chart_(chart) {
  if (m < 2) throw PreconditionError("cover ramification m must be >= 2");
  if (A.rows() > 0 && A.cols() != n + 1)
    throw PreconditionError("coefficient matrix must have n + 1 columns");
  const std::size_t k = A.rows();
  const std::size_t N = n + k;
  if (chart > N) throw PreconditionError("chart index out of range");

  for (std::size_t jj = k; jj >= 1; --jj) {
    // Relation jj as sum_i coef[i] Z_i^m = 0.
    std::vector<Rational> coef(N + 1, Rational(0));
    for (std::size_t i = 0; i <= n; ++i) coef[i] = A(jj - 1, i);
    coef[n + jj] = -1;

    std::optional<std::size_t> e;
    if (chart != n + jj) {
      e = n + jj;
    } else {
      for (std::size_t i = n + 1; i-- > 0;) {
        if (is_zero(coef[i]) || (keep_free && *keep_free == i)) continue;
        e = i;
        break;
      }
      if (!e)
        throw PreconditionError("relation " + std::to_string(jj) +
                                " has no eliminable variable in chart " +
                                std::to_string(chart));
    }

    Rule rule;
    rule.relation = jj;
    rule.eliminated = static_cast<std::uint32_t>(*e);
    const Rational scale = -inverse(coef[*e]);
    rule.fermat_lead = Monomial::of(Variable::base(rule.eliminated), m);
    rule.tangent_lead = Monomial::of(Variable::base(rule.eliminated), m - 1) *
                        Monomial::of(Variable::fiber(rule.eliminated));
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == *e || is_zero(coef[i])) continue;
      const Rational c = scale * coef[i];
      const auto idx = static_cast<std::uint32_t>(i);
      if (i == chart) {
        rule.fermat_tail.add_term(Monomial(), c);
        continue;  // z_c' = 0 kills the tangent contribution
      }
      rule.fermat_tail.add_term(Monomial::of(Variable::base(idx), m), c);
      rule.tangent_tail.add_term(Monomial::of(Variable::base(idx), m - 1) *
                                     Monomial::of(Variable::fiber(idx)),
                                 c);
    }
    rules_.push_back(std::move(rule));
    if (jj == 1) break;
  }
}

bool CoverIdealRewriter::is_eliminated(std::uint32_t index) const {
  for (const auto& r : rules_)
    if (r.eliminated == index) return true;
  return false;
}

MPoly CoverIdealRewriter::to_chart(const MPoly& f) const {
  const auto c = static_cast<std::uint32_t>(chart_);
  const Variable base = Variable::base(c), fiber = Variable::fiber(c);
  MPoly out;
  for (const auto& [mono, coeff] : f.terms()) {
    if (mono.exponent(fiber) > 0) continue;
    out.add_term(mono.without(base), coeff);
  }
  return out;
}

MPoly CoverIdealRewriter::fermat_relation(std::size_t j) const {
  if (j < 1 || j > k()) throw PreconditionError("relation index out of range");
  MPoly f = z(static_cast<std::uint32_t>(n_ + j)).pow(m_);
  for (std::size_t i = 0; i <= n_; ++i)
    f -= z(static_cast<std::uint32_t>(i)).pow(m_).scale(A_(j - 1, i));
  return to_chart(f);
}

MPoly CoverIdealRewriter::tangent_relation(std::size_t j) const {
  if (j < 1 || j > k()) throw PreconditionError("relation index out of range");
  const auto e = static_cast<std::uint32_t>(n_ + j);
  MPoly f = z(e).pow(m_ - 1) * zp(e);
  for (std::size_t i = 0; i <= n_; ++i) {
    const auto idx = static_cast<std::uint32_t>(i);
    f -= (z(idx).pow(m_ - 1) * zp(idx)).scale(A_(j - 1, i));
  }
  return to_chart(f);
}

namespace {

const CoverIdealRewriter::Rule* pick(const std::vector<CoverIdealRewriter::Rule>& rules,
                                     const Monomial& mono, bool tangent,
                                     bool ascending) {
  auto applies = [&](const CoverIdealRewriter::Rule& r) {
    return (tangent ? r.tangent_lead : r.fermat_lead).divides(mono);
  };
  if (ascending) {
    for (auto it = rules.rbegin(); it != rules.rend(); ++it)
      if (applies(*it)) return &*it;
  } else {
    for (const auto& r : rules)
      if (applies(r)) return &r;
  }
  return nullptr;
}

}  // namespace

// The leading term is processed first. The rule applied to a monomial only
// depends on the monomial, so this yields the same fixpoint as exhausting
// tangent rewrites globally before each Fermat rewrite.
MPoly CoverIdealRewriter::normal_form(const MPoly& f, RewriteOrder order) const {
  const bool ascending = order == RewriteOrder::ascending;
  MPoly work = to_chart(f);
  MPoly result;
  while (!work.is_zero()) {
    auto [mono, coeff] = work.pop_leading();
    if (const Rule* r = pick(rules_, mono, true, ascending)) {
      work.add_scaled(r->tangent_tail, mono.quotient(r->tangent_lead), coeff);
    } else if (const Rule* r2 = pick(rules_, mono, false, ascending)) {
      work.add_scaled(r2->fermat_tail, mono.quotient(r2->fermat_lead), coeff);
    } else {
      result.add_term(mono, coeff);
    }
  }
  return result;
}

MPoly CoverIdealRewriter::normal_form_randomized(const MPoly& f,
                                                 std::uint64_t seed) const {
  Rng rng(seed);
  MPoly work = to_chart(f);
  MPoly result;
  std::vector<std::pair<const Rule*, bool>> options;
  while (!work.is_zero()) {
    auto [mono, coeff] = work.pop_leading();
    options.clear();
    for (const auto& r : rules_) {
      if (r.tangent_lead.divides(mono)) options.emplace_back(&r, true);
      if (r.fermat_lead.divides(mono)) options.emplace_back(&r, false);
    }
    if (options.empty()) {
      result.add_term(mono, coeff);
      continue;
    }
    auto [r, tangent] = options[rng.below(options.size())];
    const Monomial& lead = tangent ? r->tangent_lead : r->fermat_lead;
    work.add_scaled(tangent ? r->tangent_tail : r->fermat_tail, mono.quotient(lead),
                    coeff);
  }
  return result;
}

Monomial CoverIdealRewriter::saturation_factor(const MPoly& f) const {
  const MPoly g = to_chart(f);
  Monomial factor;
  for (const auto& r : rules_) {
    const std::uint32_t d = g.degree_in(Variable::fiber(r.eliminated));
    if (d > 0)
      factor = factor * Monomial::of(Variable::base(r.eliminated), (m_ - 1) * d);
  }
  return factor;
}

MPoly CoverIdealRewriter::saturate(const MPoly& f) const {
  return to_chart(f).times(saturation_factor(f));
}

bool CoverIdealRewriter::is_zero_mod_ideal(const MPoly& f) const {
  return normal_form(saturate(f)).is_zero();
}

}  // namespace orbicert
