#include "orbicert/certify.hpp"

#include <algorithm>

#include "orbicert/differentials.hpp"
#include "orbicert/error.hpp"
#include "orbicert/fermat.hpp"

namespace orbicert {

Thresholds thresholds(std::size_t n, std::optional<std::uint32_t> m) {
  if (n < 2) throw PreconditionError("thresholds are stated for n >= 2");
  if (m && *m < 3) throw PreconditionError("the bigness bound needs m >= 3");
  Thresholds t;
  t.n = n;
  t.d_quadric = binomial(n + 2, 2);
  t.m_min = 2 * n + 2;
  t.component_floor = n;
  t.m = m;
  if (m) {
    const Rational two_n(static_cast<long>(2 * n));
    Rational exact = two_n * (two_n / Rational(static_cast<long>(*m - 2)) + 1);
    exact.canonicalize();
    Integer ceil;
    mpz_cdiv_q(ceil.get_mpz_t(), exact.get_num_mpz_t(), exact.get_den_mpz_t());
    t.d_big_exact = exact;
    t.d_big = ceil.get_ui();
  }
  return t;
}

Json to_json(const Thresholds& t) {
  Json j = {{"n", t.n},
            {"d_quadric", t.d_quadric},
            {"m_min", t.m_min},
            {"component_floor", t.component_floor}};
  if (t.m) {
    j["m"] = *t.m;
    j["d_big"] = *t.d_big;
    j["d_big_exact"] = to_string(*t.d_big_exact);
  }
  return j;
}

Stratum restrict_to_stratum(const Arrangement& arr, std::span<const std::size_t> removed) {
  Stratum s;
  s.restriction = restrict_arrangement(arr, removed);
  s.removed = s.restriction.removed;
  s.ambient_dim = s.restriction.ambient_dim;
  for (const auto& [kept, dropped] : s.restriction.merged)
    s.warnings.push_back("restrictions of hyperplanes " + std::to_string(kept) + " and " +
                         std::to_string(dropped) + " coincide; merged");
  for (std::size_t v : s.restriction.vanishing)
    s.warnings.push_back("hyperplane " + std::to_string(v) + " contains the stratum");
  return s;
}

std::string to_string(CertVerdict v) {
  switch (v) {
    case CertVerdict::pass: return "pass";
    case CertVerdict::fail: return "fail";
    case CertVerdict::evidence_only: return "evidence-only";
    case CertVerdict::incomplete: return "incomplete";
  }
  return "?";
}

void CertNode::aggregate() {
  bool fail = verdict == CertVerdict::fail;
  bool incomplete = verdict == CertVerdict::incomplete;
  for (const auto& c : children) {
    if (c.advisory) continue;
    fail = fail || c.verdict == CertVerdict::fail;
    incomplete = incomplete || c.verdict == CertVerdict::incomplete;
  }
  if (fail)
    verdict = CertVerdict::fail;
  else if (incomplete)
    verdict = CertVerdict::incomplete;
}

Json CertNode::to_json() const {
  Json j = {{"name", name},
            {"inputs", inputs},
            {"verdict", to_string(verdict)},
            {"witnesses", witnesses},
            {"advisory", advisory}};
  if (provenance)
    j["provenance"] = {{"prime", provenance->prime},
                       {"seed", provenance->seed},
                       {"trials", provenance->trials}};
  Json kids = Json::array();
  for (const auto& c : children) kids.push_back(c.to_json());
  j["children"] = kids;
  return j;
}

int Certificate::exit_code() const {
  switch (verdict()) {
    case CertVerdict::pass: return 0;
    case CertVerdict::fail: return 1;
    case CertVerdict::incomplete: return 3;
    case CertVerdict::evidence_only: return 1;
  }
  return 1;
}

Json Certificate::to_json() const {
  return {{"format", "orbicert-certificate/1"},
          {"verdict", to_string(verdict())},
          {"checks", root.to_json()},
          {"implied_conclusions",
           {{"mechanically_checked", false}, {"statements", implied_conclusions}}}};
}

namespace {

// Smallest multiplicity among `indices`, lowest index on ties.
std::pair<std::size_t, Multiplicity> lowest(const std::vector<Multiplicity>& ms,
                                            const IndexSet& indices) {
  std::size_t best = indices.front();
  for (std::size_t i : indices)
    if (ms[i] < ms[best]) best = i;
  return {best, ms[best]};
}

CertNode selection_node(const Selection& sel, std::size_t survivors) {
  CertNode node;
  node.name = "subarrangement_selection";
  node.inputs = {{"required", sel.required}, {"survivors", survivors}};
  node.witnesses = {{"method", sel.method},
                    {"subsets_tried", sel.subsets_tried},
                    {"soundness_alarm", sel.soundness_alarm},
                    {"search_capped", sel.search_capped}};
  if (sel.selected) {
    node.witnesses["selected"] = *sel.selected;
  } else {
    node.verdict = sel.search_capped ? CertVerdict::incomplete : CertVerdict::fail;
    std::string reason;
    if (survivors < sel.required)
      reason = "too few hyperplanes: " + std::to_string(survivors) + " < " +
               std::to_string(sel.required);
    else if (sel.search_capped)
      reason = "subset search cap reached";
    else if (sel.soundness_alarm)
      reason = "SOUNDNESS ALARM: no good subarrangement although the input is in general position";
    else
      reason = "no subarrangement in linear and quadric general position";
    node.witnesses["reason"] = reason;
  }
  return node;
}

CertNode threshold_node(const Arrangement& arr, const Stratum& st, const IndexSet& checked) {
  const std::size_t nn = st.ambient_dim;
  const std::uint64_t need_d = binomial(nn + 2, 2);
  const std::uint64_t need_m = 2 * nn + 2;
  CertNode node;
  node.name = "thresholds";
  node.inputs = {{"induced_d", st.restriction.survivors.size()},
                 {"required_d", need_d},
                 {"required_m", need_m},
                 {"multiplicities_of", checked}};
  if (st.restriction.survivors.size() < need_d) {
    node.verdict = CertVerdict::fail;
    node.witnesses["reason"] = "too few hyperplanes: " +
                               std::to_string(st.restriction.survivors.size()) + " < " +
                               std::to_string(need_d);
    return node;
  }
  if (checked.empty()) {
    node.verdict = CertVerdict::fail;
    node.witnesses["reason"] = "no hyperplanes to check";
    return node;
  }
  const auto [idx, low] = lowest(*arr.multiplicities(), checked);
  node.witnesses["lowest_multiplicity"] = to_json(low);
  node.witnesses["lowest_index"] = idx;
  if (!low.is_infinite() && low.value() < need_m) {
    node.verdict = CertVerdict::fail;
    node.witnesses["reason"] = "multiplicity " + low.to_string() + " of hyperplane " +
                               std::to_string(idx) + " is below " + std::to_string(need_m);
  }
  return node;
}

Arrangement selected_restriction(const Stratum& st, const IndexSet& selected) {
  std::vector<Covector> hs;
  for (std::size_t i : selected) hs.push_back(*st.restriction.covector_of(i));
  return Arrangement(st.ambient_dim, std::move(hs));
}

CertNode general_position_node(const Stratum& st, const std::optional<IndexSet>& selected) {
  CertNode node;
  node.name = "general_position";
  if (!selected) {
    node.verdict = CertVerdict::fail;
    node.witnesses["reason"] = "no selected subarrangement";
    return node;
  }
  const Arrangement sub = selected_restriction(st, *selected);
  const LinearVerdict lin = check_linear_general_position(sub);
  const QuadricVerdict quad = check_quadric_general_position(sub);
  node.inputs = {{"ambient_dim", st.ambient_dim}, {"hyperplanes", selected->size()}};
  node.witnesses = {{"linear", to_string(lin.verdict)},
                    {"linear_subsets_checked", lin.subsets_checked},
                    {"veronese_rank", quad.rank},
                    {"veronese_required", quad.required}};
  if (lin.verdict != Verdict::pass) {
    node.verdict = CertVerdict::fail;
    if (lin.witness) {
      IndexSet orig;
      for (std::size_t p : *lin.witness) orig.push_back((*selected)[p]);
      node.witnesses["dependent_subset"] = orig;
    }
  } else if (!quad.general) {
    node.verdict = CertVerdict::fail;
    node.witnesses["reason"] = quad.reason;
  }
  return node;
}

CertNode evidence_node(const Arrangement& arr, const Stratum& st, const IndexSet& selected,
                       const CertifyOptions& opts, std::uint64_t stratum_index) {
  CertNode node;
  node.name = "baselocus_evidence";
  node.advisory = true;
  const std::size_t nn = st.ambient_dim;
  const auto [idx, low] = lowest(*arr.multiplicities(), selected);
  const std::uint32_t m =
      low.is_infinite() ? static_cast<std::uint32_t>(2 * nn + 2) : low.value();
  const std::uint64_t p = opts.prime ? *opts.prime : default_prime(m);
  const std::uint64_t seed = opts.seed + stratum_index;
  node.inputs = {{"m", m}, {"samples", opts.samples}, {"prime_defaulted", !opts.prime}};
  node.provenance = Provenance{p, seed, 0};
  try {
    const FermatCover cov = build_cover(normalize(selected_restriction(st, selected)), m);
    const BaseLocusReport rep = baselocus_evidence(cov, p, opts.samples, seed);
    node.provenance->trials = rep.trials;
    node.witnesses = {{"samples", rep.samples},
                      {"bound_certified", rep.bound_certified},
                      {"rank_equal", rep.rank_equal},
                      {"counterexamples", rep.counterexamples},
                      {"bw_exact", rep.bw_exact},
                      {"statement", rep.statement}};
    if (rep.precondition_failure) node.witnesses["precondition_failure"] = *rep.precondition_failure;
    node.verdict = rep.passed() ? CertVerdict::evidence_only : CertVerdict::fail;
  } catch (const std::exception& e) {
    node.verdict = CertVerdict::fail;
    node.witnesses["precondition_failure"] = e.what();
  }
  return node;
}

}  // namespace

Certificate certify_hyperbolicity(const Arrangement& arr, const CertifyOptions& opts) {
  if (!arr.multiplicities()) throw PreconditionError("certify needs orbifold multiplicities");
  const std::size_t n = arr.n(), d = arr.size();
  if (n < 1) throw PreconditionError("certify needs n >= 1");

  Certificate cert;
  CertNode& root = cert.root;
  root.name = "orbifold_hyperbolicity";
  Json ms = Json::array();
  for (const auto& m : *arr.multiplicities()) ms.push_back(to_json(m));
  root.inputs = {{"input_sha256", sha256_hex(canonical_dump(to_json(arr)))},
                 {"n", n},
                 {"d", d},
                 {"multiplicities", ms},
                 {"with_evidence", opts.with_evidence},
                 {"max_strata", opts.max_strata}};
  if (opts.with_evidence) {
    root.inputs["samples"] = opts.samples;
    root.inputs["seed"] = opts.seed;
    if (opts.prime) root.inputs["prime"] = *opts.prime;
  }

  std::uint64_t total = 0;
  for (std::size_t t = 0; t < n && t <= d; ++t) total += binomial(d, t);
  std::uint64_t examined = 0;
  bool capped = false;

  for (std::size_t t = 0; t < n && t <= d && !capped; ++t) {
    IndexSet I(t);
    for (std::size_t i = 0; i < t; ++i) I[i] = i;
    do {
      if (examined >= opts.max_strata) {
        capped = true;
        break;
      }
      const Stratum st = restrict_to_stratum(arr, I);
      CertNode node;
      node.name = "stratum";
      node.inputs = {{"removed", I}, {"ambient_dim", st.ambient_dim}};
      if (!st.warnings.empty()) node.witnesses["warnings"] = st.warnings;

      const Selection sel = select_subarrangement(arr, I);
      node.children.push_back(selection_node(sel, st.restriction.survivors.size()));
      node.children.push_back(
          threshold_node(arr, st, sel.selected ? *sel.selected : st.restriction.survivors));
      node.children.push_back(general_position_node(st, sel.selected));
      if (opts.with_evidence && sel.selected && st.ambient_dim >= 1)
        node.children.push_back(evidence_node(arr, st, *sel.selected, opts, examined));
      node.aggregate();
      root.children.push_back(std::move(node));
      ++examined;
    } while (next_combination(I, d));
  }

  root.witnesses = {{"strata_examined", examined}, {"strata_total", total}};
  if (capped) {
    root.verdict = CertVerdict::incomplete;
    root.witnesses["reason"] = "stratum enumeration limit reached";
  }
  root.aggregate();
  for (const auto& s : root.children) {
    if (s.verdict != CertVerdict::fail) continue;
    Json first = {{"removed", s.inputs["removed"]}};
    for (const auto& c : s.children)
      if (!c.advisory && c.verdict == CertVerdict::fail) {
        first["check"] = c.name;
        first["details"] = c.witnesses;
        break;
      }
    root.witnesses["first_failure"] = first;
    break;
  }

  if (root.verdict == CertVerdict::pass) {
    cert.implied_conclusions = {
        "Every stratum X_I (|I| < n) carries at least binom(n-|I|+2, 2) induced hyperplanes "
        "in linear and quadric general position with multiplicities >= 2(n-|I|)+2.",
        "By the orbifold hyperbolicity theorem for such arrangements, each stratum pair "
        "(X_I, Delta_I) is Brody hyperbolic; by the stratified Brody criterion the pair "
        "(P^n, Delta) is then Kobayashi hyperbolic.",
        "These consequences of published theorems are not checked by this program."};
  }
  return cert;
}

}  // namespace orbicert
