#include "orbicert/arrangement.hpp"

#include <algorithm>
#include <map>

#include "orbicert/error.hpp"
#include "orbicert/random.hpp"

namespace orbicert {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool next_combination(IndexSet& subset, std::size_t universe) {
  const std::size_t r = subset.size();
  for (std::size_t i = r; i-- > 0;) {
    if (subset[i] < universe - r + i) {
      ++subset[i];
      for (std::size_t j = i + 1; j < r; ++j) subset[j] = subset[j - 1] + 1;
      return true;
    }
  }
  return false;
}

namespace {

IndexSet first_combination(std::size_t r) {
  IndexSet s(r);
  for (std::size_t i = 0; i < r; ++i) s[i] = i;
  return s;
}

}  // namespace

Multiplicity Multiplicity::finite(std::uint32_t m) {
  if (m < 2) throw PreconditionError("multiplicity must be >= 2 or inf");
  return Multiplicity(m);
}

std::uint32_t Multiplicity::value() const {
  if (is_infinite()) throw PreconditionError("infinite multiplicity has no value");
  return value_;
}

Rational Multiplicity::coefficient() const {
  if (is_infinite()) return Rational(1);
  return Rational(1) - Rational(1, value_);
}

std::string Multiplicity::to_string() const {
  return is_infinite() ? "inf" : std::to_string(value_);
}

std::strong_ordering Multiplicity::operator<=>(const Multiplicity& o) const {
  if (is_infinite() || o.is_infinite()) return is_infinite() <=> o.is_infinite();
  return value_ <=> o.value_;
}

Covector canonical_scale(Covector v) {
  auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return !is_zero(x); });
  if (it == v.end()) throw PreconditionError("zero covector");
  const Rational s = inverse(*it);
  for (auto& x : v) x *= s;
  return v;
}

Arrangement::Arrangement(std::size_t n, std::vector<Covector> covectors,
                         std::optional<std::vector<Multiplicity>> multiplicities)
    : n_(n), multiplicities_(std::move(multiplicities)) {
  if (covectors.empty()) throw PreconditionError("arrangement needs at least one hyperplane");
  for (auto& h : covectors) {
    if (h.size() != n + 1)
      throw PreconditionError("covector length must be n + 1 = " + std::to_string(n + 1));
    covectors_.push_back(canonical_scale(std::move(h)));
  }
  if (multiplicities_ && multiplicities_->size() != covectors_.size())
    throw PreconditionError("one multiplicity per hyperplane required");
}

RationalMatrix Arrangement::matrix() const { return RationalMatrix::from_rows(covectors_); }

RationalMatrix Arrangement::matrix(std::span<const std::size_t> rows) const {
  RationalMatrix out(rows.size(), n_ + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Covector& h = covectors_.at(rows[r]);
    for (std::size_t c = 0; c <= n_; ++c) out(r, c) = h[c];
  }
  return out;
}

Arrangement Arrangement::subset(std::span<const std::size_t> indices) const {
  std::vector<Covector> hs;
  std::optional<std::vector<Multiplicity>> ms;
  if (multiplicities_) ms.emplace();
  for (std::size_t i : indices) {
    hs.push_back(covectors_.at(i));
    if (ms) ms->push_back(multiplicities_->at(i));
  }
  return Arrangement(n_, std::move(hs), std::move(ms));
}

Arrangement Arrangement::with_multiplicities(std::vector<Multiplicity> m) const {
  return Arrangement(n_, covectors_, std::move(m));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::undecided: return "undecided";
    case Verdict::insufficient: return "insufficient";
  }
  return "?";
}

LinearVerdict check_linear_general_position(const Arrangement& arr, LinearCheckMode mode) {
  LinearVerdict out;
  out.mode = mode;
  const std::size_t d = arr.size(), r = arr.n() + 1;
  if (d < r) {
    out.verdict = Verdict::insufficient;
    return out;
  }
  if (mode.kind == LinearCheckMode::Kind::exhaustive) {
    IndexSet s = first_combination(r);
    do {
      ++out.subsets_checked;
      if (is_zero(det(arr.matrix(s)))) {
        out.verdict = Verdict::fail;
        out.witness = s;
        return out;
      }
    } while (next_combination(s, d));
    out.verdict = Verdict::pass;
    return out;
  }

  Rng rng(mode.seed);
  for (std::uint64_t t = 0; t < mode.trials; ++t) {
    // Partial Fisher-Yates for a uniform r-subset.
    IndexSet pool(d);
    for (std::size_t i = 0; i < d; ++i) pool[i] = i;
    for (std::size_t i = 0; i < r; ++i)
      std::swap(pool[i], pool[i + rng.below(d - i)]);
    IndexSet s(pool.begin(), pool.begin() + r);
    std::sort(s.begin(), s.end());
    ++out.subsets_checked;
    if (is_zero(det(arr.matrix(s)))) {
      out.verdict = Verdict::fail;
      out.witness = s;
      return out;
    }
  }
  out.verdict = Verdict::undecided;
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> quadratic_monomials(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p <= n; ++p)
    for (std::size_t q = p; q <= n; ++q) out.emplace_back(p, q);
  return out;
}

RationalMatrix veronese_matrix(const Arrangement& arr) {
  const auto monos = quadratic_monomials(arr.n());
  RationalMatrix v(arr.size(), monos.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Covector& h = arr.covector(i);
    for (std::size_t c = 0; c < monos.size(); ++c)
      v(i, c) = h[monos[c].first] * h[monos[c].second];
  }
  return v;
}

QuadricVerdict check_quadric_general_position(const Arrangement& arr) {
  QuadricVerdict out;
  out.required = binomial(arr.n() + 2, 2);
  out.rank = rank(veronese_matrix(arr));
  if (arr.size() < out.required) {
    out.reason = "too few hyperplanes: " + std::to_string(arr.size()) + " < " +
                 std::to_string(out.required);
    return out;
  }
  out.general = out.rank == out.required;
  if (!out.general)
    out.reason = "dual points lie on a quadric: Veronese rank " + std::to_string(out.rank) +
                 " < " + std::to_string(out.required);
  return out;
}

std::optional<IndexSet> default_pivot(const Arrangement& arr) {
  // Greedy selection yields the lexicographically first basis.
  IndexSet chosen;
  for (std::size_t i = 0; i < arr.size() && chosen.size() <= arr.n(); ++i) {
    chosen.push_back(i);
    if (rank(arr.matrix(chosen)) < chosen.size()) chosen.pop_back();
  }
  if (chosen.size() != arr.n() + 1) return std::nullopt;
  return chosen;
}

NormalizedArrangement normalize(const Arrangement& arr, std::optional<IndexSet> pivot) {
  const std::size_t n = arr.n();
  if (!pivot) {
    pivot = default_pivot(arr);
    if (!pivot) throw PreconditionError("arrangement has no independent (n+1)-subset");
  }
  if (pivot->size() != n + 1) throw PreconditionError("pivot must have n + 1 indices");
  std::vector<bool> used(arr.size(), false);
  for (std::size_t i : *pivot) {
    if (i >= arr.size()) throw PreconditionError("pivot index out of range");
    if (used[i]) throw PreconditionError("repeated pivot index");
    used[i] = true;
  }
  RationalMatrix change = arr.matrix(*pivot);
  auto inv = inverse(change);
  if (!inv) throw PreconditionError("pivot hyperplanes are linearly dependent");

  IndexSet others;
  for (std::size_t i = 0; i < arr.size(); ++i)
    if (!used[i]) others.push_back(i);
  // H(Z) = h . Z = (h change^{-1}) . X
  RationalMatrix A = arr.matrix(others) * *inv;
  return NormalizedArrangement{arr, *pivot, std::move(others), std::move(change), std::move(A)};
}

A2Matrix build_A2(std::size_t n, const RationalMatrix& A) {
  A2Matrix out;
  for (std::size_t p = 0; p <= n; ++p)
    for (std::size_t q = p + 1; q <= n; ++q) out.row_pairs.emplace_back(p, q);
  out.entries = RationalMatrix(out.row_pairs.size(), A.rows());
  if (A.rows() > 0 && A.cols() != n + 1)
    throw PreconditionError("coefficient matrix must have n + 1 columns");
  for (std::size_t r = 0; r < out.row_pairs.size(); ++r) {
    const auto [p, q] = out.row_pairs[r];
    for (std::size_t j = 0; j < A.rows(); ++j) out.entries(r, j) = A(j, p) * A(j, q);
  }
  return out;
}

A2Matrix build_A2(const NormalizedArrangement& na) { return build_A2(na.n(), na.A); }

bool a2_equivalence_check(const NormalizedArrangement& na) {
  if (na.base.size() != binomial(na.n() + 2, 2))
    throw PreconditionError("A_(2) determinant test needs exactly binom(n+2, 2) hyperplanes");
  return !is_zero(det(build_A2(na).entries));
}

Arrangement Restriction::arrangement() const {
  return Arrangement(ambient_dim, covectors, multiplicities);
}

std::optional<Covector> Restriction::covector_of(std::size_t original) const {
  auto it = std::lower_bound(survivors.begin(), survivors.end(), original);
  if (it == survivors.end() || *it != original) return std::nullopt;
  return covectors[static_cast<std::size_t>(it - survivors.begin())];
}

Restriction restrict_arrangement(const Arrangement& arr, std::span<const std::size_t> removed) {
  const std::size_t n = arr.n();
  Restriction out;
  out.removed.assign(removed.begin(), removed.end());
  std::sort(out.removed.begin(), out.removed.end());
  if (std::adjacent_find(out.removed.begin(), out.removed.end()) != out.removed.end())
    throw PreconditionError("repeated index in removed set");
  if (!out.removed.empty() && out.removed.back() >= arr.size())
    throw PreconditionError("removed index out of range");
  if (out.removed.size() > n) throw PreconditionError("cannot intersect more than n hyperplanes");

  out.ambient_dim = n - out.removed.size();
  out.basis = kernel_basis(arr.matrix(out.removed));
  if (out.basis.rows() != out.ambient_dim + 1)
    throw PreconditionError("removed hyperplanes are linearly dependent");

  std::vector<bool> is_removed(arr.size(), false);
  for (std::size_t i : out.removed) is_removed[i] = true;
  if (arr.multiplicities()) out.multiplicities.emplace();

  std::map<Covector, std::size_t> seen;  // restricted covector -> position in survivors
  for (std::size_t s = 0; s < arr.size(); ++s) {
    if (is_removed[s]) continue;
    const Covector& h = arr.covector(s);
    Covector r(out.ambient_dim + 1, Rational(0));
    for (std::size_t b = 0; b <= out.ambient_dim; ++b)
      for (std::size_t c = 0; c <= n; ++c) r[b] += h[c] * out.basis(b, c);
    if (std::all_of(r.begin(), r.end(), [](const Rational& x) { return is_zero(x); })) {
      out.vanishing.push_back(s);
      continue;
    }
    r = canonical_scale(std::move(r));
    auto [it, inserted] = seen.try_emplace(r, out.survivors.size());
    if (!inserted) {
      out.merged.emplace_back(out.survivors[it->second], s);
      if (out.multiplicities) {
        auto& kept = (*out.multiplicities)[it->second];
        kept = std::min(kept, arr.multiplicities()->at(s));
      }
      continue;
    }
    out.survivors.push_back(s);
    out.covectors.push_back(std::move(r));
    if (out.multiplicities) out.multiplicities->push_back(arr.multiplicities()->at(s));
  }
  return out;
}

bool is_general_position(const Arrangement& arr) {
  return check_linear_general_position(arr).verdict == Verdict::pass &&
         check_quadric_general_position(arr).general;
}

namespace {

bool restricted_subset_is_general(const Restriction& r, const IndexSet& originals) {
  std::vector<Covector> hs;
  for (std::size_t i : originals) {
    auto h = r.covector_of(i);
    if (!h) return false;
    hs.push_back(std::move(*h));
  }
  return is_general_position(Arrangement(r.ambient_dim, std::move(hs)));
}

// Laplace-guided candidate: normalize with the I hyperplanes as the last
// coordinates, so that restricting to their intersection keeps the first
// n' + 1 coordinates. The rows of A_(2) indexed by pairs of kept
// coordinates form the block whose nonzero maximal minor picks the others.
std::optional<IndexSet> laplace_candidate(const Arrangement& arr, const Restriction& r) {
  const std::size_t n = arr.n(), keep = r.ambient_dim + 1;
  IndexSet chosen = r.removed;
  for (std::size_t s : r.survivors) {
    if (chosen.size() == n + 1) break;
    chosen.push_back(s);
    if (rank(arr.matrix(chosen)) < chosen.size()) chosen.pop_back();
  }
  if (chosen.size() != n + 1) return std::nullopt;
  IndexSet pivot(chosen.begin() + static_cast<std::ptrdiff_t>(r.removed.size()), chosen.end());
  pivot.insert(pivot.end(), r.removed.begin(), r.removed.end());

  const NormalizedArrangement na = normalize(arr, pivot);
  const A2Matrix a2 = build_A2(na);
  IndexSet block_rows;
  for (std::size_t row = 0; row < a2.row_pairs.size(); ++row)
    if (a2.row_pairs[row].second < keep) block_rows.push_back(row);
  IndexSet all_cols(na.k());
  for (std::size_t j = 0; j < na.k(); ++j) all_cols[j] = j;
  const RankProfile prof = rank_profile(submatrix(a2.entries, block_rows, all_cols));
  if (prof.rank != block_rows.size()) return std::nullopt;

  IndexSet candidate(pivot.begin(), pivot.begin() + static_cast<std::ptrdiff_t>(keep));
  for (std::size_t j : prof.pivot_cols) candidate.push_back(na.others[j]);
  std::sort(candidate.begin(), candidate.end());
  return candidate;
}

}  // namespace

Selection select_subarrangement(const Arrangement& arr, std::span<const std::size_t> removed,
                                std::uint64_t max_subsets) {
  const std::size_t n = arr.n();
  if (!removed.empty() && removed.size() >= n)
    throw PreconditionError("stratum must satisfy |I| <= n - 1");
  Selection out;
  out.required = binomial(n - removed.size() + 2, 2);

  if (removed.empty()) {
    out.method = "identity";
    if (is_general_position(arr)) {
      out.selected = IndexSet(arr.size());
      for (std::size_t i = 0; i < arr.size(); ++i) (*out.selected)[i] = i;
    }
    return out;
  }

  const Restriction r = restrict_arrangement(arr, removed);
  if (auto cand = laplace_candidate(arr, r)) {
    ++out.subsets_tried;
    if (restricted_subset_is_general(r, *cand)) {
      out.method = "laplace";
      out.selected = std::move(cand);
      return out;
    }
  }

  out.method = "exhaustive";
  const std::size_t s = r.survivors.size();
  if (s >= out.required) {
    IndexSet pos = first_combination(out.required);
    do {
      if (out.subsets_tried >= max_subsets) {
        out.search_capped = true;
        return out;
      }
      ++out.subsets_tried;
      IndexSet originals;
      for (std::size_t p : pos) originals.push_back(r.survivors[p]);
      if (restricted_subset_is_general(r, originals)) {
        out.selected = std::move(originals);
        return out;
      }
    } while (next_combination(pos, s));
  }
  // Valid inputs always admit a selection.
  out.soundness_alarm = is_general_position(arr);
  return out;
}

}  // namespace orbicert
