#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orbicert/matrix.hpp"
#include "orbicert/rational.hpp"

namespace orbicert {

using Covector = std::vector<Rational>;
using IndexSet = std::vector<std::size_t>;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Advances a strictly increasing index set to the next r-subset of
/// {0..universe-1} in lexicographic order. Returns false after the last.
bool next_combination(IndexSet& subset, std::size_t universe);

/// Orbifold multiplicity: an integer >= 2 or infinity.
class Multiplicity {
 public:
  static Multiplicity finite(std::uint32_t m);
  static Multiplicity infinite() { return Multiplicity(0); }

  bool is_infinite() const { return value_ == 0; }
  /// Requires a finite multiplicity.
  std::uint32_t value() const;
  /// 1 - 1/m, or 1 for infinity.
  Rational coefficient() const;
  std::string to_string() const;

  /// Infinity compares greater than every finite value.
  std::strong_ordering operator<=>(const Multiplicity& o) const;
  bool operator==(const Multiplicity& o) const = default;

 private:
  explicit Multiplicity(std::uint32_t v) : value_(v) {}
  std::uint32_t value_;
};

/// Scales v so that its first nonzero entry is 1. Throws on the zero vector.
Covector canonical_scale(Covector v);

/// d hyperplanes of P^n, given by covectors up to scale (stored with first
/// nonzero entry 1), with optional orbifold multiplicities.
class Arrangement {
 public:
  Arrangement(std::size_t n, std::vector<Covector> covectors,
              std::optional<std::vector<Multiplicity>> multiplicities = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t size() const { return covectors_.size(); }
  const Covector& covector(std::size_t i) const { return covectors_.at(i); }
  const std::vector<Covector>& covectors() const { return covectors_; }
  bool has_multiplicities() const { return multiplicities_.has_value(); }
  const std::optional<std::vector<Multiplicity>>& multiplicities() const {
    return multiplicities_;
  }

  /// Rows are covectors.
  RationalMatrix matrix() const;
  RationalMatrix matrix(std::span<const std::size_t> rows) const;

  Arrangement subset(std::span<const std::size_t> indices) const;
  Arrangement with_multiplicities(std::vector<Multiplicity> m) const;

 private:
  std::size_t n_;
  std::vector<Covector> covectors_;
  std::optional<std::vector<Multiplicity>> multiplicities_;
};

enum class Verdict { pass, fail, undecided, insufficient };
std::string to_string(Verdict v);

struct LinearCheckMode {
  enum class Kind { exhaustive, randomized };
  Kind kind = Kind::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;

  static LinearCheckMode exhaustive() { return {}; }
  static LinearCheckMode randomized(std::uint64_t seed, std::uint64_t trials) {
    return {Kind::randomized, seed, trials};
  }
};

struct LinearVerdict {
  Verdict verdict = Verdict::undecided;
  std::optional<IndexSet> witness;  // a dependent (n+1)-subset on failure
  std::uint64_t subsets_checked = 0;
  LinearCheckMode mode;
};

/// Every (n+1)-subset of covectors independent. Exhaustive mode certifies;
/// randomized mode can only refute, otherwise it reports undecided.
LinearVerdict check_linear_general_position(
    const Arrangement& arr, LinearCheckMode mode = LinearCheckMode::exhaustive());

/// Index pairs (p <= q) in lexicographic order: the degree-2 monomials
/// x_p x_q of n + 1 variables.
std::vector<std::pair<std::size_t, std::size_t>> quadratic_monomials(std::size_t n);

/// d x binom(n+2, 2) evaluation matrix of the degree-2 monomials at the dual
/// points [H_i].
RationalMatrix veronese_matrix(const Arrangement& arr);

struct QuadricVerdict {
  bool general = false;
  std::size_t rank = 0;
  std::size_t required = 0;
  std::string reason;  // empty when general
};

/// Dual points not all on one quadric: full column rank of the Veronese
/// matrix. Fewer than binom(n+2, 2) hyperplanes always fail ("too few").
QuadricVerdict check_quadric_general_position(const Arrangement& arr);

/// Coordinates in which the pivot hyperplanes are Z_0..Z_n, and the
/// remaining hyperplanes written as H_{n+j} = sum_i a_i^j H_i.
struct NormalizedArrangement {
  Arrangement base;
  IndexSet pivot;          // original indices mapped to Z_0..Z_n, in order
  IndexSet others;         // original indices of H_{n+1}..H_{n+k}
  RationalMatrix change;   // rows = pivot covectors; new coords X = change * Z
  RationalMatrix A;        // k x (n+1), row j-1 = covector of H_{n+j} in X

  std::size_t n() const { return base.n(); }
  std::size_t k() const { return A.rows(); }
};

/// Lexicographically first independent (n+1)-subset, if any.
std::optional<IndexSet> default_pivot(const Arrangement& arr);

/// Throws PreconditionError on a dependent or malformed pivot.
NormalizedArrangement normalize(const Arrangement& arr,
                                std::optional<IndexSet> pivot = std::nullopt);

struct A2Matrix {
  RationalMatrix entries;  // binom(n+1, 2) x k
  std::vector<std::pair<std::size_t, std::size_t>> row_pairs;  // (p < q)
};

/// Entry ((p, q), j) = a_p^j a_q^j.
A2Matrix build_A2(std::size_t n, const RationalMatrix& A);
A2Matrix build_A2(const NormalizedArrangement& na);

/// det A_(2) != 0. Requires d = binom(n+2, 2).
bool a2_equivalence_check(const NormalizedArrangement& na);

/// Survivors of `arr` restricted to the linear space cut out by `removed`,
/// expressed in the basis `basis` of that space (rows of basis are vectors of
/// the ambient space).
struct Restriction {
  IndexSet removed;
  std::size_t ambient_dim = 0;  // n - |removed|
  RationalMatrix basis;         // (ambient_dim + 1) x (n + 1)
  IndexSet survivors;           // original indices, ascending
  std::vector<Covector> covectors;  // canonical, aligned with survivors
  /// Pairs (kept, dropped) of survivors whose restrictions coincide; the
  /// later index is dropped from survivors.
  std::vector<std::pair<std::size_t, std::size_t>> merged;
  /// Survivors containing the whole intersection (restriction is zero).
  IndexSet vanishing;
  /// Aligned with survivors; a merged pair keeps the smaller multiplicity.
  std::optional<std::vector<Multiplicity>> multiplicities;

  Arrangement arrangement() const;
  /// Restricted covector of an original index, if it survived.
  std::optional<Covector> covector_of(std::size_t original) const;
};

/// Throws PreconditionError for repeated/out-of-range indices, |removed| > n,
/// or dependent removed covectors.
Restriction restrict_arrangement(const Arrangement& arr, std::span<const std::size_t> removed);

struct Selection {
  std::optional<IndexSet> selected;  // original indices, ascending
  std::string method;                // "identity", "laplace", "exhaustive"
  std::uint64_t subsets_tried = 0;
  bool search_capped = false;
  bool soundness_alarm = false;
  std::size_t required = 0;          // binom(n - |I| + 2, 2)
};

/// Finds at least binom(n-|I|+2, 2) hyperplanes not in I whose restrictions
/// to the intersection of the H_i (i in I) are in linear and quadric
/// general position there. Guided by a nonzero maximal minor of the block of
/// A_(2) rows avoiding the I coordinates; falls back to exhaustive search.
/// Requires |I| <= n - 1.
Selection select_subarrangement(const Arrangement& arr, std::span<const std::size_t> removed,
                                std::uint64_t max_subsets = 1000000);

/// Both checks at once (linear exhaustive, then quadric).
bool is_general_position(const Arrangement& arr);

}  // namespace orbicert
