#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbicert/arrangement.hpp"
#include "orbicert/matrix.hpp"
#include "orbicert/mpoly.hpp"
#include "orbicert/prime_field.hpp"
#include "orbicert/random.hpp"

namespace orbicert {

/// Complete intersection Y in P^{n+k} of Z_{n+j}^m = sum_i a_i^j Z_i^m.
struct FermatCover {
  std::size_t n = 0;
  std::uint32_t m = 2;
  RationalMatrix A;  // k x (n+1)

  std::size_t k() const { return A.rows(); }
  std::size_t N() const { return n + A.rows(); }

  /// Relation j (1-based) in homogeneous variables, lhs - rhs.
  MPoly equation(std::size_t j) const;
};

FermatCover build_cover(std::size_t n, const RationalMatrix& A, std::uint32_t m);
FermatCover build_cover(const NormalizedArrangement& na, std::uint32_t m);

/// Point of Y in the chart z_0 = 1 together with a tangent vector (z_0' = 0).
struct CoverPoint {
  std::vector<Fp> z;   // z_0..z_N
  std::vector<Fp> dz;  // z_0'..z_N'
  bool interior = false;

  std::uint64_t modulus() const { return z.front().modulus(); }
};

inline constexpr std::uint64_t kDefaultSampleBudget = 1000000;

/// Rejection sampler over F_p. Draws z_1..z_n in F_p^*, accepts when every
/// c_j = sum_i a_i^j z_i^m is a nonzero m-th power, and completes the point
/// and a random nonzero tangent from the relations.
class CoverSampler {
 public:
  /// Throws PreconditionError unless p is prime with m | p - 1, or when p
  /// divides a denominator of A.
  CoverSampler(const FermatCover& cov, std::uint64_t p, std::uint64_t seed);

  /// One rejection trial.
  std::optional<CoverPoint> try_once();
  /// Throws SamplingError after `budget` consecutive rejections.
  CoverPoint next(std::uint64_t budget = kDefaultSampleBudget);

  std::uint64_t trials() const { return trials_; }
  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t prime() const { return p_; }

 private:
  FermatCover cov_;
  std::uint64_t p_;
  FpMatrix A_;
  Rng rng_;
  std::uint64_t trials_ = 0;
  std::uint64_t accepted_ = 0;
};

CoverPoint sample_point(const FermatCover& cov, std::uint64_t p, std::uint64_t seed,
                        std::uint64_t budget = kDefaultSampleBudget);

/// Values of the k Fermat relations followed by the k tangent relations.
std::vector<Fp> relation_residuals(const FermatCover& cov, const CoverPoint& pt);
bool satisfies_relations(const FermatCover& cov, const CoverPoint& pt);

/// The k x (N+1) Jacobian of the defining equations at pt.
FpMatrix jacobian(const FermatCover& cov, const CoverPoint& pt);

struct SmoothnessReport {
  bool singular_found = false;
  std::uint64_t samples = 0;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string verdict;
};

/// Probabilistic evidence only. Throws PreconditionError when some a_i^j is
/// zero (the arrangement is then not in linear general position).
SmoothnessReport smoothness_probe(const FermatCover& cov, std::uint64_t p,
                                  std::uint64_t samples, std::uint64_t seed);

struct StandardLines {
  bool exist = false;
  std::vector<IndexSet> witness;  // partition of {0..n+k} when exist
};

/// Partitions of {0..n+k} into r >= 2 blocks of size >= k+1 exist iff
/// k <= n - 1. Requires n, k >= 1.
StandardLines standard_lines_exist(std::size_t n, std::size_t k);

}  // namespace orbicert
