#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbicert/arrangement.hpp"
#include "orbicert/text_format.hpp"

namespace orbicert {

struct Thresholds {
  std::size_t n = 0;
  std::uint64_t d_quadric = 0;  // binom(n+2, 2)
  std::uint64_t m_min = 0;      // 2n + 2
  std::optional<std::uint32_t> m;
  std::optional<Rational> d_big_exact;  // 2n (2n/(m-2) + 1)
  std::optional<std::uint64_t> d_big;   // its ceiling
  std::uint64_t component_floor = 0;    // fewer than n components are never big
};

/// Requires n >= 2, and m >= 3 when m is given.
Thresholds thresholds(std::size_t n, std::optional<std::uint32_t> m = std::nullopt);
Json to_json(const Thresholds& t);

/// Intersection X_I of the hyperplanes in I with its induced arrangement.
struct Stratum {
  IndexSet removed;
  std::size_t ambient_dim = 0;
  Restriction restriction;
  std::vector<std::string> warnings;

  Arrangement induced() const { return restriction.arrangement(); }
};

Stratum restrict_to_stratum(const Arrangement& arr, std::span<const std::size_t> removed);

enum class CertVerdict { pass, fail, evidence_only, incomplete };
std::string to_string(CertVerdict v);

struct Provenance {
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
};

/// One check record. Advisory nodes (sampled evidence) never change the
/// verdict of their parent.
struct CertNode {
  std::string name;
  Json inputs = Json::object();
  CertVerdict verdict = CertVerdict::pass;
  Json witnesses = Json::object();
  std::optional<Provenance> provenance;
  bool advisory = false;
  std::vector<CertNode> children;

  /// Combines own verdict with non-advisory children: any fail gives fail,
  /// otherwise any incomplete gives incomplete.
  void aggregate();
  Json to_json() const;
};

struct CertifyOptions {
  bool with_evidence = false;
  std::optional<std::uint64_t> prime;  // default: default_prime(m) per stratum
  std::uint64_t samples = 100;
  std::uint64_t seed = 0;
  std::uint64_t max_strata = 10000;
};

struct Certificate {
  CertNode root;
  std::vector<std::string> implied_conclusions;  // not mechanically checked

  CertVerdict verdict() const { return root.verdict; }
  int exit_code() const;
  Json to_json() const;
  std::string serialize() const { return canonical_dump(to_json()); }
};

/// Strata |I| = 0..n-1 in lexicographic order; for each: subarrangement
/// selection, induced-size and multiplicity thresholds (lowest multiplicity
/// of the selected hyperplanes; infinity passes), general position of the
/// selection, and optional sampled base-locus evidence (advisory). Requires
/// multiplicities on the arrangement.
Certificate certify_hyperbolicity(const Arrangement& arr, const CertifyOptions& opts = {});

}  // namespace orbicert
