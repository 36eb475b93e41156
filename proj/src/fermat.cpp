#include "orbicert/fermat.hpp"

#include <algorithm>

#include "orbicert/error.hpp"

namespace orbicert {

MPoly FermatCover::equation(std::size_t j) const {
  if (j < 1 || j > k()) throw PreconditionError("relation index out of range");
  MPoly f = z(static_cast<std::uint32_t>(n + j)).pow(m);
  for (std::size_t i = 0; i <= n; ++i)
    f -= z(static_cast<std::uint32_t>(i)).pow(m).scale(A(j - 1, i));
  return f;
}

FermatCover build_cover(std::size_t n, const RationalMatrix& A, std::uint32_t m) {
  if (m < 2) throw PreconditionError("cover ramification m must be >= 2");
  if (A.rows() > 0 && A.cols() != n + 1)
    throw PreconditionError("coefficient matrix must have n + 1 columns");
  return FermatCover{n, m, A.rows() > 0 ? A : RationalMatrix(0, n + 1)};
}

FermatCover build_cover(const NormalizedArrangement& na, std::uint32_t m) {
  return build_cover(na.n(), na.A, m);
}

CoverSampler::CoverSampler(const FermatCover& cov, std::uint64_t p, std::uint64_t seed)
    : cov_(cov), p_(p), rng_(seed) {
  if (!is_prime(p)) throw PreconditionError("sampling modulus " + std::to_string(p) + " is not prime");
  if (!root_of_unity_order(p, cov.m))
    throw PreconditionError("prime " + std::to_string(p) + " is not 1 mod m = " +
                            std::to_string(cov.m));
  A_ = reduce_mod_p(cov.A, p);
}

std::optional<CoverPoint> CoverSampler::try_once() {
  ++trials_;
  const std::size_t n = cov_.n, k = cov_.k(), m = cov_.m;
  CoverPoint pt;
  pt.z.assign(n + k + 1, Fp(0, p_));
  pt.dz.assign(n + k + 1, Fp(0, p_));
  pt.z[0] = Fp(1, p_);
  for (std::size_t i = 1; i <= n; ++i) pt.z[i] = rng_.nonzero(p_);

  std::vector<Fp> zm(n + 1), zm1(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    zm1[i] = pt.z[i].pow(m - 1);
    zm[i] = zm1[i] * pt.z[i];
  }
  for (std::size_t j = 0; j < k; ++j) {
    Fp c(0, p_);
    for (std::size_t i = 0; i <= n; ++i) c += A_(j, i) * zm[i];
    if (c.is_zero()) return std::nullopt;
    auto root = mth_root(c, static_cast<std::uint32_t>(m));
    if (!root) return std::nullopt;
    pt.z[n + 1 + j] = *root;
  }

  bool any = false;
  while (!any) {
    for (std::size_t i = 1; i <= n; ++i) {
      pt.dz[i] = rng_.uniform(p_);
      any = any || !pt.dz[i].is_zero();
    }
    if (n == 0) break;
  }
  for (std::size_t j = 0; j < k; ++j) {
    Fp s(0, p_);
    for (std::size_t i = 1; i <= n; ++i) s += A_(j, i) * zm1[i] * pt.dz[i];
    pt.dz[n + 1 + j] = s / pt.z[n + 1 + j].pow(m - 1);
  }
  pt.interior = true;
  ++accepted_;
  return pt;
}

CoverPoint CoverSampler::next(std::uint64_t budget) {
  for (std::uint64_t t = 0; t < budget; ++t)
    if (auto pt = try_once()) return *pt;
  throw SamplingError("no cover point found within " + std::to_string(budget) + " trials");
}

CoverPoint sample_point(const FermatCover& cov, std::uint64_t p, std::uint64_t seed,
                        std::uint64_t budget) {
  CoverSampler s(cov, p, seed);
  return s.next(budget);
}

std::vector<Fp> relation_residuals(const FermatCover& cov, const CoverPoint& pt) {
  const std::uint64_t p = pt.modulus();
  const std::size_t n = cov.n, k = cov.k();
  if (pt.z.size() != n + k + 1 || pt.dz.size() != n + k + 1)
    throw PreconditionError("cover point has the wrong number of coordinates");
  const FpMatrix A = reduce_mod_p(cov.A, p);
  std::vector<Fp> out;
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t e = n + 1 + j;
      Fp r = t == 0 ? pt.z[e].pow(cov.m) : pt.z[e].pow(cov.m - 1) * pt.dz[e];
      for (std::size_t i = 0; i <= n; ++i)
        r -= A(j, i) * (t == 0 ? pt.z[i].pow(cov.m) : pt.z[i].pow(cov.m - 1) * pt.dz[i]);
      out.push_back(r);
    }
  return out;
}

bool satisfies_relations(const FermatCover& cov, const CoverPoint& pt) {
  auto r = relation_residuals(cov, pt);
  return std::all_of(r.begin(), r.end(), [](const Fp& x) { return x.is_zero(); });
}

FpMatrix jacobian(const FermatCover& cov, const CoverPoint& pt) {
  const std::uint64_t p = pt.modulus();
  const std::size_t n = cov.n, k = cov.k();
  const FpMatrix A = reduce_mod_p(cov.A, p);
  const Fp m(cov.m, p);
  FpMatrix J(k, n + k + 1, Fp(0, p));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i <= n; ++i) J(j, i) = -(m * A(j, i) * pt.z[i].pow(cov.m - 1));
    J(j, n + 1 + j) = m * pt.z[n + 1 + j].pow(cov.m - 1);
  }
  return J;
}

SmoothnessReport smoothness_probe(const FermatCover& cov, std::uint64_t p,
                                  std::uint64_t samples, std::uint64_t seed) {
  for (std::size_t j = 0; j < cov.k(); ++j)
    for (std::size_t i = 0; i <= cov.n; ++i)
      if (is_zero(cov.A(j, i)))
        throw PreconditionError("arrangement not in linear general position: a_" +
                                std::to_string(i) + "^" + std::to_string(j + 1) + " = 0");
  SmoothnessReport out;
  out.prime = p;
  out.seed = seed;
  if (cov.k() == 0) {
    out.verdict = "no singular point found (k = 0, vacuous)";
    return out;
  }
  CoverSampler sampler(cov, p, seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const CoverPoint pt = sampler.next();
    ++out.samples;
    if (rank(jacobian(cov, pt)) < cov.k()) {
      out.singular_found = true;
      break;
    }
  }
  out.trials = sampler.trials();
  out.verdict = out.singular_found
                    ? "singular point found"
                    : "no singular point found in " + std::to_string(out.samples) + " samples";
  return out;
}

StandardLines standard_lines_exist(std::size_t n, std::size_t k) {
  if (n < 1 || k < 1) throw PreconditionError("standard lines need n >= 1 and k >= 1");
  StandardLines out;
  if (k + 1 > n) return out;
  out.exist = true;
  IndexSet first, second;
  for (std::size_t i = 0; i <= k; ++i) first.push_back(i);
  for (std::size_t i = k + 1; i <= n + k; ++i) second.push_back(i);
  out.witness = {first, second};
  return out;
}

}  // namespace orbicert
