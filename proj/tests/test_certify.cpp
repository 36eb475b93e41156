#include "doctest.h"

#include "orbicert/certify.hpp"
#include "orbicert/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace orbicert;
using namespace orbicert::testing;

namespace {

Arrangement with_all(const Arrangement& a, Multiplicity m) {
  return a.with_multiplicities(std::vector<Multiplicity>(a.size(), m));
}

const CertNode* child(const CertNode& node, const std::string& name) {
  for (const auto& c : node.children)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("thresholds") {
  const Thresholds t2 = thresholds(2);
  CHECK(t2.d_quadric == 6);
  CHECK(t2.m_min == 6);
  CHECK_FALSE(t2.d_big.has_value());
  CHECK(thresholds(3).d_quadric == 10);
  CHECK(thresholds(3).m_min == 8);
  const Thresholds b = thresholds(2, 3);
  CHECK(*b.d_big_exact == 20);
  CHECK(*b.d_big == 20);
  CHECK(*thresholds(2, 5).d_big_exact == Rational(28, 3));
  CHECK(*thresholds(2, 5).d_big == 10);
  CHECK_THROWS_AS(thresholds(1), PreconditionError);
  CHECK_THROWS_AS(thresholds(2, 2), PreconditionError);
  const Json j = to_json(thresholds(2, 3));
  CHECK(j["d_big"] == 20);
  CHECK(j["d_big_exact"] == "20");
}

TEST_CASE("bigness bound is nonincreasing in m") {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::uint64_t prev = *thresholds(n, 3).d_big;
    for (std::uint32_t m = 4; m <= 50; ++m) {
      const std::uint64_t cur = *thresholds(n, m).d_big;
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("strata restrictions") {
  const Arrangement a = noguchi_arrangement();
  const Stratum all = restrict_to_stratum(a, IndexSet{});
  CHECK(all.ambient_dim == 2);
  CHECK(all.induced().covectors() == a.covectors());

  std::vector<Covector> hs{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 5}, {3, 1, 7}};
  const Stratum s = restrict_to_stratum(Arrangement(2, hs), IndexSet{0});
  CHECK(s.ambient_dim == 1);
  for (std::size_t i = 1; i < hs.size(); ++i)
    CHECK(*s.restriction.covector_of(i) == canonical_scale({hs[i][1], hs[i][2]}));

  Rng rng(81);
  const Arrangement b = random_general_arrangement(3, 10, rng);
  const Stratum line = restrict_to_stratum(b, IndexSet{2, 7});
  CHECK(line.ambient_dim == 1);
  const Arrangement ind = line.induced();
  CHECK(ind.size() >= 3);
  CHECK(check_linear_general_position(ind).verdict == Verdict::pass);
}

TEST_CASE("Noguchi instance certifies") {
  const Certificate c = certify_hyperbolicity(with_all(noguchi_arrangement(), Multiplicity::finite(6)));
  CHECK(c.verdict() == CertVerdict::pass);
  CHECK(c.exit_code() == 0);
  CHECK(c.root.children.size() == 7);
  CHECK(c.root.witnesses["strata_examined"] == 7);
  CHECK(c.root.witnesses["strata_total"] == 7);
  for (const auto& s : c.root.children) {
    CHECK(s.verdict == CertVerdict::pass);
    REQUIRE(child(s, "thresholds") != nullptr);
    REQUIRE(child(s, "general_position") != nullptr);
    REQUIRE(child(s, "subarrangement_selection") != nullptr);
  }
  const Json j = c.to_json();
  CHECK(j["verdict"] == "pass");
  CHECK(j["implied_conclusions"]["mechanically_checked"] == false);
  CHECK_FALSE(j["implied_conclusions"]["statements"].empty());
}

TEST_CASE("lowering one multiplicity fails at the top stratum") {
  std::vector<Multiplicity> ms(6, Multiplicity::finite(6));
  ms[3] = Multiplicity::finite(5);
  const Certificate c = certify_hyperbolicity(noguchi_arrangement().with_multiplicities(ms));
  CHECK(c.verdict() == CertVerdict::fail);
  CHECK(c.exit_code() == 1);
  const Json& f = c.root.witnesses["first_failure"];
  CHECK(f["removed"] == Json::array());
  CHECK(f["check"] == "thresholds");
  CHECK(f["details"]["lowest_index"] == 3);
  CHECK(f["details"]["lowest_multiplicity"] == 5);
  CHECK(c.implied_conclusions.empty());
  CHECK(c.to_json()["implied_conclusions"]["statements"].empty());
}

TEST_CASE("infinite multiplicities pass the multiplicity threshold") {
  std::vector<Multiplicity> ms(6, Multiplicity::infinite());
  ms[0] = Multiplicity::finite(7);
  const Certificate c = certify_hyperbolicity(noguchi_arrangement().with_multiplicities(ms));
  CHECK(c.verdict() == CertVerdict::pass);
}

TEST_CASE("too few hyperplanes") {
  const Arrangement five = noguchi_arrangement().subset(IndexSet{0, 1, 2, 3, 4});
  const Certificate c = certify_hyperbolicity(with_all(five, Multiplicity::finite(6)));
  CHECK(c.verdict() == CertVerdict::fail);
  const std::string reason = c.root.witnesses["first_failure"]["details"]["reason"];
  CHECK(reason.find("too few hyperplanes") != std::string::npos);
}

TEST_CASE("dual points on a conic fail general position") {
  const Certificate c =
      certify_hyperbolicity(with_all(dual_conic_arrangement(), Multiplicity::finite(6)));
  CHECK(c.verdict() == CertVerdict::fail);
  CHECK(c.root.witnesses["first_failure"]["removed"] == Json::array());
}

TEST_CASE("missing multiplicities are rejected") {
  CHECK_THROWS_AS(certify_hyperbolicity(noguchi_arrangement()), PreconditionError);
}

TEST_CASE("stratum count and enumeration cap") {
  Rng rng(91);
  const Arrangement a = with_all(random_general_arrangement(3, 10, rng), Multiplicity::finite(8));
  const Certificate full = certify_hyperbolicity(a);
  CHECK(full.root.witnesses["strata_total"] == 1 + 10 + 45);
  CHECK(full.root.witnesses["strata_examined"] == 56);
  CHECK(full.verdict() == CertVerdict::pass);

  CertifyOptions opts;
  opts.max_strata = 20;
  const Certificate capped = certify_hyperbolicity(a, opts);
  CHECK(capped.verdict() == CertVerdict::incomplete);
  CHECK(capped.exit_code() == 3);
  CHECK(capped.root.witnesses["strata_examined"] == 20);
  CHECK(capped.implied_conclusions.empty());
}

TEST_CASE("adding a general hyperplane keeps the top stratum thresholds") {
  Rng rng(101);
  for (int t = 0; t < 5; ++t) {
    const Arrangement a = random_general_arrangement(2, 6 + t % 2, rng);
    Arrangement b = a;
    for (;;) {
      std::vector<Covector> hs = a.covectors();
      hs.push_back(random_arrangement(2, 1, rng).covector(0));
      b = Arrangement(2, hs);
      if (is_general_position(b)) break;
    }
    const Certificate ca = certify_hyperbolicity(with_all(a, Multiplicity::finite(6)));
    const Certificate cb = certify_hyperbolicity(with_all(b, Multiplicity::finite(6)));
    const CertNode* ta = child(ca.root.children.front(), "thresholds");
    const CertNode* tb = child(cb.root.children.front(), "thresholds");
    REQUIRE(ta);
    REQUIRE(tb);
    if (ta->verdict == CertVerdict::pass) CHECK(tb->verdict == CertVerdict::pass);
  }
}

TEST_CASE("certificates are deterministic and seed-stamped") {
  const Arrangement a = with_all(noguchi_arrangement(), Multiplicity::finite(6));
  CertifyOptions opts;
  opts.with_evidence = true;
  opts.samples = 30;
  opts.seed = 11;
  const std::string s1 = certify_hyperbolicity(a, opts).serialize();
  const std::string s2 = certify_hyperbolicity(a, opts).serialize();
  CHECK(s1 == s2);
  opts.seed = 12;
  const Certificate other = certify_hyperbolicity(a, opts);
  CHECK(other.serialize() != s1);
  CHECK(other.verdict() == CertVerdict::pass);

  const CertNode* ev = child(other.root.children.front(), "baselocus_evidence");
  REQUIRE(ev != nullptr);
  CHECK(ev->advisory);
  REQUIRE(ev->provenance.has_value());
  CHECK(ev->provenance->prime == default_prime(6));
  CHECK(ev->provenance->seed == 12);
  CHECK(ev->verdict == CertVerdict::evidence_only);
  CHECK(s1.back() == '\n');
}

TEST_CASE("advisory evidence never changes the verdict") {
  // m = 5 on a line stratum is below the evidence twist bound but the stratum
  // threshold for P^1 is 4; the advisory node may fail without effect.
  std::vector<Multiplicity> ms(6, Multiplicity::finite(6));
  const Arrangement a = noguchi_arrangement().with_multiplicities(ms);
  CertifyOptions opts;
  opts.with_evidence = true;
  opts.samples = 5;
  opts.seed = 1;
  const Certificate with = certify_hyperbolicity(a, opts);
  const Certificate without = certify_hyperbolicity(a);
  CHECK(with.verdict() == without.verdict());

  CertNode node;
  node.name = "stratum";
  CertNode bad;
  bad.name = "baselocus_evidence";
  bad.advisory = true;
  bad.verdict = CertVerdict::fail;
  node.children.push_back(bad);
  node.aggregate();
  CHECK(node.verdict == CertVerdict::pass);
  CertNode hard;
  hard.verdict = CertVerdict::incomplete;
  node.children.push_back(hard);
  node.aggregate();
  CHECK(node.verdict == CertVerdict::incomplete);
  CertNode failing;
  failing.verdict = CertVerdict::fail;
  node.children.push_back(failing);
  node.aggregate();
  CHECK(node.verdict == CertVerdict::fail);
}
