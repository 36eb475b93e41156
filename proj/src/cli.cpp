#include "orbicert/cli.hpp"

#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "orbicert/arrangement.hpp"
#include "orbicert/certify.hpp"
#include "orbicert/differentials.hpp"
#include "orbicert/error.hpp"
#include "orbicert/fermat.hpp"
#include "orbicert/text_format.hpp"

namespace orbicert {

namespace {

struct RunConfig {
  std::string input, output;
  bool quadrics = false, exhaustive = false, randomized = false;
  bool exact = false, sampled = false, with_evidence = false;
  std::optional<std::uint64_t> seed, trials, prime, samples;
  std::uint64_t max_strata = 10000;
  std::uint32_t m = 0;
  std::size_t n = 0, k = 0, chart = 0;
  std::optional<std::uint32_t> m_opt;
  std::vector<std::size_t> rows, pivot;
  int verbosity = 0;
};

std::string join(const IndexSet& s, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? sep : "") + std::to_string(s[i]);
  return out;
}

void emit(const RunConfig& cfg, const Json& report, std::ostream& out) {
  if (!cfg.output.empty()) {
    write_text_file(cfg.output, canonical_dump(report));
    out << "wrote " << cfg.output << "\n";
  }
}

FermatCover cover_from_input(const RunConfig& cfg, NormalizedArrangement* na_out = nullptr) {
  const Arrangement arr = read_arrangement(cfg.input);
  NormalizedArrangement na = normalize(arr);
  FermatCover cov = build_cover(na, cfg.m);
  if (na_out) *na_out = std::move(na);
  return cov;
}

IndexSet rows_or_default(const RunConfig& cfg, const FermatCover& cov) {
  return cfg.rows.empty() ? default_rows(cov) : IndexSet(cfg.rows.begin(), cfg.rows.end());
}

std::uint64_t prime_for(const RunConfig& cfg, std::uint32_t m, Json& report, std::ostream& out) {
  const std::uint64_t p = cfg.prime ? *cfg.prime : default_prime(m);
  report["prime"] = p;
  report["prime_defaulted"] = !cfg.prime;
  out << "prime " << p << (cfg.prime ? "" : " (default)") << "\n";
  return p;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const Arrangement arr = read_arrangement(cfg.input);
  const LinearCheckMode mode = cfg.randomized ? LinearCheckMode::randomized(*cfg.seed, *cfg.trials)
                                              : LinearCheckMode::exhaustive();
  const LinearVerdict lin = check_linear_general_position(arr, mode);
  Json report = {{"input_sha256", sha256_hex(canonical_dump(to_json(arr)))},
                 {"n", arr.n()},
                 {"d", arr.size()},
                 {"linear",
                  {{"mode", cfg.randomized ? "randomized" : "exhaustive"},
                   {"verdict", to_string(lin.verdict)},
                   {"subsets_checked", lin.subsets_checked}}}};
  if (cfg.randomized) {
    report["linear"]["seed"] = *cfg.seed;
    report["linear"]["trials"] = *cfg.trials;
  }
  if (lin.witness) report["linear"]["witness"] = *lin.witness;
  out << "linear general position (" << (cfg.randomized ? "randomized" : "exhaustive")
      << "): " << to_string(lin.verdict);
  if (lin.witness) out << ", dependent subset {" << join(*lin.witness) << "}";
  out << "\n";

  int code = lin.verdict == Verdict::pass        ? kExitPass
             : lin.verdict == Verdict::undecided ? kExitIncomplete
                                                 : kExitFail;
  if (cfg.quadrics) {
    const QuadricVerdict q = check_quadric_general_position(arr);
    report["quadric"] = {{"verdict", q.general ? "pass" : "fail"},
                         {"veronese_rank", q.rank},
                         {"required", q.required}};
    if (!q.general) report["quadric"]["reason"] = q.reason;
    out << "quadric general position: " << (q.general ? "pass" : "fail");
    if (!q.general) out << " (" << q.reason << ")";
    out << "\n";
    if (!q.general) code = kExitFail;
  }
  emit(cfg, report, out);
  return code;
}

int cmd_normalize(const RunConfig& cfg, std::ostream& out) {
  const Arrangement arr = read_arrangement(cfg.input);
  std::optional<IndexSet> pivot;
  if (!cfg.pivot.empty()) pivot = IndexSet(cfg.pivot.begin(), cfg.pivot.end());
  const NormalizedArrangement na = normalize(arr, pivot);
  out << "pivot {" << join(na.pivot) << "}, k = " << na.k() << "\n";
  for (std::size_t j = 0; j < na.k(); ++j) {
    out << "H_" << na.n() + 1 + j << " (input " << na.others[j] << ") =";
    for (std::size_t i = 0; i <= na.n(); ++i) out << " " << to_string(na.A(j, i));
    out << "\n";
  }
  emit(cfg, to_json(na), out);
  return kExitPass;
}

int cmd_cover(const RunConfig& cfg, std::ostream& out) {
  const FermatCover cov = cover_from_input(cfg);
  Json report = to_json(cov);
  out << "Fermat cover: n = " << cov.n << ", k = " << cov.k() << ", m = " << cov.m
      << ", in P^" << cov.N() << "\n";
  for (std::size_t j = 1; j <= cov.k(); ++j) out << "  " << to_string(cov.equation(j)) << " = 0\n";
  int code = kExitPass;
  if (cfg.seed) {
    const std::uint64_t p = prime_for(cfg, cov.m, report, out);
    const SmoothnessReport s = smoothness_probe(cov, p, cfg.samples.value_or(100), *cfg.seed);
    report["smoothness"] = {{"verdict", s.verdict}, {"samples", s.samples}, {"seed", s.seed},
                            {"trials", s.trials}, {"singular_found", s.singular_found}};
    out << "smoothness probe: " << s.verdict << " (seed " << s.seed << ", trials " << s.trials
        << ")\n";
    if (s.singular_found) code = kExitFail;
  }
  emit(cfg, report, out);
  return code;
}

int cmd_differential(const RunConfig& cfg, std::ostream& out) {
  const FermatCover cov = cover_from_input(cfg);
  const IndexSet rows = rows_or_default(cfg, cov);
  const MPoly sigma = generate_sigma(cov, rows, cfg.chart);
  const std::int64_t twist = 2 * static_cast<std::int64_t>(cov.n) + 1 - cov.m;
  out << "sigma on chart Z_" << cfg.chart << " (rows {" << join(rows) << "}), twist Z_"
      << cfg.chart << "^" << twist << ":\n  " << to_string(sigma) << "\n";
  emit(cfg,
       {{"cover", to_json(cov)},
        {"rows", rows},
        {"chart", cfg.chart},
        {"twist_exponent", twist},
        {"symmetric_degree", cov.n},
        {"expression", to_json(sigma)},
        {"pretty", to_string(sigma)}},
       out);
  return kExitPass;
}

int cmd_verify_identities(const RunConfig& cfg, std::ostream& out) {
  const FermatCover cov = cover_from_input(cfg);
  const IndexSet rows = rows_or_default(cfg, cov);
  Json report = {{"cover", to_json(cov)}, {"rows", rows}};
  bool ok = true;
  auto line = [&](const std::string& what, bool pass) {
    out << (pass ? "PASS " : "FAIL ") << what << "\n";
    ok = ok && pass;
    return pass;
  };

  if (!cfg.sampled) {
    report["mode"] = "exact";
    const TwistedSection sec = generate_section(cov, rows);
    report["cramer_annihilation"] = line("cramer annihilation", verify_cramer_annihilation(cov, rows));
    Json charts = Json::object();
    for (std::size_t c = 1; c <= cov.N(); ++c)
      charts[std::to_string(c)] = line("chart compatibility (0," + std::to_string(c) + ")",
                                       verify_chart_compatibility(sec, 0, c));
    report["chart_compatibility"] = charts;
    const CoverIdealRewriter rw = chart_rewriter(cov, 0);
    const auto res = bw_residuals(cov);
    Json bw = Json::array();
    for (std::size_t j = 0; j < res.size(); ++j)
      for (std::size_t i = 0; i < res[j].size(); ++i) {
        const bool pass = rw.is_zero_mod_ideal(res[j][i]);
        bw.push_back({{"j", j + 1}, {"i1", i}, {"pass", pass}});
        line("BW factorization (j=" + std::to_string(j + 1) + ", i1=" + std::to_string(i) + ")",
             pass);
      }
    report["bw_factorization"] = bw;
    Json ev = Json::object();
    for (std::size_t c2 : {std::size_t{1}, cov.n + 1}) {
      if (c2 > cov.N()) continue;
      const std::uint32_t e = extra_vanishing_order(sec, 0, c2);
      ev["0," + std::to_string(c2)] = e;
      line("extra vanishing (0," + std::to_string(c2) + ") = " + std::to_string(e) +
               " (m-1 = " + std::to_string(cov.m - 1) + ")",
           e == cov.m - 1);
    }
    report["extra_vanishing"] = ev;
  } else {
    report["mode"] = "sampled";
    const std::uint64_t p = prime_for(cfg, cov.m, report, out);
    const std::uint64_t samples = cfg.samples.value_or(100);
    report["seed"] = *cfg.seed;
    report["samples"] = samples;
    CoverSampler sampler(cov, p, *cfg.seed);
    const TwistedSection sec = generate_section(cov, rows);
    const auto res = bw_residuals(cov);
    std::uint64_t rel_bad = 0, bw_bad = 0, cramer_bad = 0;
    const PolyMatrix M = cramer_matrix(cov, rows);
    for (std::uint64_t s = 0; s < samples; ++s) {
      const CoverPoint pt = sampler.next();
      if (!satisfies_relations(cov, pt)) ++rel_bad;
      for (const auto& row : res)
        for (const auto& r : row)
          if (!evaluate(r, pt.z, pt.dz).is_zero()) ++bw_bad;
      for (const auto& row : M) {
        Fp sum(0, p);
        for (std::size_t i = 0; i <= cov.n; ++i)
          sum += evaluate(row[i], pt.z, pt.dz) * pt.z[i].pow(cov.m - 1);
        if (!sum.is_zero()) ++cramer_bad;
      }
    }
    report["trials"] = sampler.trials();
    report["relation_failures"] = rel_bad;
    report["bw_failures"] = bw_bad;
    report["cramer_failures"] = cramer_bad;
    line("cover relations at sampled points", rel_bad == 0);
    line("cramer annihilation at sampled points", cramer_bad == 0);
    line("BW factorization at sampled points", bw_bad == 0);
    Json charts = Json::object();
    for (std::size_t c = 1; c <= cov.N(); ++c) {
      const auto rep = sampled_chart_check(sec, c, p, samples, *cfg.seed + c);
      charts[std::to_string(c)] = {{"mismatches", rep.mismatches}, {"seed", *cfg.seed + c}};
      line("chart compatibility (0," + std::to_string(c) + ") at sampled points",
           rep.mismatches == 0);
    }
    report["chart_compatibility"] = charts;
    out << "seed " << *cfg.seed << ", samples " << samples << ", trials " << sampler.trials()
        << "\n";
  }
  report["verdict"] = ok ? "pass" : "fail";
  emit(cfg, report, out);
  return ok ? kExitPass : kExitFail;
}

int cmd_baselocus(const RunConfig& cfg, std::ostream& out) {
  const FermatCover cov = cover_from_input(cfg);
  Json report = {{"cover", to_json(cov)}};
  const std::uint64_t p = prime_for(cfg, cov.m, report, out);
  const std::uint64_t samples = cfg.samples.value_or(1000);
  const BaseLocusReport rep = baselocus_evidence(cov, p, samples, *cfg.seed);
  report.update({{"seed", rep.seed},
                 {"samples", rep.samples},
                 {"trials", rep.trials},
                 {"bw_exact", rep.bw_exact},
                 {"bound_certified", rep.bound_certified},
                 {"rank_equal", rep.rank_equal},
                 {"counterexamples", rep.counterexamples},
                 {"statement", rep.statement},
                 {"verdict", rep.passed() ? "evidence-only" : "fail"}});
  if (rep.precondition_failure) {
    report["precondition_failure"] = *rep.precondition_failure;
    out << "precondition failure: " << *rep.precondition_failure << "\n";
    emit(cfg, report, out);
    return kExitInputError;
  }
  if (rep.first_witness) {
    Json rows = Json::array();
    for (const auto& [a, b] : rep.first_witness->rows) rows.push_back({a, b});
    report["first_witness"] = {{"rows", rows},
                               {"cols", rep.first_witness->cols},
                               {"minor", rep.first_witness->minor.value()}};
  }
  out << "B-W factorization (exact): " << (rep.bw_exact ? "pass" : "fail") << "\n"
      << "rank W >= " << cov.n << " certified at " << rep.bound_certified << "/" << rep.samples
      << " points, rank B = rank W at " << rep.rank_equal << "/" << rep.samples << "\n"
      << "seed " << rep.seed << ", trials " << rep.trials << "\n"
      << rep.statement << "\n";
  emit(cfg, report, out);
  return rep.passed() ? kExitPass : kExitFail;
}

int cmd_standard_lines(const RunConfig& cfg, std::ostream& out) {
  const StandardLines s = standard_lines_exist(cfg.n, cfg.k);
  Json report = {{"n", cfg.n}, {"k", cfg.k}, {"exist", s.exist}};
  if (s.exist) {
    std::string w;
    for (std::size_t b = 0; b < s.witness.size(); ++b)
      w += (b ? "|" : "") + ("{" + join(s.witness[b]) + "}");
    report["witness"] = s.witness;
    out << "standard lines exist, witness partition " << w << "\n";
  } else {
    out << "none exist (k >= n)\n";
  }
  emit(cfg, report, out);
  return kExitPass;
}

int cmd_thresholds(const RunConfig& cfg, std::ostream& out) {
  const Thresholds t = thresholds(cfg.n, cfg.m_opt);
  out << "d_quadric=" << t.d_quadric << "\nm_min=" << t.m_min << "\n";
  if (t.d_big)
    out << "d_big=" << *t.d_big << " (exact " << to_string(*t.d_big_exact) << ")\n";
  out << "component_floor=" << t.component_floor << "\n";
  emit(cfg, to_json(t), out);
  return kExitPass;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  const Arrangement arr = read_arrangement(cfg.input);
  if (!arr.multiplicities()) throw InputError("certify needs a \"multiplicities\" field");
  CertifyOptions opts;
  opts.with_evidence = cfg.with_evidence;
  opts.prime = cfg.prime;
  opts.samples = cfg.samples.value_or(100);
  opts.seed = cfg.seed.value_or(0);
  opts.max_strata = cfg.max_strata;
  const Certificate cert = certify_hyperbolicity(arr, opts);
  const Json& w = cert.root.witnesses;
  out << "certificate verdict: " << to_string(cert.verdict()) << "\n"
      << "strata examined: " << w["strata_examined"] << " of " << w["strata_total"] << "\n";
  if (w.contains("first_failure")) out << "first failure: " << w["first_failure"].dump() << "\n";
  if (!cfg.output.empty()) {
    write_text_file(cfg.output, cert.serialize());
    out << "wrote " << cfg.output << "\n";
  }
  return cert.exit_code();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification toolkit for hyperplane arrangements, Fermat covers and "
               "their explicit symmetric differentials"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_flag("-v,--verbose", cfg.verbosity, "Increase verbosity");

  auto input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Arrangement file")->required()->check(CLI::ExistingFile);
  };
  auto output = [&](CLI::App* sub, bool required = false) {
    auto* o = sub->add_option("--output", cfg.output, "Write the report to this file");
    if (required) o->required();
  };

  auto* check = app.add_subcommand("check", "Linear (and quadric) general position");
  input(check);
  output(check);
  check->add_flag("--quadrics", cfg.quadrics, "Also check general position with respect to quadrics");
  auto* ex = check->add_flag("--exhaustive", cfg.exhaustive, "Check every (n+1)-subset (default)");
  auto* rnd = check->add_flag("--randomized", cfg.randomized, "Monte Carlo over subsets");
  auto* cseed = check->add_option("--seed", cfg.seed, "Random seed");
  auto* ctrials = check->add_option("--trials", cfg.trials, "Number of random subsets");
  ex->excludes(rnd);
  rnd->needs(cseed)->needs(ctrials);

  auto* norm = app.add_subcommand("normalize", "Coordinates with pivot hyperplanes as Z_0..Z_n");
  input(norm);
  output(norm);
  norm->add_option("--pivot", cfg.pivot, "n+1 pivot indices")->delimiter(',');

  auto* cover = app.add_subcommand("cover", "Fermat cover of an arrangement");
  input(cover);
  output(cover);
  cover->add_option("--m", cfg.m, "Ramification m >= 2")->required();
  cover->add_option("--prime", cfg.prime, "Prime for the smoothness probe");
  cover->add_option("--samples", cfg.samples, "Smoothness probe samples (default 100)");
  cover->add_option("--seed", cfg.seed, "Seed; enables the smoothness probe");

  auto* diff = app.add_subcommand("differential", "Chart expression of the explicit differential");
  input(diff);
  output(diff);
  diff->add_option("--m", cfg.m, "Ramification m >= 2")->required();
  diff->add_option("--rows", cfg.rows, "Row indices j_1..j_n in n+1..N")->delimiter(',');
  diff->add_option("--chart", cfg.chart, "Chart index 0..N")->default_val(0);

  auto* ver = app.add_subcommand("verify-identities", "Cramer, chart and B-W identities");
  input(ver);
  output(ver);
  ver->add_option("--m", cfg.m, "Ramification m >= 2")->required();
  ver->add_option("--rows", cfg.rows, "Row indices j_1..j_n")->delimiter(',');
  auto* vex = ver->add_flag("--exact", cfg.exact, "Exact reduction modulo the cover ideal (default)");
  auto* vs = ver->add_flag("--sampled", cfg.sampled, "Evaluation at sampled points over F_p");
  ver->add_option("--prime", cfg.prime, "Prime with m | p-1 (default: smallest >= 2^20)");
  ver->add_option("--samples", cfg.samples, "Number of points (default 100)");
  auto* vseed = ver->add_option("--seed", cfg.seed, "Random seed");
  vex->excludes(vs);
  vs->needs(vseed);

  auto* base = app.add_subcommand("baselocus-sample", "Sampled rank evidence for the base-locus theorem");
  input(base);
  output(base);
  base->add_option("--m", cfg.m, "Ramification m")->required();
  base->add_option("--prime", cfg.prime, "Prime with m | p-1 (default: smallest >= 2^20)");
  base->add_option("--samples", cfg.samples, "Number of points (default 1000)");
  base->add_option("--seed", cfg.seed, "Random seed")->required();

  auto* sl = app.add_subcommand("standard-lines", "Existence of standard lines");
  sl->add_option("--n", cfg.n, "Dimension n >= 1")->required();
  sl->add_option("--k", cfg.k, "Number of Fermat equations k >= 1")->required();
  output(sl);

  auto* th = app.add_subcommand("thresholds", "Numeric thresholds");
  th->add_option("--n", cfg.n, "Dimension n >= 2")->required();
  th->add_option("--m", cfg.m_opt, "Multiplicity m >= 3 for the bigness bound");
  output(th);

  auto* cert = app.add_subcommand("certify", "Stratified hyperbolicity certificate");
  input(cert);
  output(cert, true);
  auto* we = cert->add_flag("--with-evidence", cfg.with_evidence, "Attach sampled base-locus evidence");
  cert->add_option("--prime", cfg.prime, "Prime for evidence (default per stratum)");
  cert->add_option("--samples", cfg.samples, "Evidence points per stratum (default 100)");
  auto* ceseed = cert->add_option("--seed", cfg.seed, "Random seed");
  cert->add_option("--max-strata", cfg.max_strata, "Stratum enumeration limit")->default_val(10000);
  we->needs(ceseed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInputError;
  }

  try {
    if (*check) return cmd_check(cfg, out);
    if (*norm) return cmd_normalize(cfg, out);
    if (*cover) return cmd_cover(cfg, out);
    if (*diff) return cmd_differential(cfg, out);
    if (*ver) return cmd_verify_identities(cfg, out);
    if (*base) return cmd_baselocus(cfg, out);
    if (*sl) return cmd_standard_lines(cfg, out);
    if (*th) return cmd_thresholds(cfg, out);
    if (*cert) return cmd_certify(cfg, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SamplingError& e) {
    err << "sampling failed: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const Json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace orbicert
