#include "specflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "specflow/io.hpp"
#include "specflow/parallel.hpp"

namespace specflow {

void CampaignConfig::validate() const {
  if (trials < 1) throw Error(Errc::BadConfig, "trials must be >= 1");
  if (suites.empty()) throw Error(Errc::BadConfig, "no suites configured");
  if (p_values.empty()) throw Error(Errc::BadConfig, "no p values configured");
  if (algebras.empty()) throw Error(Errc::BadConfig, "no algebras configured");
  const auto& known = known_suites();
  for (const std::string& s : suites)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw Error(Errc::SuiteUnknown, "unknown suite: " + s);
  for (double p : p_values)
    if (!(p >= 1.0)) throw Error(Errc::BadConfig, "p values must be >= 1");
}

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> suites = {
      "prop21",       "prop22",   "thm03i",       "thm03ii",          "ineq25",
      "a2",           "lemma_a1", "cor_a1",       "bks",              "corners",
      "dilation",     "phi_identity", "sgn_phi_factor", "prop32_identity", "conjugation",
      "summability",  "chern"};
  return suites;
}

bool suite_needs_kp(const std::string& suite) {
  return suite == "prop21" || suite == "prop22" || suite == "thm03i" || suite == "thm03ii";
}

bool suite_allows_p(const std::string& suite, double p) {
  // Theorem 0.3 and the commutator estimates exclude p = 1; the Appendix
  // chain, the submajorization statements and the identities admit it.
  static const std::vector<std::string> needs_p_above_1 = {
      "prop21", "prop22", "thm03i", "thm03ii", "prop32_identity", "summability"};
  if (std::find(needs_p_above_1.begin(), needs_p_above_1.end(), suite) != needs_p_above_1.end())
    return p > 1.0;
  return p >= 1.0;
}

namespace {

AlgebraElement gen_invertible_hermitian(const AlgebraPtr& algebra, Rng& rng, double floor) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    if (eig_hermitian(x).min_abs_eigenvalue() > floor) return x;
  }
  throw Error(Errc::KernelTooClose, "could not draw an invertible Hermitian element");
}

double perturbation_scale(Rng& rng) {
  // spread across the max(||a||^{1/2}, ||a||) crossover at ||a|| = 1
  return std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
}

InequalityReport residual_report(const std::string& name, double p, double residual, double tol,
                                 std::string digest) {
  return make_report(name, p, residual, 0.0, 0.0, tol, std::move(digest));
}

}  // namespace

TrialResult run_trial(const std::string& suite, const AlgebraPtr& algebra, double p,
                      uint64_t trial_seed, double kp, double tol_identity) {
  Rng rng(trial_seed);
  TrialResult out;

  if (suite == "prop21") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement y = gen_gaussian(algebra, 1.0, rng.next());
    const AlgebraElement z = resolvent_half(x);
    out.reports.push_back(verify_prop21(x, y, z, p, kp));
    out.inputs = {{"x", x}, {"y", y}, {"z", z}};
  } else if (suite == "prop22") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement y = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement z = resolvent_half(x);
    out.reports.push_back(verify_prop22(x, y, z, p, kp));
    out.inputs = {{"x", x}, {"y", y}, {"z", z}};
  } else if (suite == "thm03i") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement a = gen_hermitian(algebra, perturbation_scale(rng), rng.next());
    const auto [r1, r2] = verify_thm03i(x, a, p, kp);
    out.reports = {r1, r2};
    out.inputs = {{"x", x}, {"a", a}};
  } else if (suite == "thm03ii") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement a = gen_hermitian(algebra, perturbation_scale(rng), rng.next());
    const AlgebraElement z = resolvent_half(x);
    out.reports.push_back(verify_thm03ii(x, a, z, p, kp));
    out.inputs = {{"x", x}, {"a", a}, {"z", z}};
  } else if (suite == "ineq25") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement a = gen_hermitian(algebra, perturbation_scale(rng), rng.next());
    out.reports.push_back(verify_25(x, a, p));
    out.inputs = {{"x", x}, {"a", a}};
  } else if (suite == "a2") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement a = gen_hermitian(algebra, perturbation_scale(rng), rng.next());
    out.reports.push_back(verify_A2(x, a, p));
    out.inputs = {{"x", x}, {"a", a}};
  } else if (suite == "lemma_a1" || suite == "cor_a1") {
    const AlgebraElement g = abs_op(gen_gaussian(algebra, 1.0, rng.next()));
    const AlgebraElement h = abs_op(gen_gaussian(algebra, 1.0, rng.next()));
    const AlgebraElement y = (g + h).hermitian_part();
    const AlgebraElement x = (g - h).hermitian_part();
    if (suite == "lemma_a1") {
      const auto [pointwise, half_power] = verify_lemmaA1(x, y);
      out.reports = {pointwise, half_power};
    } else {
      out.reports.push_back(verify_corA1(x, y, [](double t) { return std::sqrt(t); }, "sqrt"));
      out.reports.push_back(verify_corA1(x, y, [](double t) { return t; }, "id"));
      out.reports.push_back(verify_corA1(x, y, [](double t) { return t * t; }, "square"));
      out.reports.push_back(verify_corA1(x, y, [](double t) { return std::log1p(t); }, "log1p"));
    }
    out.inputs = {{"x", x}, {"y", y}};
  } else if (suite == "bks") {
    const AlgebraElement a = gen_psd(algebra, 1.0, rng.next());
    const AlgebraElement b = gen_psd(algebra, 1.0, rng.next());
    out.reports.push_back(verify_bks(a, b));
    out.inputs = {{"a", a}, {"b", b}};
  } else if (suite == "corners") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement y = gen_gaussian(algebra, 1.0, rng.next());
    const AlgebraElement z = resolvent_half(x);
    const CornerResiduals res = corner_identities(x, y, z);
    out.reports.push_back(
        residual_report("corners", p, res.max(), tol_identity, digest_of({&x, &y, &z}, p)));
    out.inputs = {{"x", x}, {"y", y}, {"z", z}};
  } else if (suite == "dilation") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement y = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement z = resolvent_half(x);
    const Dilation dil = dilate_2x2(x, y, z);
    const double trace_gap =
        std::abs(trace(dil.X) - trace(x) - trace(y));
    const double residual = std::max(dil.corner_residual, trace_gap);
    out.reports.push_back(
        residual_report("dilation", p, residual, tol_identity, digest_of({&x, &y, &z}, p)));
    out.inputs = {{"x", x}, {"y", y}, {"z", z}};
  } else if (suite == "phi_identity") {
    const AlgebraElement x = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement one = AlgebraElement::identity(algebra);
    const AlgebraElement phi = phi_map(x);
    // independent route: dense LU inverse of 1 + x^2
    std::vector<Matrix> inv_blocks;
    for (int k = 0; k < x.num_blocks(); ++k) {
      const Matrix m = Matrix::Identity(x.block(k).rows(), x.block(k).cols()) + x.block(k) * x.block(k);
      inv_blocks.push_back(m.inverse());
    }
    const AlgebraElement resolvent(algebra, std::move(inv_blocks));
    const double residual = operator_norm(one - phi * phi - resolvent);
    out.reports.push_back(
        residual_report("phi_identity", p, residual, tol_identity, digest_of({&x}, p)));
    out.inputs = {{"x", x}};
  } else if (suite == "sgn_phi_factor") {
    const AlgebraElement d = gen_invertible_hermitian(algebra, rng, 1e-3);
    const AlgebraElement sgn = sgn_op(d, 1e-10);
    const AlgebraElement phi = phi_map(d);
    std::vector<Matrix> inv_blocks;
    for (int k = 0; k < d.num_blocks(); ++k) {
      const Matrix m = Matrix::Identity(d.block(k).rows(), d.block(k).cols()) + d.block(k) * d.block(k);
      inv_blocks.push_back(m.inverse());
    }
    const AlgebraElement resolvent(algebra, std::move(inv_blocks));
    const double residual = operator_norm((sgn - phi) * (sgn + phi) - resolvent);
    out.reports.push_back(
        residual_report("sgn_phi_factor", p, residual, tol_identity, digest_of({&d}, p)));
    out.inputs = {{"D0", d}};
  } else if (suite == "prop32_identity") {
    const AlgebraElement d0 = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement a = gen_hermitian(algebra, perturbation_scale(rng), rng.next());
    const AlgebraElement d = (d0 + a).hermitian_part();
    const AlgebraElement f0 = phi_map(d0);
    const AlgebraElement f = phi_map(d);
    const AlgebraElement x = f - f0;
    const AlgebraElement one = AlgebraElement::identity(algebra);
    const double residual =
        operator_norm((one - f * f) - (one - f0 * f0 - (x * x + f0 * x + x * f0)));
    out.reports.push_back(
        residual_report("prop32_identity", p, residual, tol_identity, digest_of({&d0, &a}, p)));
    out.inputs = {{"D0", d0}, {"A", a}};
  } else if (suite == "conjugation") {
    const AlgebraElement d0 = gen_hermitian(algebra, 1.0, rng.next());
    const AlgebraElement u = gen_unitary(algebra, rng.next());
    const AlgebraElement f0 = phi_map(d0);
    const AlgebraElement conjugated = (u.adjoint() * d0 * u).hermitian_part();
    const double residual = operator_norm(commutator(f0, u) - u * (phi_map(conjugated) - f0));
    out.reports.push_back(
        residual_report("conjugation", p, residual, tol_identity, digest_of({&d0, &u}, p)));
    out.inputs = {{"D0", d0}, {"u", u}};
  } else if (suite == "summability") {
    const AlgebraElement d0 = gen_hermitian(algebra, 1.0, rng.next());
    ModuleSpec spec{algebra, d0, p, {}, 1e-10};
    const SummabilityProfile profile = summability_profile(spec);
    out.reports.push_back(
        residual_report("summability", p, profile.residual, 1e-10, digest_of({&d0}, p)));
    out.inputs = {{"D0", d0}};
  } else if (suite == "chern") {
    const AlgebraElement d = gen_invertible_hermitian(algebra, rng, 1e-3);
    const AlgebraElement f0 = sgn_op(d, 1e-10);
    const int degree_n = static_cast<int>(trial_seed % 2);
    const size_t count = static_cast<size_t>(2 * degree_n + 2);
    std::vector<AlgebraElement> args;
    for (size_t i = 0; i < count; ++i) args.push_back(gen_gaussian(algebra, 1.0, rng.next()));
    const Complex value = chern_character(f0, args);
    std::vector<AlgebraElement> rotated(args.begin() + 1, args.end());
    rotated.push_back(args.front());
    const Complex cycled = chern_character(f0, rotated);
    const double residual = std::abs(cycled + value);
    InequalityReport r = residual_report("chern", p, residual, tol_identity, digest_of({&f0}, p));
    out.reports.push_back(std::move(r));
    out.inputs = {{"F0", f0}};
  } else {
    throw Error(Errc::SuiteUnknown, "unknown suite: " + suite);
  }
  return out;
}

namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ReportBundle run_suite(const CampaignConfig& config) {
  config.validate();

  ReportBundle bundle;
  bundle.version = kVersion;
  bundle.seed = config.seed;
  bundle.timestamp = iso_timestamp();

  // constants first: one K_p estimate per exponent that needs it
  std::map<double, double> kp_by_p;
  const bool any_needs_kp = std::any_of(config.suites.begin(), config.suites.end(), suite_needs_kp);
  for (double p : config.p_values) {
    if (!any_needs_kp || !(p > 1.0)) continue;
    if (config.kp_override > 0.0) {
      kp_by_p[p] = config.kp_override;
    } else {
      ConstantEstimate est = estimate_Kp(p, {4, 8}, config.kp_trials,
                                         substream(config.seed, fnv1a("Kp")));
      kp_by_p[p] = est.value;
      bundle.constants.push_back(std::move(est));
    }
  }

  const bool writing = !config.output_dir.empty();
  std::filesystem::path out_dir(config.output_dir);
  if (writing) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "archive", ec);
    if (ec) throw Error(Errc::IoError, "cannot create output dir " + config.output_dir);
  }

  std::ostringstream jsonl;
  std::ostringstream csv;
  csv << "suite,p,algebra,trials,pass_rate,worst_margin\n";
  std::map<std::string, int> archived_per_suite;

  for (const std::string& suite : config.suites) {
    for (double p : config.p_values) {
      if (!suite_allows_p(suite, p)) continue;
      const double kp = kp_by_p.count(p) != 0 ? kp_by_p[p] : 0.0;
      for (const AlgebraSpecConfig& aspec : config.algebras) {
        const AlgebraPtr algebra = make_algebra(aspec.blocks);
        std::vector<TrialResult> results(static_cast<size_t>(config.trials));
        parallel_for(config.trials, [&](int t) {
          results[static_cast<size_t>(t)] =
              run_trial(suite, algebra, p, substream(config.seed, fnv1a(suite), static_cast<uint64_t>(t)),
                        kp, config.tol_identity);
        });

        int passed = 0;
        int total = 0;
        double worst_margin = std::numeric_limits<double>::infinity();
        for (int t = 0; t < config.trials; ++t) {
          const TrialResult& res = results[static_cast<size_t>(t)];
          bool trial_pass = true;
          for (const InequalityReport& r : res.reports) {
            ++total;
            if (r.pass) ++passed;
            trial_pass = trial_pass && r.pass;
            worst_margin = std::min(worst_margin, r.rhs - r.lhs);
            bundle.reports.push_back(r);
            if (writing) jsonl << report_to_json(r).dump() << "\n";
          }
          if (!trial_pass && writing && archived_per_suite[suite] < 100) {
            ++archived_per_suite[suite];
            Json inputs = Json::object();
            for (const auto& [name, element] : res.inputs) inputs[name] = element_to_json(element);
            Json record{{"suite", suite},
                        {"p", p},
                        {"algebra", aspec.name},
                        {"trial", t},
                        {"trial_seed", substream(config.seed, fnv1a(suite), static_cast<uint64_t>(t))},
                        {"kp", kp},
                        {"inputs", std::move(inputs)}};
            std::ostringstream name;
            name << suite << "_p" << p << "_" << aspec.name << "_t" << t << ".json";
            write_text_file((out_dir / "archive" / name.str()).string(), record.dump(2) + "\n");
          }
        }
        csv << suite << "," << format_csv_double(p) << "," << aspec.name << "," << config.trials
            << "," << format_csv_double(total > 0 ? static_cast<double>(passed) / total : 1.0) << ","
            << format_csv_double(worst_margin) << "\n";
      }
    }
  }

  if (writing) {
    write_text_file((out_dir / "reports.jsonl").string(), jsonl.str());
    write_text_file((out_dir / "summary.csv").string(), csv.str());
    Json constants = Json::array();
    for (const ConstantEstimate& c : bundle.constants) constants.push_back(constant_to_json(c));
    write_text_file((out_dir / "constants.json").string(), constants.dump(2) + "\n");
    const Json meta{{"version", bundle.version}, {"seed", bundle.seed}, {"timestamp", bundle.timestamp}};
    write_text_file((out_dir / "meta.json").string(), meta.dump(2) + "\n");
  }
  return bundle;
}

}  // namespace specflow
