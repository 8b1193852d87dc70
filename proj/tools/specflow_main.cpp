#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "specflow/io.hpp"

namespace {

using namespace specflow;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

bool is_numerical(Errc code) {
  switch (code) {
    case Errc::NoConvergence:
    case Errc::QuadratureFailure:
    case Errc::KernelTooClose:
    case Errc::EndpointKernel:
    case Errc::StepTooSmall:
      return true;
    default:
      return false;
  }
}

int cmd_verify(const std::string& config_path, bool json_output) {
  const CampaignConfig config = config_from_json(load_json_file(config_path));
  const ReportBundle bundle = run_suite(config);
  const int failures = bundle.failures();
  if (json_output) {
    Json out{{"version", bundle.version},
             {"seed", bundle.seed},
             {"reports", bundle.reports.size()},
             {"failures", failures}};
    Json constants = Json::array();
    for (const auto& c : bundle.constants) constants.push_back(constant_to_json(c));
    out["constants"] = std::move(constants);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "ran " << bundle.reports.size() << " checks, " << failures << " failed\n";
    for (const auto& c : bundle.constants)
      std::cout << "  " << constant_name_str(c.name) << "(p=" << c.p << ") = " << c.value << "\n";
    if (!config.output_dir.empty()) std::cout << "reports written to " << config.output_dir << "\n";
  }
  return failures == 0 ? kExitPass : kExitVerificationFailure;
}

int cmd_constants(double p, const std::vector<int>& dims, int trials, uint64_t seed,
                  const std::string& out_path, bool json_output) {
  const ConstantEstimate est = estimate_Kp(p, dims, trials, seed);
  const double replay = reevaluate_witness(est, p);
  Json j = constant_to_json(est);
  j["witness_replay"] = replay;
  j["derived"] = Json{{"K_cal_p", kcal_p(est.value)},
                      {"Z_p'", zprime_p(est.value)},
                      {"Z_p", z_p(est.value)}};
  if (!out_path.empty()) write_text_file(out_path, j.dump(2) + "\n");
  if (json_output) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "K_p(p=" << p << ") ~= " << est.value << "  (trials=" << trials
              << ", seed=" << seed << ", witness replay " << replay << ")\n";
    std::cout << "derived: K_cal_p=" << kcal_p(est.value) << "  Z_p'=" << zprime_p(est.value)
              << "  Z_p=" << z_p(est.value) << "\n";
  }
  return kExitPass;
}

int cmd_specflow(const std::string& path_file, const std::string& method, double m, double q,
                 double zero_tol, double quad_tol, bool json_output) {
  const OperatorPath path = path_from_json(load_json_file(path_file));
  QuadratureSpec quad;
  quad.tol = quad_tol;

  Json j;
  double value = 0.0;
  if (method == "crossing") {
    std::vector<std::string> warnings;
    value = crossing_sf(path, zero_tol, &warnings);
    j = Json{{"method", "crossing"}, {"sf", value}, {"warnings", warnings}};
  } else if (method == "integral") {
    const SpectralFlowResult res = integral_sf_unbounded(path, m, quad);
    value = res.integral_sf;
    j = sf_result_to_json(res);
  } else if (method == "bounded") {
    const SpectralFlowResult res = integral_sf_bounded(path, q, quad);
    value = res.integral_sf;
    j = sf_result_to_json(res);
  } else {
    std::cerr << "unknown method: " << method << "\n";
    return kExitUsage;
  }
  if (json_output)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << value << "\n";
  return kExitPass;
}

int cmd_module_check(const std::string& spec_file, double kp, int kp_trials, uint64_t seed,
                     bool json_output) {
  const ModuleSpec spec = module_spec_from_json(load_json_file(spec_file));
  if (kp <= 0.0) kp = estimate_Kp(spec.p, {4, 8}, kp_trials, seed).value;

  const SummabilityProfile profile = summability_profile(spec);
  const auto reports = check_corollary04(spec, kp);

  bool pass = profile.residual <= 1e-10;
  Json unit_reports = Json::array();
  for (const auto& r : reports) {
    pass = pass && r.conj_residual <= 1e-9 && r.factor_residual <= 1e-9 && r.gap_bound_holds &&
           r.triangle_holds && r.phi_comm_bound_holds;
    unit_reports.push_back(Json{{"comm_D", r.comm_D},
                                {"comm_phi_p", r.comm_phi_p},
                                {"comm_sgn_p", r.comm_sgn_p},
                                {"conj_residual", r.conj_residual},
                                {"factor_residual", r.factor_residual},
                                {"gap_p", r.gap_p},
                                {"gap_bound", r.gap_bound},
                                {"triangle_holds", r.triangle_holds},
                                {"phi_comm_bound", r.phi_comm_bound},
                                {"phi_comm_bound_holds", r.phi_comm_bound_holds}});
  }
  const Json j{{"p", spec.p},
               {"kp", kp},
               {"summability",
                Json{{"unbounded", profile.norm_unbounded},
                     {"bounded", profile.norm_bounded},
                     {"residual", profile.residual},
                     {"truncation_profile", profile.truncation_profile}}},
               {"unitaries", unit_reports},
               {"pass", pass}};
  if (json_output)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << (pass ? "module checks passed" : "module checks FAILED") << " (p=" << spec.p
              << ", " << reports.size() << " unitaries)\n";
  return pass ? kExitPass : kExitVerificationFailure;
}

std::vector<Block> parse_blocks(const std::string& text) {
  // "4:1.0,2:0.5" -> blocks of given size:weight
  std::vector<Block> blocks;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto colon = token.find(':');
    Block b;
    b.size = std::stoi(token.substr(0, colon));
    b.weight = colon == std::string::npos ? 1.0 : std::stod(token.substr(colon + 1));
    blocks.push_back(b);
  }
  if (blocks.empty()) throw Error(Errc::BadConfig, "empty algebra spec");
  return blocks;
}

int cmd_gen(const std::string& kind, const std::string& algebra_spec, double scale, uint64_t seed,
            int shift_k, int grid, const std::string& out_path) {
  Json j;
  if (kind == "path") {
    if (shift_k > 0) {
      // truncated shift: D0 = diag(k - 1/2), A = 1
      const int n = 2 * shift_k + 1;
      const AlgebraPtr alg = make_algebra({{n, 1.0}});
      Matrix d0 = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) d0(i, i) = static_cast<double>(i - shift_k) - 0.5;
      AlgebraElement D0(alg, {d0});
      D0.certify_hermitian();
      j = path_to_json(OperatorPath::linear(D0, AlgebraElement::identity(alg), grid));
    } else {
      const AlgebraPtr alg = make_algebra(parse_blocks(algebra_spec));
      const AlgebraElement d0 = gen_hermitian(alg, scale, seed);
      const AlgebraElement a = gen_hermitian(alg, scale, seed + 1);
      j = path_to_json(OperatorPath::linear(d0, a, grid));
    }
  } else {
    const AlgebraPtr alg = make_algebra(parse_blocks(algebra_spec));
    if (kind == "hermitian")
      j = element_to_json(gen_hermitian(alg, scale, seed));
    else if (kind == "unitary")
      j = element_to_json(gen_unitary(alg, seed));
    else if (kind == "psd")
      j = element_to_json(gen_psd(alg, scale, seed));
    else {
      std::cerr << "unknown kind: " << kind << "\n";
      return kExitUsage;
    }
  }
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_text_file(out_path, j.dump(2) + "\n");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-algebra operator inequality and spectral flow toolkit"};
  app.require_subcommand(1);
  bool json_output = false;
  app.add_flag("--json", json_output, "machine-readable output");

  auto* verify = app.add_subcommand("verify", "run verification campaigns from a config file");
  std::string config_path;
  verify->add_option("--config", config_path, "campaign config JSON")->required();

  auto* constants = app.add_subcommand("constants", "estimate the multiplier constant K_p");
  double p = 2.0;
  std::vector<int> dims{4, 8};
  int trials = 500;
  uint64_t seed = 1;
  std::string out_path;
  constants->add_option("--p", p, "exponent in (1, inf)")->required();
  constants->add_option("--dims", dims, "block dimensions to sample");
  constants->add_option("--trials", trials, "random trials");
  constants->add_option("--seed", seed, "rng seed");
  constants->add_option("--out", out_path, "write the estimate JSON here");

  auto* flow = app.add_subcommand("specflow", "spectral flow of a Hermitian path");
  std::string path_file, method = "crossing";
  double m = 2.0, q = 3.0, zero_tol = 1e-10, quad_tol = 1e-8;
  flow->add_option("--path", path_file, "path JSON file")->required();
  flow->add_option("--method", method, "crossing | integral | bounded");
  flow->add_option("--m", m, "exponent for the unbounded integral formula");
  flow->add_option("--q", q, "exponent for the bounded integral formula");
  flow->add_option("--zero-tol", zero_tol, "endpoint kernel tolerance");
  flow->add_option("--quad-tol", quad_tol, "quadrature tolerance");

  auto* module_check = app.add_subcommand("module-check", "Fredholm module summability checks");
  std::string spec_file;
  double kp = -1.0;
  int kp_trials = 200;
  uint64_t mc_seed = 1;
  module_check->add_option("--spec", spec_file, "module spec JSON")->required();
  module_check->add_option("--kp", kp, "use this K_p instead of estimating");
  module_check->add_option("--kp-trials", kp_trials, "trials for the K_p estimate");
  module_check->add_option("--seed", mc_seed, "rng seed for the K_p estimate");

  auto* gen = app.add_subcommand("gen", "generate instance files");
  std::string kind = "hermitian", algebra_spec = "8:1.0";
  double scale = 1.0;
  uint64_t gen_seed = 1;
  int shift_k = 0, grid = 33;
  gen->add_option("--kind", kind, "hermitian | unitary | psd | path");
  gen->add_option("--algebra", algebra_spec, "blocks as size:weight,size:weight,...");
  gen->add_option("--scale", scale, "ensemble scale");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--shift", shift_k, "truncated-shift path with K = this (path kind)");
  gen->add_option("--grid", grid, "path grid points");
  gen->add_option("--out", out_path, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(config_path, json_output);
    if (constants->parsed()) return cmd_constants(p, dims, trials, seed, out_path, json_output);
    if (flow->parsed())
      return cmd_specflow(path_file, method, m, q, zero_tol, quad_tol, json_output);
    if (module_check->parsed())
      return cmd_module_check(spec_file, kp, kp_trials, mc_seed, json_output);
    if (gen->parsed())
      return cmd_gen(kind, algebra_spec, scale, gen_seed, shift_k, grid, out_path);
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    if (is_numerical(e.code())) return kExitNumerical;
    if (e.code() == Errc::IoError || e.code() == Errc::BadConfig || e.code() == Errc::SuiteUnknown)
      return kExitUsage;
    return kExitVerificationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
