#include "specflow/io.hpp"

#include <fstream>

namespace specflow {

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.contains("re")) throw Error(Errc::IoError, "matrix json needs a \"re\" field");
  const Json& re = j.at("re");
  const auto rows = static_cast<Eigen::Index>(re.size());
  if (rows == 0) throw Error(Errc::IoError, "matrix json must be nonempty");
  const auto cols = static_cast<Eigen::Index>(re.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = Complex(re.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<double>(), 0.0);
  if (j.contains("im")) {
    const Json& im = j.at("im");
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index k = 0; k < cols; ++k)
        m(i, k) += Complex(0.0, im.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<double>());
  }
  return m;
}

Json element_to_json(const AlgebraElement& x) {
  Json blocks = Json::array();
  for (int k = 0; k < x.num_blocks(); ++k) {
    Json b = matrix_to_json(x.block(k));
    b["size"] = x.algebra()->block(k).size;
    b["weight"] = x.algebra()->block(k).weight;
    blocks.push_back(std::move(b));
  }
  return Json{{"blocks", std::move(blocks)}};
}

AlgebraElement element_from_json(const Json& j) {
  if (!j.contains("blocks")) throw Error(Errc::IoError, "element json needs \"blocks\"");
  std::vector<Block> spec;
  std::vector<Matrix> data;
  for (const Json& b : j.at("blocks")) {
    Matrix m = matrix_from_json(b);
    if (m.rows() != m.cols()) throw Error(Errc::IoError, "element blocks must be square");
    const int size = b.contains("size") ? b.at("size").get<int>() : static_cast<int>(m.rows());
    if (size != static_cast<int>(m.rows()))
      throw Error(Errc::IoError, "declared block size disagrees with the entries");
    const double weight = b.contains("weight") ? b.at("weight").get<double>() : 1.0;
    spec.push_back({size, weight});
    data.push_back(std::move(m));
  }
  return AlgebraElement(make_algebra(std::move(spec)), std::move(data));
}

Json svf_to_json(const SingularValueFunction& f) {
  Json steps = Json::array();
  for (const auto& [width, value] : f.steps()) steps.push_back(Json::array({width, value}));
  return Json{{"steps", std::move(steps)}};
}

SingularValueFunction svf_from_json(const Json& j) {
  std::vector<std::pair<double, double>> steps;
  for (const Json& s : j.at("steps")) steps.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
  return SingularValueFunction(std::move(steps));
}

Json report_to_json(const InequalityReport& r) {
  return Json{{"name", r.name},
              {"p", r.p},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"constant", r.constant_used},
              {"ratio", r.ratio},
              {"pass", r.pass},
              {"abs_tol", r.abs_tol},
              {"digest", r.instance_digest}};
}

InequalityReport report_from_json(const Json& j) {
  InequalityReport r;
  r.name = j.at("name").get<std::string>();
  r.p = j.at("p").get<double>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.constant_used = j.at("constant").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.abs_tol = j.at("abs_tol").get<double>();
  r.instance_digest = j.at("digest").get<std::string>();
  return r;
}

Json constant_to_json(const ConstantEstimate& c) {
  Json projections = Json::array();
  for (const Matrix& m : c.witness_projections) projections.push_back(matrix_to_json(m));
  Json witness{{"dim", c.witness_dim},
               {"projections", std::move(projections)},
               {"lambda", c.witness_lambda},
               {"mu", c.witness_mu},
               {"a", matrix_to_json(c.witness_a)}};
  return Json{{"name", constant_name_str(c.name)}, {"p", c.p},       {"value", c.value},
              {"trials", c.trials},                {"seed", c.seed}, {"witness", std::move(witness)}};
}

ConstantEstimate constant_from_json(const Json& j) {
  ConstantEstimate c;
  const auto name = parse_constant_name(j.at("name").get<std::string>());
  if (!name) throw Error(Errc::IoError, "unknown constant name");
  c.name = *name;
  c.p = j.at("p").get<double>();
  c.value = j.at("value").get<double>();
  c.trials = j.at("trials").get<int>();
  c.seed = j.at("seed").get<uint64_t>();
  const Json& w = j.at("witness");
  c.witness_dim = w.at("dim").get<int>();
  for (const Json& m : w.at("projections")) c.witness_projections.push_back(matrix_from_json(m));
  c.witness_lambda = w.at("lambda").get<std::vector<double>>();
  c.witness_mu = w.at("mu").get<std::vector<double>>();
  c.witness_a = matrix_from_json(w.at("a"));
  return c;
}

Json sf_result_to_json(const SpectralFlowResult& r) {
  return Json{{"crossing_sf", r.crossing_sf},
              {"integral_sf", r.integral_sf},
              {"numerator", r.numerator},
              {"method", r.method},
              {"exponent", r.exponent},
              {"quad_tol", r.quad_tol},
              {"panels", r.panels},
              {"quad_error_estimate", r.quad_error_estimate},
              {"endpoint_min_eigs", Json::array({r.endpoint_min_eigs[0], r.endpoint_min_eigs[1]})},
              {"consistency_delta", r.consistency_delta}};
}

Json path_to_json(const OperatorPath& p) {
  switch (p.kind()) {
    case OperatorPath::Kind::Linear:
      return Json{{"kind", "linear"},
                  {"D0", element_to_json(p.d0())},
                  {"A", element_to_json(p.generator())},
                  {"grid", p.grid().size()}};
    case OperatorPath::Kind::Conjugation:
      return Json{{"kind", "conjugation"},
                  {"D0", element_to_json(p.d0())},
                  {"H", element_to_json(p.generator())},
                  {"grid", p.grid().size()}};
    case OperatorPath::Kind::Sampled: {
      Json samples = Json::array();
      for (const AlgebraElement& s : p.samples()) samples.push_back(element_to_json(s));
      return Json{{"kind", "sampled"}, {"t", p.grid()}, {"samples", std::move(samples)}};
    }
  }
  throw Error(Errc::IoError, "unreachable path kind");
}

OperatorPath path_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear" || kind == "conjugation") {
    AlgebraElement d0 = element_from_json(j.at("D0"));
    d0.certify_hermitian();
    AlgebraElement gen = element_from_json(j.at(kind == "linear" ? "A" : "H"));
    gen.certify_hermitian();
    const int grid = j.contains("grid") ? j.at("grid").get<int>() : 33;
    return kind == "linear" ? OperatorPath::linear(std::move(d0), std::move(gen), grid)
                            : OperatorPath::conjugation(std::move(d0), std::move(gen), grid);
  }
  if (kind == "sampled") {
    std::vector<double> t = j.at("t").get<std::vector<double>>();
    std::vector<AlgebraElement> samples;
    for (const Json& s : j.at("samples")) {
      AlgebraElement e = element_from_json(s);
      e.certify_hermitian();
      samples.push_back(std::move(e));
    }
    return OperatorPath::sampled(std::move(t), std::move(samples));
  }
  throw Error(Errc::IoError, "unknown path kind: " + kind);
}

Json module_spec_to_json(const ModuleSpec& m) {
  Json unitaries = Json::array();
  for (const AlgebraElement& u : m.unitaries) unitaries.push_back(element_to_json(u));
  return Json{{"D0", element_to_json(m.D0)},
              {"p", m.p},
              {"unitaries", std::move(unitaries)},
              {"zero_tol", m.zero_tol}};
}

ModuleSpec module_spec_from_json(const Json& j) {
  AlgebraElement d0 = element_from_json(j.at("D0"));
  d0.certify_hermitian();
  ModuleSpec m{d0.algebra(), d0, j.at("p").get<double>(), {}, 1e-10};
  if (j.contains("zero_tol")) m.zero_tol = j.at("zero_tol").get<double>();
  for (const Json& u : j.at("unitaries")) m.unitaries.push_back(element_from_json(u));
  m.validate();
  return m;
}

Json config_to_json(const CampaignConfig& c) {
  Json algebras = Json::array();
  for (const AlgebraSpecConfig& a : c.algebras) {
    Json blocks = Json::array();
    for (const Block& b : a.blocks) blocks.push_back(Json{{"size", b.size}, {"weight", b.weight}});
    algebras.push_back(Json{{"name", a.name}, {"blocks", std::move(blocks)}});
  }
  return Json{{"suites", c.suites},
              {"p_values", c.p_values},
              {"algebras", std::move(algebras)},
              {"trials", c.trials},
              {"seed", c.seed},
              {"tolerances",
               Json{{"identity", c.tol_identity}, {"slack", c.tol_slack}, {"quadrature", c.tol_quad}}},
              {"output_dir", c.output_dir},
              {"kp_override", c.kp_override},
              {"kp_trials", c.kp_trials}};
}

CampaignConfig config_from_json(const Json& j) {
  CampaignConfig c;
  c.suites = j.at("suites").get<std::vector<std::string>>();
  c.p_values = j.at("p_values").get<std::vector<double>>();
  for (const Json& a : j.at("algebras")) {
    AlgebraSpecConfig spec;
    spec.name = a.at("name").get<std::string>();
    for (const Json& b : a.at("blocks"))
      spec.blocks.push_back({b.at("size").get<int>(), b.at("weight").get<double>()});
    c.algebras.push_back(std::move(spec));
  }
  c.trials = j.at("trials").get<int>();
  c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (t.contains("identity")) c.tol_identity = t.at("identity").get<double>();
    if (t.contains("slack")) c.tol_slack = t.at("slack").get<double>();
    if (t.contains("quadrature")) c.tol_quad = t.at("quadrature").get<double>();
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("kp_override")) c.kp_override = j.at("kp_override").get<double>();
  if (j.contains("kp_trials")) c.kp_trials = j.at("kp_trials").get<int>();
  c.validate();
  return c;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(Errc::IoError, "cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << body;
}

}  // namespace specflow
