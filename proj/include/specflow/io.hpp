#pragma once

#include <json.hpp>

#include "specflow/harness.hpp"

namespace specflow {

using Json = nlohmann::json;

// Matrix file format: {"blocks":[{"size":n,"weight":w,"re":[[..]],"im":[[..]]}]}
// with row-major entries; omitted weights default to 1.0, omitted "im" to 0.
Json element_to_json(const AlgebraElement& x);
AlgebraElement element_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);  // {"re":[[..]],"im":[[..]]}
Matrix matrix_from_json(const Json& j);

// {"steps":[[width,value],...]}
Json svf_to_json(const SingularValueFunction& f);
SingularValueFunction svf_from_json(const Json& j);

Json report_to_json(const InequalityReport& r);
InequalityReport report_from_json(const Json& j);

Json constant_to_json(const ConstantEstimate& c);
ConstantEstimate constant_from_json(const Json& j);

Json sf_result_to_json(const SpectralFlowResult& r);

Json path_to_json(const OperatorPath& p);
OperatorPath path_from_json(const Json& j);

Json module_spec_to_json(const ModuleSpec& m);
ModuleSpec module_spec_from_json(const Json& j);

Json config_to_json(const CampaignConfig& c);
CampaignConfig config_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& body);

}  // namespace specflow
