#ifndef OPMEAN_JSON_IO_HPP
#define OPMEAN_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "opmean/connections.hpp"
#include "opmean/forms.hpp"
#include "opmean/harness.hpp"
#include "opmean/lebesgue.hpp"
#include "opmean/repfun.hpp"
#include "opmean/traces.hpp"

namespace opmean {

using Json = nlohmann::json;

// Matrix wire format: {"n": int, "data": [row-major floats]}. The writer emits
// 17 significant digits; the reader symmetrizes and reports the asymmetry
// defect it removed.
Json matrix_to_json(const Matrix& m);
struct MatrixRead {
  Matrix m;  // symmetrized
  double asym_defect;
};
MatrixRead matrix_from_json(const Json& j);

Json extended_to_json(const ExtendedPositive& q);
ExtendedPositive extended_from_json(const Json& j);

Json repfun_to_json(const RepresentingFunction& f);
RepresentingFunction repfun_from_json(const Json& j);

Json algebra_to_json(const TraceAlgebra& alg);
TraceAlgebra algebra_from_json(const Json& j);
Json block_element_to_json(const BlockElement& x);
BlockElement block_element_from_json(const Json& j);

Json lp_to_json(const LpPositive& h);
LpPositive lp_from_json(const Json& j);

Json snumbers_to_json(const SNumberFunction& mu);
Json connection_result_to_json(const ConnectionResult& r);
Json lebesgue_to_json(const LebesgueResult& r);
// campaign report with one entry per check: id, property reference, worst
// slack; failures carry their re-runnable instance payloads
Json report_to_json(const CampaignReport& r);

// Deterministic dump: keys in sorted order, doubles at 17 significant digits.
std::string dump_json(const Json& j, int indent = -1);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace opmean

#endif
