#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "decompose.hpp"
#include "drb.hpp"
#include "empirical.hpp"
#include "ma.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "rid.hpp"

namespace affdim {

// Schemas (rationals are always strings "p/q"; integers allowed):
//   source: { "n": int, "coordinates": [ { "alpha": "p/q",
//             "continuous": {"kind": "gaussian", "mean": f, "variance": f}
//                         | {"kind": "uniform", "lo": f, "hi": f},
//             "atoms": [ {"value": "p/q", "prob": "p/q"} ] } ],
//             "joint_table": [ {"nu": "0110", "xd": {"0": "p/q"}, "prob": "p/q"} ] }
//   matrix: { "rows": m, "cols": n, "entries": [["p/q", ...], ...] }
SourceSpec source_from_json(const nlohmann::json& j);
RationalMatrix matrix_from_json(const nlohmann::json& j);

SourceSpec source_from_json_text(const std::string& text);
RationalMatrix matrix_from_json_text(const std::string& text);

nlohmann::json matrix_to_json(const RationalMatrix& m);

nlohmann::json violations_to_json(const std::vector<Violation>& v);
nlohmann::json rid_to_json(const RIDResult& r);
nlohmann::json decomposition_to_json(const Decomposition& d, bool audit);
nlohmann::json drb_to_json(const DRBResult& r);
nlohmann::json rdf_point_to_json(const RdfPoint& p);
nlohmann::json gap_report_to_json(const GapReport& g, const std::vector<RdfPoint>& curve);
nlohmann::json rid_estimate_to_json(const RIDEstimate& e);
nlohmann::json bid_rows_to_json(const std::vector<BIDRow>& rows);
std::string bid_rows_to_csv(const std::vector<BIDRow>& rows);
nlohmann::json alphas_to_json(const std::vector<Rational>& alphas);

std::string nu_to_string(BitPattern nu, int n);
BitPattern nu_from_string(const std::string& s);

}  // namespace affdim
