#include "json_io.hpp"

#include <algorithm>
#include <sstream>

namespace affdim {

using nlohmann::json;

namespace {

Rational rational_field(const json& j, const std::string& context) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  throw ParseError(context + ": rationals must be strings \"p/q\" or integers");
}

double number_field(const json& j, const std::string& context) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
  throw ParseError(context + ": expected a number");
}

}  // namespace

std::string nu_to_string(BitPattern nu, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (nu & (BitPattern{1} << i)) s[i] = '1';
  return s;
}

BitPattern nu_from_string(const std::string& s) {
  BitPattern nu = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      nu |= BitPattern{1} << i;
    else if (s[i] != '0')
      throw ParseError("nu pattern must be a 0/1 string");
  }
  return nu;
}

SourceSpec source_from_json(const json& j) {
  SourceSpec spec;
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ParseError("source: missing integer field 'n'");
  spec.n = j["n"].get<int>();
  if (!j.contains("coordinates") || !j["coordinates"].is_array())
    throw ParseError("source: missing array field 'coordinates'");

  for (const auto& cj : j["coordinates"]) {
    Coordinate c;
    if (cj.contains("alpha")) c.alpha = rational_field(cj["alpha"], "alpha");
    if (cj.contains("continuous")) {
      const auto& cont = cj["continuous"];
      std::string kind = cont.value("kind", "gaussian");
      if (kind == "gaussian") {
        GaussianSpec g;
        g.mean = cont.contains("mean") ? number_field(cont["mean"], "mean") : 0.0;
        g.variance =
            cont.contains("variance") ? number_field(cont["variance"], "variance") : 1.0;
        c.continuous = g;
      } else if (kind == "uniform") {
        UniformSpec u;
        u.lo = cont.contains("lo") ? number_field(cont["lo"], "lo") : 0.0;
        u.hi = cont.contains("hi") ? number_field(cont["hi"], "hi") : 1.0;
        c.continuous = u;
      } else {
        throw ParseError("continuous.kind must be 'gaussian' or 'uniform'");
      }
    }
    if (cj.contains("atoms")) {
      for (const auto& aj : cj["atoms"])
        c.discrete.atoms.push_back(Atom{rational_field(aj.at("value"), "atom value"),
                                        rational_field(aj.at("prob"), "atom prob")});
    }
    spec.coordinates.push_back(std::move(c));
  }

  if (j.contains("joint_table")) {
    std::vector<JointEntry> table;
    for (const auto& ej : j["joint_table"]) {
      JointEntry e;
      std::string nu = ej.at("nu").get<std::string>();
      if (static_cast<int>(nu.size()) != spec.n)
        throw ParseError("joint_table: nu string length must equal n");
      e.nu = nu_from_string(nu);
      e.prob = rational_field(ej.at("prob"), "joint_table prob");
      std::vector<std::pair<int, Rational>> assignments;
      if (ej.contains("xd"))
        for (const auto& [key, value] : ej["xd"].items())
          assignments.emplace_back(std::stoi(key), rational_field(value, "xd value"));
      std::sort(assignments.begin(), assignments.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<int> expected;
      for (int i = 0; i < spec.n; ++i)
        if (!(e.nu & (BitPattern{1} << i))) expected.push_back(i);
      std::vector<int> got;
      for (const auto& [idx, v] : assignments) {
        got.push_back(idx);
        e.xd.push_back(v);
      }
      if (got != expected)
        throw ParseError("joint_table: xd keys must be exactly the coordinates with nu_i=0");
      table.push_back(std::move(e));
    }
    spec.joint_table = std::move(table);
  }
  return spec;
}

RationalMatrix matrix_from_json(const json& j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw ParseError("matrix: requires fields rows, cols, entries");
  int rows = j["rows"].get<int>();
  int cols = j["cols"].get<int>();
  if (rows < 1 || cols < 1) throw ParseError("matrix: rows and cols must be >= 1");
  const auto& entries = j["entries"];
  if (!entries.is_array() || static_cast<int>(entries.size()) != rows)
    throw ParseError("matrix: entries must be a rows-length array of rows");
  RationalMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = entries[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError("matrix: row " + std::to_string(i) + " must have cols entries");
    for (int k = 0; k < cols; ++k) m.at(i, k) = rational_field(row[k], "matrix entry");
  }
  return m;
}

SourceSpec source_from_json_text(const std::string& text) {
  json j = json::parse(text);
  return source_from_json(j);
}

RationalMatrix matrix_from_json_text(const std::string& text) {
  json j = json::parse(text);
  return matrix_from_json(j);
}

nlohmann::json matrix_to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(to_string(m.at(i, k)));
    rows.push_back(row);
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

json violations_to_json(const std::vector<Violation>& v) {
  json arr = json::array();
  for (const Violation& x : v) arr.push_back(json{{"field", x.field}, {"rule", x.rule}});
  return arr;
}

json rid_to_json(const RIDResult& r) {
  json out;
  out["value"] = r.exact ? json(to_string(*r.exact)) : json(nullptr);
  out["value_float"] = r.value;
  out["method"] = r.method;
  out["ci"] = r.ci ? json::array({r.ci->first, r.ci->second}) : json(nullptr);
  out["patterns"] = r.patterns;
  return out;
}

json decomposition_to_json(const Decomposition& d, bool audit) {
  json comps = json::array();
  Rational rid = 0;
  for (const AffineComponent& c : d.components) {
    rid += c.prob * c.dimension();
    json cj;
    cj["dim"] = c.dimension();
    cj["prob"] = to_string(c.prob);
    json basis = json::array();
    for (int i = 0; i < c.subspace.dimension; ++i) {
      json row = json::array();
      for (int k = 0; k < c.subspace.ambient_dim; ++k)
        row.push_back(to_string(c.subspace.rref_basis.at(i, k)));
      basis.push_back(row);
    }
    cj["basis"] = basis;
    json shift = json::array();
    for (const Rational& x : c.shift) shift.push_back(to_string(x));
    cj["shift"] = shift;
    cj["members_count"] = c.members.size();
    cj["diff_entropy_bits"] = c.diff_entropy_bits ? json(*c.diff_entropy_bits) : json(nullptr);
    if (c.diff_entropy_stderr) cj["diff_entropy_stderr"] = *c.diff_entropy_stderr;
    if (audit) {
      json members = json::array();
      for (const ComponentMember& m : c.members) {
        json mj;
        mj["nu"] = nu_to_string(m.nu, d.source_dim);
        mj["prob"] = to_string(m.prob);
        json xd = json::array();
        for (const Rational& x : m.xd) xd.push_back(to_string(x));
        mj["xd"] = xd;
        members.push_back(mj);
      }
      cj["members"] = members;
    }
    comps.push_back(cj);
  }
  json out;
  out["m"] = d.total_dim;
  out["n"] = d.source_dim;
  out["rid"] = to_string(rid);
  out["selector_entropy_bits"] = d.selector_entropy_bits;
  out["joint_entropy_bits"] = d.joint_entropy_bits;
  out["components"] = comps;
  return out;
}

json drb_to_json(const DRBResult& r) {
  json out;
  out["drb_bits"] = r.drb_bits;
  out["rid"] = to_string(r.rid);
  out["formula"] = r.formula;
  out["flags"] = r.hypothesis_flags;
  return out;
}

json rdf_point_to_json(const RdfPoint& p) {
  return json{{"distortion", p.distortion},
              {"rate_bits", p.rate_bits},
              {"grid", json{{"anchor", p.grid.anchor},
                            {"step", p.grid.step},
                            {"count", p.grid.count}}},
              {"ba_iterations", p.ba_iterations}};
}

json gap_report_to_json(const GapReport& g, const std::vector<RdfPoint>& curve) {
  json pts = json::array();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    json pj = rdf_point_to_json(curve[i]);
    pj["gap_bits"] = g.gaps[i];
    pts.push_back(pj);
  }
  return json{{"points", pts}, {"gaps_decreasing", g.decreasing}};
}

json rid_estimate_to_json(const RIDEstimate& e) {
  json scales = json::array();
  for (const ScalePoint& p : e.per_scale)
    scales.push_back(json{{"scale", p.scale},
                          {"entropy_bits", p.entropy_bits},
                          {"distinct", p.distinct},
                          {"used", p.used}});
  return json{{"slope", e.slope},
              {"stderr", e.stderr_bits},
              {"per_scale", scales},
              {"warnings", e.warnings}};
}

json bid_rows_to_json(const std::vector<BIDRow>& rows) {
  json arr = json::array();
  for (const BIDRow& r : rows) {
    json rj;
    rj["m"] = r.m;
    rj["d"] = r.exact ? json(to_string(*r.exact)) : json(nullptr);
    rj["d_over_m"] = r.value;
    rj["lower"] = to_string(r.lower);
    rj["upper"] = to_string(r.upper);
    if (r.ci) rj["ci"] = json::array({r.ci->first, r.ci->second});
    arr.push_back(rj);
  }
  return arr;
}

std::string bid_rows_to_csv(const std::vector<BIDRow>& rows) {
  std::ostringstream out;
  out << "m,d,d_over_m,lower,upper\n";
  out.precision(12);
  for (const BIDRow& r : rows) {
    out << r.m << ',' << (r.exact ? to_string(*r.exact) : std::to_string(r.value))
        << ',' << r.value << ',' << to_double(r.lower) << ',' << to_double(r.upper)
        << '\n';
  }
  return out.str();
}

json alphas_to_json(const std::vector<Rational>& alphas) {
  json arr = json::array();
  for (const Rational& a : alphas) arr.push_back(to_string(a));
  return arr;
}

}  // namespace affdim
