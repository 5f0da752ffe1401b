// affdim command-line front end. Links the C API only.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "affdim/affdim.h"

namespace {

using nlohmann::json;

constexpr int kExitNumeric = 1;
constexpr int kExitConfig = 2;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitConfig, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string timestamp_utc() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Every output embeds this block; identical command + configs + seed produce
// identical outputs apart from the timestamp field.
json make_manifest(const std::string& command, const json& config_hashes,
                   std::optional<std::uint64_t> seed) {
  json m;
  m["command"] = command;
  m["config_hashes"] = config_hashes;
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["version"] = affdim_version();
  m["timestamp"] = timestamp_utc();
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitNumeric, "cannot write " + path};
  out << text;
}

void emit_json(const json& payload, const std::string& output_path) {
  std::string text = payload.dump(2) + "\n";
  if (output_path.empty())
    std::cout << text;
  else
    write_text(output_path, text);
}

std::string csv_with_manifest(const std::string& csv, const json& manifest) {
  std::string out;
  out += "# manifest: " + json(manifest).dump() + "\n";
  out += csv;
  return out;
}

// Owned C string -> std::string with RAII cleanup.
struct CStr {
  char* p = nullptr;
  ~CStr() { affdim_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

[[noreturn]] void fail(affdim_status status, const CStr& error) {
  int code = (status == AFFDIM_ERR_PARSE || status == AFFDIM_ERR_VALIDATION ||
              status == AFFDIM_ERR_INVALID_ARGUMENT)
                 ? kExitConfig
                 : kExitNumeric;
  throw CliError{code, error.p ? error.str() : "affdim call failed"};
}

void check(affdim_status status, const CStr& error) {
  if (status != AFFDIM_OK) fail(status, error);
}

struct SourceHandle {
  affdim_source* p = nullptr;
  ~SourceHandle() { affdim_source_free(p); }
};

struct MatrixHandle {
  affdim_matrix* p = nullptr;
  ~MatrixHandle() { affdim_matrix_free(p); }
};

void load_source(const std::string& path, SourceHandle& src, json& hashes) {
  std::string text = read_file(path);
  hashes["source"] = fnv1a(text);
  CStr err;
  check(affdim_source_from_json(text.c_str(), &src.p, &err.p), err);
  CStr violations, verr;
  check(affdim_source_validate(src.p, &violations.p, &verr.p), verr);
  json v = json::parse(violations.str());
  if (!v.empty())
    throw CliError{kExitConfig, "source validation failed: " + v.dump()};
}

void load_matrix(const std::string& path, MatrixHandle& mat, json& hashes) {
  std::string text = read_file(path);
  hashes["matrix"] = fnv1a(text);
  CStr err;
  check(affdim_matrix_from_json(text.c_str(), &mat.p, &err.p), err);
}

std::vector<std::uint64_t> parse_scales(const std::string& text) {
  std::vector<std::uint64_t> scales;
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    std::uint64_t lo = std::stoull(text.substr(0, dots));
    std::uint64_t hi = std::stoull(text.substr(dots + 2));
    for (std::uint64_t m = lo; m <= hi; m *= 2) scales.push_back(m);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) scales.push_back(std::stoull(item));
  }
  if (scales.size() < 2) throw CliError{kExitConfig, "need at least 2 scales"};
  return scales;
}

std::pair<int, int> parse_m_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    int m = std::stoi(text);
    return {m, m};
  }
  return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

// Built-in inputs for `repro` (the worked examples shipped with the tool).

std::string bg_source_json(int n, const std::string& alpha,
                           const std::vector<double>& variances) {
  json coords = json::array();
  for (int i = 0; i < n; ++i) {
    coords.push_back(
        json{{"alpha", alpha},
             {"continuous",
              {{"kind", "gaussian"}, {"mean", 0.0}, {"variance", variances[i]}}},
             {"atoms", json::array({json{{"value", "0"}, {"prob", "1"}}})}});
  }
  return json{{"n", n}, {"coordinates", coords}}.dump();
}

std::string table_source_json(const std::vector<std::pair<std::string, std::string>>&
                                  cells /* (nu, prob) over 2 coords */) {
  json coords = json::array();
  for (int i = 0; i < 2; ++i)
    coords.push_back(
        json{{"continuous", {{"kind", "gaussian"}, {"mean", 0.0}, {"variance", 1.0}}},
             {"atoms", json::array({json{{"value", "0"}, {"prob", "1"}}})}});
  json table = json::array();
  for (const auto& [nu, prob] : cells) {
    json xd = json::object();
    for (int i = 0; i < 2; ++i)
      if (nu[i] == '0') xd[std::to_string(i)] = "0";
    table.push_back(json{{"nu", nu}, {"xd", xd}, {"prob", prob}});
  }
  return json{{"n", 2}, {"coordinates", coords}, {"joint_table", table}}.dump();
}

std::string matrix_json(int rows, int cols,
                        const std::vector<std::vector<std::string>>& entries) {
  json rowsj = json::array();
  for (const auto& row : entries) {
    json r = json::array();
    for (const auto& e : row) r.push_back(e);
    rowsj.push_back(r);
  }
  return json{{"rows", rows}, {"cols", cols}, {"entries", rowsj}}.dump();
}

json rid_of(const std::string& source_json, const std::string& matrix_json_text) {
  SourceHandle src;
  MatrixHandle mat;
  CStr e1, e2, e3, out;
  check(affdim_source_from_json(source_json.c_str(), &src.p, &e1.p), e1);
  check(affdim_matrix_from_json(matrix_json_text.c_str(), &mat.p, &e2.p), e2);
  check(affdim_rid_exact(src.p, mat.p, &out.p, &e3.p), e3);
  return json::parse(out.str());
}

int run_repro(const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  json hashes{{"inputs", "builtin"}};
  json manifest = make_manifest("affdim repro", hashes, std::nullopt);

  // Worked example: invertible and rank-deficient 3x3 transforms of the
  // Bernoulli-Gaussian source with alpha = 1/2, sigma_i = 2i/5.
  std::string bg3 = bg_source_json(3, "1/2", {0.16, 0.64, 1.44});
  std::string a_inv = matrix_json(
      3, 3, {{"1", "-1", "3/10"}, {"1", "1/2", "1"}, {"1/2", "-1", "1/2"}});
  std::string a_tilde =
      matrix_json(3, 3, {{"1", "1", "0"}, {"0", "1", "1"}, {"1", "0", "-1"}});

  json rid_examples;
  rid_examples["invertible_A"] = rid_of(bg3, a_inv);
  rid_examples["rank_deficient_A"] = rid_of(bg3, a_tilde);

  // Dependence gap: Y = [1 2] X under the three joint nu laws with equal
  // marginals (independent Q, and dependent Q', Q'').
  std::string a_row = matrix_json(1, 2, {{"1", "2"}});
  json gap;
  gap["Q_independent"] = rid_of(
      table_source_json(
          {{"00", "9/50"}, {"01", "3/25"}, {"10", "21/50"}, {"11", "7/25"}}),
      a_row);
  gap["Qprime"] = rid_of(
      table_source_json({{"00", "0"}, {"01", "3/10"}, {"10", "3/5"}, {"11", "1/10"}}),
      a_row);
  gap["Qdoubleprime"] = rid_of(
      table_source_json({{"00", "3/10"}, {"01", "0"}, {"10", "3/10"}, {"11", "2/5"}}),
      a_row);
  rid_examples["dependence_gap"] = gap;
  emit_json(json{{"manifest", manifest}, {"result", rid_examples}},
            (fs::path(out_dir) / "rid_examples.json").string());

  // BID curve, taps [-2, 1/2, 1], alpha = 7/10, m = 1..12 (exact mode).
  CStr csv, bid_json, err;
  check(affdim_ma_report("-2,0.5,1", "7/10", 1, 12, 0, 0, &csv.p, &bid_json.p, &err.p),
        err);
  write_text((fs::path(out_dir) / "bid_curve.csv").string(),
             csv_with_manifest(csv.str(), manifest));
  std::string gp =
      "set datafile separator ','\n"
      "set key left bottom\n"
      "set xlabel 'm'\n"
      "set ylabel 'd(Y^m)/m'\n"
      "plot 'bid_curve.csv' every ::2 using 1:3 with linespoints title 'd/m', \\\n"
      "     'bid_curve.csv' every ::2 using 1:4 with lines title 'lower', \\\n"
      "     'bid_curve.csv' every ::2 using 1:5 with lines title 'upper'\n";
  write_text((fs::path(out_dir) / "bid_curve.gp").string(), gp);

  // DRB closed-form values: scalar Bernoulli-Gaussian and the invertible
  // 3x3 example above.
  json drb_examples;
  {
    SourceHandle src;
    MatrixHandle mat;
    CStr e1, e2, e3, out;
    std::string bg1 = bg_source_json(1, "1/2", {1.0});
    std::string a1 = matrix_json(1, 1, {{"1"}});
    check(affdim_source_from_json(bg1.c_str(), &src.p, &e1.p), e1);
    check(affdim_matrix_from_json(a1.c_str(), &mat.p, &e2.p), e2);
    check(affdim_drb(src.p, mat.p, nullptr, 0, 0.0, &out.p, &e3.p), e3);
    drb_examples["scalar_bernoulli_gaussian"] = json::parse(out.str());
  }
  {
    SourceHandle src;
    MatrixHandle mat;
    CStr e1, e2, e3, out;
    check(affdim_source_from_json(bg3.c_str(), &src.p, &e1.p), e1);
    check(affdim_matrix_from_json(a_inv.c_str(), &mat.p, &e2.p), e2);
    check(affdim_drb(src.p, mat.p, nullptr, 0, 0.0, &out.p, &e3.p), e3);
    drb_examples["invertible_A"] = json::parse(out.str());
  }
  emit_json(json{{"manifest", manifest}, {"result", drb_examples}},
            (fs::path(out_dir) / "drb_examples.json").string());

  json summary{{"manifest", manifest},
               {"files", {"rid_examples.json", "bid_curve.csv", "bid_curve.gp",
                          "drb_examples.json"}},
               {"expected", {{"invertible_A", "3/2"},
                             {"rank_deficient_A", "11/8"},
                             {"dependence_gap", {{"Q_independent", "41/50"},
                                                 {"Qprime", "1"},
                                                 {"Qdoubleprime", "7/10"}}}}}};
  emit_json(summary, (fs::path(out_dir) / "summary.json").string());
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressibility measures of linearly transformed discrete-continuous sources"};
  app.require_subcommand(1);
  std::string command_line = join_args(argc, argv);

  std::string source_path, matrix_path, output_path, csv_path;
  std::string scales_text = "16..1024", m_range = "1..12", taps, alpha;
  std::uint64_t mc = 0, samples = 1000000, seed = 0;
  bool audit = false;
  std::vector<double> oracle_d;
  double grid_step = 0.0;
  int n_param = 0, k_param = 0, m_param = 0;
  double eps = 0.0, delta = 0.0;
  std::string out_dir = "report";

  auto* rid = app.add_subcommand("rid", "exact or Monte Carlo RID of Y = AX");
  rid->add_option("--source", source_path)->required();
  rid->add_option("--matrix", matrix_path)->required();
  rid->add_option("--mc", mc, "Monte Carlo sample count (0 = exact)");
  rid->add_option("--seed", seed);
  rid->add_option("-o,--output", output_path);

  auto* dec = app.add_subcommand("decompose", "affinely singular decomposition");
  dec->add_option("--source", source_path)->required();
  dec->add_option("--matrix", matrix_path)->required();
  dec->add_flag("--audit", audit, "include member lists");
  dec->add_option("-o,--output", output_path);

  auto* drb = app.add_subcommand("drb", "dimensional rate bias");
  drb->add_option("--source", source_path)->required();
  drb->add_option("--matrix", matrix_path)->required();
  drb->add_option("--oracle", oracle_d, "distortions for the RDF oracle check");
  drb->add_option("--grid-step", grid_step, "oracle grid step override");
  drb->add_option("-o,--output", output_path);

  auto* emp = app.add_subcommand("empirical-rid", "RID from quantized-sample entropy");
  emp->add_option("--source", source_path)->required();
  emp->add_option("--matrix", matrix_path, "optional; identity when omitted");
  emp->add_option("--scales", scales_text, "e.g. 16..1024 or 16,32,64");
  emp->add_option("--samples", samples);
  emp->add_option("--seed", seed);
  emp->add_option("--csv", csv_path, "write per-scale entropies here");
  emp->add_option("-o,--output", output_path);

  auto* ma = app.add_subcommand("ma", "moving-average BID curve");
  ma->add_option("--taps", taps)->required();
  ma->add_option("--alpha", alpha)->required();
  ma->add_option("--m", m_range, "m or lo..hi");
  ma->add_option("--mc", mc, "Monte Carlo sample count (0 = exact)");
  ma->add_option("--seed", seed);
  ma->add_option("-o,--output", output_path, "CSV output path");

  auto* mb = app.add_subcommand("ma-bounds", "singularity-dimension concentration bounds");
  mb->add_option("--taps", taps)->required();
  mb->add_option("--alpha", alpha)->required();
  mb->add_option("--n", n_param)->required();
  mb->add_option("--k", k_param)->required();
  mb->add_option("--eps", eps);
  mb->add_option("--delta", delta);
  mb->add_option("-o,--output", output_path);

  auto* sp = app.add_subcommand("spark", "spark, rank, and the spark = rank+1 check");
  sp->add_option("--matrix", matrix_path)->required();
  sp->add_option("-o,--output", output_path);

  auto* lip = app.add_subcommand("lipschitz-bound",
                                 "E[min(|nu|_1, m)], the Lipschitz RID upper bound");
  lip->add_option("--source", source_path)->required();
  lip->add_option("--m", m_param)->required();
  lip->add_option("-o,--output", output_path);

  auto* rep = app.add_subcommand("repro", "regenerate the worked-example tables");
  rep->add_option("--out-dir", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    json hashes = json::object();
    if (rep->parsed()) return run_repro(out_dir);

    if (sp->parsed()) {
      MatrixHandle mat;
      load_matrix(matrix_path, mat, hashes);
      CStr out, err;
      check(affdim_spark_info(mat.p, &out.p, &err.p), err);
      emit_json(json{{"manifest", make_manifest(command_line, hashes, std::nullopt)},
                     {"result", json::parse(out.str())}},
                output_path);
      return 0;
    }

    if (mb->parsed()) {
      CStr out, err;
      hashes["taps"] = fnv1a(taps);
      check(affdim_ma_bounds(taps.c_str(), alpha.c_str(), n_param, k_param, eps,
                             delta, &out.p, &err.p),
            err);
      emit_json(json{{"manifest", make_manifest(command_line, hashes, std::nullopt)},
                     {"result", json::parse(out.str())}},
                output_path);
      return 0;
    }

    if (ma->parsed()) {
      CStr csv, out, err;
      hashes["taps"] = fnv1a(taps);
      auto [lo, hi] = parse_m_range(m_range);
      check(affdim_ma_report(taps.c_str(), alpha.c_str(), lo, hi, mc, seed, &csv.p,
                             &out.p, &err.p),
            err);
      json manifest = make_manifest(command_line, hashes,
                                    mc ? std::optional<std::uint64_t>(seed)
                                       : std::nullopt);
      std::string text = csv_with_manifest(csv.str(), manifest);
      if (output_path.empty())
        std::cout << text;
      else
        write_text(output_path, text);
      return 0;
    }

    SourceHandle src;
    load_source(source_path, src, hashes);

    if (lip->parsed()) {
      CStr out, err;
      check(affdim_lipschitz_upper_bound(src.p, m_param, &out.p, &err.p), err);
      emit_json(json{{"manifest", make_manifest(command_line, hashes, std::nullopt)},
                     {"result", json::parse(out.str())}},
                output_path);
      return 0;
    }

    MatrixHandle mat;
    bool have_matrix = !matrix_path.empty();
    if (have_matrix) load_matrix(matrix_path, mat, hashes);

    if (rid->parsed()) {
      CStr out, err;
      affdim_status st = mc
                             ? affdim_rid_mc(src.p, mat.p, mc, seed, &out.p, &err.p)
                             : affdim_rid_exact(src.p, mat.p, &out.p, &err.p);
      check(st, err);
      emit_json(json{{"manifest",
                      make_manifest(command_line, hashes,
                                    mc ? std::optional<std::uint64_t>(seed)
                                       : std::nullopt)},
                     {"result", json::parse(out.str())}},
                output_path);
      return 0;
    }

    if (dec->parsed()) {
      CStr out, err;
      check(affdim_decompose(src.p, mat.p, audit ? 1 : 0, &out.p, &err.p), err);
      emit_json(json{{"manifest", make_manifest(command_line, hashes, std::nullopt)},
                     {"result", json::parse(out.str())}},
                output_path);
      return 0;
    }

    if (drb->parsed()) {
      CStr out, err;
      check(affdim_drb(src.p, mat.p, oracle_d.empty() ? nullptr : oracle_d.data(),
                       oracle_d.size(), grid_step, &out.p, &err.p),
            err);
      emit_json(json{{"manifest", make_manifest(command_line, hashes, std::nullopt)},
                     {"result", json::parse(out.str())}},
                output_path);
      return 0;
    }

    if (emp->parsed()) {
      auto scales = parse_scales(scales_text);
      CStr csv, out, err;
      check(affdim_empirical_rid(src.p, have_matrix ? mat.p : nullptr, scales.data(),
                                 scales.size(), samples, seed, &csv.p, &out.p,
                                 &err.p),
            err);
      json manifest = make_manifest(command_line, hashes, seed);
      if (!csv_path.empty()) write_text(csv_path, csv_with_manifest(csv.str(), manifest));
      emit_json(json{{"manifest", manifest}, {"result", json::parse(out.str())}},
                output_path);
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "affdim: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "affdim: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
