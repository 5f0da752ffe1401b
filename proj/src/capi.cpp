#include "affdim/affdim.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "decompose.hpp"
#include "drb.hpp"
#include "empirical.hpp"
#include "json_io.hpp"
#include "ma.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "rdf.hpp"
#include "rid.hpp"
#include "version.hpp"

using nlohmann::json;

struct affdim_source {
  affdim::SourceSpec spec;
};

struct affdim_matrix {
  affdim::RationalMatrix m;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error, const std::string& message) {
  if (error) *error = dup_string(message);
}

// Maps C++ failures onto status codes; the lambda does the actual work.
template <typename Fn>
affdim_status guarded(char** error, Fn&& fn) {
  if (error) *error = nullptr;
  try {
    return fn();
  } catch (const affdim::ParseError& e) {
    set_error(error, e.what());
    return AFFDIM_ERR_PARSE;
  } catch (const json::exception& e) {
    set_error(error, e.what());
    return AFFDIM_ERR_PARSE;
  } catch (const std::invalid_argument& e) {
    set_error(error, e.what());
    return AFFDIM_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    set_error(error, e.what());
    return AFFDIM_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    set_error(error, "out of memory");
    return AFFDIM_ERR_INTERNAL;
  } catch (...) {
    set_error(error, "unknown internal error");
    return AFFDIM_ERR_INTERNAL;
  }
}

affdim_status require_valid_source(const affdim_source* source, char** error) {
  auto violations = affdim::validate(source->spec);
  if (violations.empty()) return AFFDIM_OK;
  set_error(error, "invalid source: " +
                       affdim::violations_to_json(violations).dump());
  return AFFDIM_ERR_VALIDATION;
}

}  // namespace

extern "C" {

const char* affdim_version(void) { return affdim::kVersion; }

void affdim_string_free(char* s) { std::free(s); }

affdim_status affdim_source_from_json(const char* text, affdim_source** out,
                                      char** error) {
  if (!text || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(error, [&] {
    auto spec = affdim::source_from_json_text(text);
    *out = new affdim_source{std::move(spec)};
    return AFFDIM_OK;
  });
}

void affdim_source_free(affdim_source* source) { delete source; }

affdim_status affdim_source_validate(const affdim_source* source,
                                     char** violations_json, char** error) {
  if (!source || !violations_json) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    *violations_json =
        dup_string(affdim::violations_to_json(affdim::validate(source->spec)).dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_source_marginal_alpha(const affdim_source* source, char** out,
                                           char** error) {
  if (!source || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim_status st = require_valid_source(source, error);
    if (st != AFFDIM_OK) return st;
    *out = dup_string(
        affdim::alphas_to_json(affdim::marginal_alpha(source->spec)).dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_matrix_from_json(const char* text, affdim_matrix** out,
                                      char** error) {
  if (!text || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(error, [&] {
    auto m = affdim::matrix_from_json_text(text);
    *out = new affdim_matrix{std::move(m)};
    return AFFDIM_OK;
  });
}

void affdim_matrix_free(affdim_matrix* matrix) { delete matrix; }

affdim_status affdim_spark_info(const affdim_matrix* matrix, char** out,
                                char** error) {
  if (!matrix || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    int r = affdim::rank(matrix->m);
    int s = affdim::spark(matrix->m);
    json j{{"rank", r}, {"spark", s}, {"condition", s == r + 1}};
    *out = dup_string(j.dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_rid_exact(const affdim_source* source,
                               const affdim_matrix* matrix, char** out,
                               char** error) {
  if (!source || !matrix || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim_status st = require_valid_source(source, error);
    if (st != AFFDIM_OK) return st;
    auto r = affdim::rid_linear(source->spec, matrix->m);
    *out = dup_string(affdim::rid_to_json(r).dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_rid_mc(const affdim_source* source, const affdim_matrix* matrix,
                            uint64_t samples, uint64_t seed, char** out,
                            char** error) {
  if (!source || !matrix || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim_status st = require_valid_source(source, error);
    if (st != AFFDIM_OK) return st;
    auto r = affdim::rid_linear_mc(source->spec, matrix->m, samples, seed);
    *out = dup_string(affdim::rid_to_json(r).dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_lipschitz_upper_bound(const affdim_source* source, int m,
                                           char** out, char** error) {
  if (!source || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim_status st = require_valid_source(source, error);
    if (st != AFFDIM_OK) return st;
    auto v = affdim::lipschitz_upper_bound(source->spec, m);
    json j{{"value", affdim::to_string(v)}, {"value_float", v.get_d()}};
    *out = dup_string(j.dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_decompose(const affdim_source* source,
                               const affdim_matrix* matrix, int audit, char** out,
                               char** error) {
  if (!source || !matrix || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim_status st = require_valid_source(source, error);
    if (st != AFFDIM_OK) return st;
    auto d = affdim::decompose(source->spec, matrix->m);
    *out = dup_string(affdim::decomposition_to_json(d, audit != 0).dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_drb(const affdim_source* source, const affdim_matrix* matrix,
                         const double* oracle_distortions, size_t n_distortions,
                         double grid_step_hint, char** out, char** error) {
  if (!source || !matrix || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim_status st = require_valid_source(source, error);
    if (st != AFFDIM_OK) return st;
    auto b = affdim::drb_linear(source->spec, matrix->m);
    json j = affdim::drb_to_json(b);
    if (oracle_distortions && n_distortions > 0) {
      std::vector<affdim::RdfPoint> curve;
      for (size_t i = 0; i < n_distortions; ++i)
        curve.push_back(affdim::rdf_oracle_scalar(
            source->spec, oracle_distortions[i],
            grid_step_hint > 0 ? grid_step_hint : 0.0));
      auto gaps = affdim::drb_limit_gap(b, curve);
      j["oracle"] = affdim::gap_report_to_json(gaps, curve);
    } else {
      j["oracle"] = nullptr;
    }
    *out = dup_string(j.dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_empirical_rid(const affdim_source* source,
                                   const affdim_matrix* matrix,
                                   const uint64_t* scales, size_t n_scales,
                                   uint64_t samples, uint64_t seed, char** csv,
                                   char** out, char** error) {
  if (!source || !scales || n_scales == 0 || !csv || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim_status st = require_valid_source(source, error);
    if (st != AFFDIM_OK) return st;
    std::vector<uint64_t> sc(scales, scales + n_scales);
    auto est = affdim::empirical_rid(source->spec, matrix ? &matrix->m : nullptr,
                                     sc, samples, seed);
    std::string table = "scale,entropy_bits\n";
    for (const auto& p : est.per_scale)
      table += std::to_string(p.scale) + "," + std::to_string(p.entropy_bits) + "\n";
    *csv = dup_string(table);
    *out = dup_string(affdim::rid_estimate_to_json(est).dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_ma_report(const char* taps_csv, const char* alpha, int m_lo,
                               int m_hi, uint64_t mc_samples, uint64_t seed,
                               char** csv, char** out, char** error) {
  if (!taps_csv || !alpha || !csv || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim::MAConfig cfg;
    cfg.taps = affdim::parse_rational_list(taps_csv);
    cfg.alpha = affdim::parse_rational(alpha);
    affdim::validate_ma(cfg);
    if (m_lo < 1 || m_hi < m_lo)
      throw std::invalid_argument("require 1 <= m_lo <= m_hi");
    std::vector<int> ms;
    for (int m = m_lo; m <= m_hi; ++m) ms.push_back(m);
    auto rows = affdim::bid_report(cfg, ms, mc_samples, seed);
    *csv = dup_string(affdim::bid_rows_to_csv(rows));
    *out = dup_string(affdim::bid_rows_to_json(rows).dump(2));
    return AFFDIM_OK;
  });
}

affdim_status affdim_ma_bounds(const char* taps_csv, const char* alpha, int n, int k,
                               double eps, double delta, char** out, char** error) {
  if (!taps_csv || !alpha || !out) {
    set_error(error, "null argument");
    return AFFDIM_ERR_INVALID_ARGUMENT;
  }
  return guarded(error, [&] {
    affdim::MAConfig cfg;
    cfg.taps = affdim::parse_rational_list(taps_csv);
    cfg.alpha = affdim::parse_rational(alpha);
    affdim::validate_ma(cfg);
    auto b = affdim::concentration_bounds(cfg, n, k);
    json j{{"n", n},
           {"k", k},
           {"band_width", cfg.band_width()},
           {"p_above", b.p_above},
           {"p_below", b.p_below},
           {"above_applicable", b.above_applicable},
           {"below_applicable", b.below_applicable}};
    if (eps > 0.0 && delta > 0.0) {
      auto t = affdim::sample_size_threshold(eps, delta, cfg.alpha.get_d(),
                                             cfg.band_width(), 0);
      j["threshold_lower_tail"] = t.first;
      j["threshold_upper_tail"] = t.second;
    }
    *out = dup_string(j.dump(2));
    return AFFDIM_OK;
  });
}

}  // extern "C"
