#include "model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "rng.hpp"

namespace affdim {

namespace {

double entropy_term(const Rational& p) {
  double d = p.get_d();
  return d > 0.0 ? -d * std::log2(d) : 0.0;
}

bool finite(double x) { return std::isfinite(x); }

int popcount(BitPattern p) { return std::popcount(p); }

std::vector<int> zero_coords(BitPattern nu, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!(nu & (BitPattern{1} << i))) out.push_back(i);
  return out;
}

}  // namespace

std::string to_string(const Violation& v) { return v.field + ": " + v.rule; }

std::vector<Violation> validate(const SourceSpec& spec) {
  std::vector<Violation> out;
  if (spec.n < 1) out.push_back({"SourceSpec.n", "dimension must be >= 1"});
  if (spec.n > 64)
    out.push_back({"SourceSpec.n", "at most 64 coordinates supported"});
  if (static_cast<int>(spec.coordinates.size()) != spec.n) {
    out.push_back({"SourceSpec.coordinates", "length must equal n"});
    return out;
  }

  for (int i = 0; i < spec.n; ++i) {
    const Coordinate& c = spec.coordinates[i];
    std::string tag = "coordinates[" + std::to_string(i) + "]";
    if (const auto* g = std::get_if<GaussianSpec>(&c.continuous)) {
      if (!finite(g->mean) || !finite(g->variance) || g->variance <= 0.0)
        out.push_back({"ContinuousSpec " + tag, "variance must be finite and > 0"});
    } else if (const auto* u = std::get_if<UniformSpec>(&c.continuous)) {
      if (!finite(u->lo) || !finite(u->hi) || u->hi <= u->lo)
        out.push_back({"ContinuousSpec " + tag, "requires finite hi > lo"});
    }
    if (c.alpha && (*c.alpha < 0 || *c.alpha > 1))
      out.push_back({"NuJointPMF " + tag, "alpha must lie in [0, 1]"});
    if (!spec.has_joint_table() && !c.alpha)
      out.push_back({"NuJointPMF " + tag, "alpha required in product form"});

    if (!c.discrete.atoms.empty()) {
      Rational sum = 0;
      for (const Atom& a : c.discrete.atoms) {
        if (a.prob <= 0 || a.prob > 1)
          out.push_back({"DiscreteSpec " + tag, "atom prob must lie in (0, 1]"});
        sum += a.prob;
      }
      if (sum != 1)
        out.push_back({"DiscreteSpec " + tag,
                       "atom probs sum to " + affdim::to_string(sum) + ", expected 1"});
      for (std::size_t a = 0; a < c.discrete.atoms.size(); ++a)
        for (std::size_t b = a + 1; b < c.discrete.atoms.size(); ++b)
          if (c.discrete.atoms[a].value == c.discrete.atoms[b].value)
            out.push_back({"DiscreteSpec " + tag, "atom values must be distinct"});
    } else if (!spec.has_joint_table() && c.alpha && *c.alpha < 1) {
      out.push_back({"DiscreteSpec " + tag, "atoms required when alpha < 1"});
    }
  }

  if (spec.has_joint_table()) {
    const auto& table = *spec.joint_table;
    Rational sum = 0;
    std::vector<std::pair<BitPattern, std::vector<Rational>>> seen;
    for (std::size_t e = 0; e < table.size(); ++e) {
      const JointEntry& ent = table[e];
      std::string tag = "joint_table[" + std::to_string(e) + "]";
      if (ent.prob < 0 || ent.prob > 1)
        out.push_back({"NuJointPMF " + tag, "prob must lie in [0, 1]"});
      sum += ent.prob;
      if (spec.n <= 64 && ent.nu >> spec.n)
        out.push_back({"NuJointPMF " + tag, "nu pattern wider than n"});
      auto zeros = zero_coords(ent.nu, spec.n);
      if (zeros.size() != ent.xd.size()) {
        out.push_back({"NuJointPMF " + tag,
                       "xd must assign exactly the coordinates with nu_i = 0"});
        continue;
      }
      for (std::size_t k = 0; k < zeros.size(); ++k) {
        const auto& atoms = spec.coordinates[zeros[k]].discrete.atoms;
        bool found = false;
        for (const Atom& a : atoms)
          if (a.value == ent.xd[k]) found = true;
        if (!found)
          out.push_back({"NuJointPMF " + tag,
                         "xd value " + affdim::to_string(ent.xd[k]) +
                             " is not an atom of coordinate " +
                             std::to_string(zeros[k])});
      }
      for (const auto& s : seen)
        if (s.first == ent.nu && s.second == ent.xd)
          out.push_back({"NuJointPMF " + tag, "duplicate (nu, xd) cell"});
      seen.emplace_back(ent.nu, ent.xd);
    }
    if (sum != 1)
      out.push_back({"NuJointPMF joint_table",
                     "probs sum to " + affdim::to_string(sum) + ", expected 1"});

    if (out.empty()) {
      auto alphas = marginal_alpha(spec);
      for (int i = 0; i < spec.n; ++i) {
        const auto& c = spec.coordinates[i];
        if (c.alpha && *c.alpha != alphas[i])
          out.push_back({"NuJointPMF coordinates[" + std::to_string(i) + "]",
                         "declared alpha " + affdim::to_string(*c.alpha) +
                             " differs from joint_table marginal " +
                             affdim::to_string(alphas[i])});
      }
    }
  }
  return out;
}

void require_valid(const SourceSpec& spec) {
  auto v = validate(spec);
  if (!v.empty()) throw std::invalid_argument("invalid SourceSpec: " + to_string(v[0]));
}

std::vector<Rational> marginal_alpha(const SourceSpec& spec) {
  std::vector<Rational> out(spec.n, Rational(0));
  if (!spec.has_joint_table()) {
    for (int i = 0; i < spec.n; ++i) out[i] = spec.coordinates[i].alpha.value_or(0);
    return out;
  }
  for (const JointEntry& e : *spec.joint_table)
    for (int i = 0; i < spec.n; ++i)
      if (e.nu & (BitPattern{1} << i)) out[i] += e.prob;
  return out;
}

namespace {

void enumerate_product(const SourceSpec& spec, int coord, BitPattern nu,
                       std::vector<Rational>& xd, const Rational& prob,
                       const std::function<void(const JointEntry&)>& fn) {
  if (coord == spec.n) {
    fn(JointEntry{nu, xd, prob});
    return;
  }
  const Coordinate& c = spec.coordinates[coord];
  Rational alpha = c.alpha.value_or(0);
  if (alpha < 1) {
    Rational w = prob * (1 - alpha);
    for (const Atom& a : c.discrete.atoms) {
      xd.push_back(a.value);
      enumerate_product(spec, coord + 1, nu, xd, w * a.prob, fn);
      xd.pop_back();
    }
  }
  if (alpha > 0)
    enumerate_product(spec, coord + 1, nu | (BitPattern{1} << coord), xd,
                      prob * alpha, fn);
}

std::vector<JointEntry> sorted_table(const SourceSpec& spec) {
  std::vector<JointEntry> entries;
  for (const JointEntry& e : *spec.joint_table)
    if (e.prob > 0) entries.push_back(e);
  std::sort(entries.begin(), entries.end(),
            [](const JointEntry& a, const JointEntry& b) {
              if (a.nu != b.nu) return a.nu < b.nu;
              for (std::size_t i = 0; i < a.xd.size() && i < b.xd.size(); ++i) {
                int c = cmp(a.xd[i], b.xd[i]);
                if (c != 0) return c < 0;
              }
              return a.xd.size() < b.xd.size();
            });
  return entries;
}

}  // namespace

void for_each_joint(const SourceSpec& spec,
                    const std::function<void(const JointEntry&)>& fn) {
  if (spec.has_joint_table()) {
    for (const JointEntry& e : sorted_table(spec)) fn(e);
    return;
  }
  std::vector<Rational> xd;
  enumerate_product(spec, 0, 0, xd, Rational(1), fn);
}

std::size_t joint_support_size(const SourceSpec& spec) {
  if (spec.has_joint_table()) {
    std::size_t k = 0;
    for (const JointEntry& e : *spec.joint_table)
      if (e.prob > 0) ++k;
    return k;
  }
  std::size_t total = 1;
  for (const Coordinate& c : spec.coordinates) {
    Rational alpha = c.alpha.value_or(0);
    std::size_t branches = (alpha > 0 ? 1 : 0);
    if (alpha < 1) branches += c.discrete.atoms.size();
    if (branches == 0) return 0;
    if (total > (std::size_t{1} << 40) / branches)
      throw std::runtime_error("joint support too large to enumerate");
    total *= branches;
  }
  return total;
}

std::map<BitPattern, Rational> nu_marginal(const SourceSpec& spec) {
  std::map<BitPattern, Rational> out;
  if (spec.has_joint_table()) {
    for (const JointEntry& e : *spec.joint_table)
      if (e.prob > 0) out[e.nu] += e.prob;
    return out;
  }
  // Product form: fold coordinates without touching the x_d support.
  out[0] = 1;
  for (int i = 0; i < spec.n; ++i) {
    Rational alpha = spec.coordinates[i].alpha.value_or(0);
    std::map<BitPattern, Rational> next;
    for (const auto& [pat, p] : out) {
      if (alpha < 1) next[pat] += p * (1 - alpha);
      if (alpha > 0) next[pat | (BitPattern{1} << i)] += p * alpha;
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Rational> hamming_weight_pmf(const SourceSpec& spec) {
  std::vector<Rational> pmf(spec.n + 1, Rational(0));
  if (spec.has_joint_table()) {
    for (const JointEntry& e : *spec.joint_table)
      if (e.prob > 0) pmf[popcount(e.nu)] += e.prob;
    return pmf;
  }
  pmf[0] = 1;
  for (int i = 0; i < spec.n; ++i) {
    Rational alpha = spec.coordinates[i].alpha.value_or(0);
    for (int k = i + 1; k >= 1; --k)
      pmf[k] = pmf[k] * (1 - alpha) + pmf[k - 1] * alpha;
    pmf[0] *= (1 - alpha);
  }
  return pmf;
}

double joint_entropy_bits(const SourceSpec& spec) {
  if (spec.has_joint_table()) {
    double h = 0.0;
    for (const JointEntry& e : *spec.joint_table) h += entropy_term(e.prob);
    return h;
  }
  double h = 0.0;
  for (const Coordinate& c : spec.coordinates) {
    Rational alpha = c.alpha.value_or(0);
    h += entropy_term(alpha) + entropy_term(1 - alpha);
    double discrete = 0.0;
    for (const Atom& a : c.discrete.atoms) discrete += entropy_term(a.prob);
    h += (1 - alpha).get_d() * discrete;
  }
  return h;
}

namespace {

struct TableSampler {
  std::vector<JointEntry> entries;
  std::vector<double> cumulative;
};

TableSampler build_table_sampler(const SourceSpec& spec) {
  TableSampler s;
  s.entries = sorted_table(spec);
  double acc = 0.0;
  for (const JointEntry& e : s.entries) {
    acc += e.prob.get_d();
    s.cumulative.push_back(acc);
  }
  return s;
}

double draw_continuous(const Coordinate& c, std::uint64_t seed, std::uint64_t row,
                       int coord) {
  if (const auto* g = std::get_if<GaussianSpec>(&c.continuous))
    return g->mean + std::sqrt(g->variance) *
                         rand_gaussian(seed, row, draw_counter(coord, DrawKind::kContinuous));
  const auto& u = std::get<UniformSpec>(c.continuous);
  return u.lo + (u.hi - u.lo) *
                    rand_uniform(seed, row, draw_counter(coord, DrawKind::kContinuous));
}

std::size_t pick_cell(const TableSampler& table, double u) {
  auto it = std::lower_bound(table.cumulative.begin(), table.cumulative.end(), u);
  std::size_t k = static_cast<std::size_t>(it - table.cumulative.begin());
  return std::min(k, table.entries.size() - 1);
}

}  // namespace

SampleBatch sample(const SourceSpec& spec, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("empty batch");
  require_valid(spec);
  SampleBatch batch;
  batch.n = spec.n;
  batch.rows = count;
  batch.seed = seed;
  batch.data.resize(count * spec.n);
  batch.nu.resize(count * spec.n);

  std::optional<TableSampler> table;
  if (spec.has_joint_table()) table = build_table_sampler(spec);
  std::vector<double> alphas(spec.n);
  std::vector<std::vector<double>> atom_cum(spec.n);
  std::vector<std::vector<double>> atom_val(spec.n);
  for (int j = 0; j < spec.n; ++j) {
    alphas[j] = spec.coordinates[j].alpha.value_or(0).get_d();
    double acc = 0.0;
    for (const Atom& a : spec.coordinates[j].discrete.atoms) {
      acc += a.prob.get_d();
      atom_cum[j].push_back(acc);
      atom_val[j].push_back(a.value.get_d());
    }
  }

  parallel_blocks(count, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      if (table) {
        double u = rand_uniform(seed, r, draw_counter(0, DrawKind::kJointCell));
        const JointEntry& cell = table->entries[pick_cell(*table, u)];
        std::size_t xi = 0;
        for (int j = 0; j < spec.n; ++j) {
          bool cont = cell.nu & (BitPattern{1} << j);
          batch.nu[r * spec.n + j] = cont ? 1 : 0;
          batch.data[r * spec.n + j] =
              cont ? draw_continuous(spec.coordinates[j], seed, r, j)
                   : cell.xd[xi++].get_d();
        }
      } else {
        for (int j = 0; j < spec.n; ++j) {
          double u = rand_uniform(seed, r, draw_counter(j, DrawKind::kNuBit));
          bool cont = u < alphas[j];
          batch.nu[r * spec.n + j] = cont ? 1 : 0;
          if (cont) {
            batch.data[r * spec.n + j] = draw_continuous(spec.coordinates[j], seed, r, j);
          } else {
            double ua = rand_uniform(seed, r, draw_counter(j, DrawKind::kAtom));
            const auto& cum = atom_cum[j];
            auto it = std::lower_bound(cum.begin(), cum.end(), ua);
            std::size_t k = std::min(static_cast<std::size_t>(it - cum.begin()),
                                     cum.size() - 1);
            batch.data[r * spec.n + j] = atom_val[j][k];
          }
        }
      }
    }
  });
  return batch;
}

NuSampler::NuSampler(const SourceSpec& spec) : n_(spec.n) {
  if (spec.has_joint_table()) {
    double acc = 0.0;
    for (const JointEntry& e : sorted_table(spec)) {
      acc += e.prob.get_d();
      cell_nu_.push_back(e.nu);
      cell_cumulative_.push_back(acc);
    }
  } else {
    for (const Coordinate& c : spec.coordinates)
      alphas_.push_back(c.alpha.value_or(0).get_d());
  }
}

BitPattern NuSampler::draw(std::uint64_t seed, std::uint64_t row) const {
  if (!cell_nu_.empty()) {
    double u = rand_uniform(seed, row, draw_counter(0, DrawKind::kJointCell));
    auto it = std::lower_bound(cell_cumulative_.begin(), cell_cumulative_.end(), u);
    std::size_t k = std::min(static_cast<std::size_t>(it - cell_cumulative_.begin()),
                             cell_nu_.size() - 1);
    return cell_nu_[k];
  }
  BitPattern nu = 0;
  for (int j = 0; j < n_; ++j) {
    double u = rand_uniform(seed, row, draw_counter(j, DrawKind::kNuBit));
    if (u < alphas_[j]) nu |= BitPattern{1} << j;
  }
  return nu;
}

}  // namespace affdim
