#include "lazyboost/boosting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lazyboost {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Per-label mass split by membership sign over the whole distribution.
struct LabelMass {
  std::vector<double> plus;
  std::vector<double> minus;
};

LabelMass label_mass(const Dataset& ds, const Distribution& dist) {
  const std::size_t k = dist.labels();
  LabelMass out{std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto row = dist.row(i);
    const SenseId y = ds.example(i).label;
    for (std::size_t l = 0; l < y; ++l) out.minus[l] += row[l];
    out.plus[y] += row[y];
    for (std::size_t l = y + 1; l < k; ++l) out.minus[l] += row[l];
  }
  return out;
}

/// Fills `w` for one attribute: the holds partition is summed over its
/// postings, the fails partition is the complement of the label totals.
void fill_weight_table(WeightTable& w, const Dataset& ds, const Distribution& dist, const LabelMass& mass,
                       AttrId attr) {
  const std::size_t k = dist.labels();
  for (std::size_t l = 0; l < k; ++l) {
    w(1, l, kPlus) = 0.0;
    w(1, l, kMinus) = 0.0;
  }
  for (const auto i : ds.index().postings(attr)) {
    const auto row = dist.row(i);
    const SenseId y = ds.example(i).label;
    for (std::size_t l = 0; l < y; ++l) w(1, l, kMinus) += row[l];
    w(1, y, kPlus) += row[y];
    for (std::size_t l = y + 1; l < k; ++l) w(1, l, kMinus) += row[l];
  }
  for (std::size_t l = 0; l < k; ++l) {
    w(0, l, kPlus) = std::max(0.0, mass.plus[l] - w(1, l, kPlus));
    w(0, l, kMinus) = std::max(0.0, mass.minus[l] - w(1, l, kMinus));
  }
}

void write_real(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::string attr_key(const FeatureValue& fv) {
  std::string k(1, static_cast<char>('0' + static_cast<int>(fv.position)));
  k += fv.value;
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------

Distribution::Distribution(std::size_t examples, std::size_t labels, std::vector<double> weights)
    : m_(examples), k_(labels), w_(std::move(weights)) {
  if (w_.size() != m_ * k_) throw std::invalid_argument("distribution shape mismatch");
}

double Distribution::total() const {
  return std::accumulate(w_.begin(), w_.end(), 0.0);
}

Distribution init_distribution(std::size_t examples, std::size_t labels) {
  if (examples == 0 || labels == 0) throw std::invalid_argument("empty distribution");
  const double v = 1.0 / (static_cast<double>(examples) * static_cast<double>(labels));
  return {examples, labels, std::vector<double>(examples * labels, v)};
}

double WeightTable::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), 0.0);
}

WeightTable weight_table(const Dataset& ds, const Distribution& dist, AttrId attr) {
  if (attr >= ds.num_attributes()) throw std::out_of_range("attribute id out of range");
  WeightTable w(dist.labels());
  fill_weight_table(w, ds, dist, label_mass(ds, dist), attr);
  return w;
}

Confidences rule_confidences(const WeightTable& w, double smoothing) {
  const std::size_t k = w.labels();
  Confidences c{std::vector<double>(k), std::vector<double>(k)};
  for (std::size_t l = 0; l < k; ++l) {
    c.c0[l] = 0.5 * std::log((w(0, l, kPlus) + smoothing) / (w(0, l, kMinus) + smoothing));
    c.c1[l] = 0.5 * std::log((w(1, l, kPlus) + smoothing) / (w(1, l, kMinus) + smoothing));
  }
  return c;
}

double rule_z(const WeightTable& w) {
  double z = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (std::size_t l = 0; l < w.labels(); ++l) z += std::sqrt(w(j, l, kPlus) * w(j, l, kMinus));
  }
  return 2.0 * z;
}

namespace {

RuleChoice best_rule_with_mass(const Dataset& ds, const Distribution& dist, const LabelMass& mass,
                               std::span<const AttrId> candidates, double smoothing) {
  if (candidates.empty()) throw std::invalid_argument("weak learner needs at least one candidate");
  WeightTable w(dist.labels());
  std::vector<double> z(candidates.size());
  double z_min = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    fill_weight_table(w, ds, dist, mass, candidates[c]);
    z[c] = rule_z(w);
    z_min = std::min(z_min, z[c]);
  }
  std::size_t pick = candidates.size();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (z[c] <= z_min + kZTieTolerance && (pick == candidates.size() || candidates[c] < candidates[pick])) {
      pick = c;
    }
  }
  fill_weight_table(w, ds, dist, mass, candidates[pick]);
  auto conf = rule_confidences(w, smoothing);
  return {WeakRule{candidates[pick], std::move(conf.c0), std::move(conf.c1)}, z[pick]};
}

}  // namespace

RuleChoice best_rule(const Dataset& ds, const Distribution& dist, std::span<const AttrId> candidates,
                     double smoothing) {
  for (AttrId a : candidates) {
    if (a >= ds.num_attributes()) throw std::out_of_range("candidate attribute out of range");
  }
  return best_rule_with_mass(ds, dist, label_mass(ds, dist), candidates, smoothing);
}

double update_distribution(Distribution& dist, const WeakRule& rule, const Dataset& ds) {
  const std::size_t k = dist.labels();
  if (rule.c0.size() != k || rule.c1.size() != k) throw std::invalid_argument("rule arity mismatch");

  // factor[j][l][b] = exp(-b * c_jl)
  std::vector<double> factor(4 * k);
  for (std::size_t l = 0; l < k; ++l) {
    factor[(0 * k + l) * 2 + kPlus] = std::exp(-rule.c0[l]);
    factor[(0 * k + l) * 2 + kMinus] = std::exp(rule.c0[l]);
    factor[(1 * k + l) * 2 + kPlus] = std::exp(-rule.c1[l]);
    factor[(1 * k + l) * 2 + kMinus] = std::exp(rule.c1[l]);
  }

  auto w = dist.mutable_weights();
  double z = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& ex = ds.example(i);
    const std::size_t j = rule_holds(ex, rule.attr) ? 1 : 0;
    double* row = w.data() + i * k;
    const double* f = factor.data() + j * k * 2;
    for (std::size_t l = 0; l < k; ++l) {
      row[l] *= f[l * 2 + (l == ex.label ? kPlus : kMinus)];
      z += row[l];
    }
  }
  for (auto& v : w) v /= z;
  return z;
}

// ---------------------------------------------------------------------------

SenseId argmax_sense(std::span<const double> scores, std::span<const std::uint32_t> sense_counts,
                     double tolerance) {
  const double best = *std::max_element(scores.begin(), scores.end());
  SenseId pick = 0;
  bool found = false;
  for (SenseId s = 0; s < scores.size(); ++s) {
    if (scores[s] < best - tolerance) continue;
    const std::uint32_t count = s < sense_counts.size() ? sense_counts[s] : 0;
    if (!found || count > (pick < sense_counts.size() ? sense_counts[pick] : 0)) {
      pick = s;
      found = true;
    }
  }
  return pick;
}

CombinedModel::CombinedModel(std::string word, std::string pos, std::vector<std::string> senses,
                             std::vector<std::uint32_t> sense_counts, std::vector<FeatureValue> attributes)
    : word_(std::move(word)),
      pos_(std::move(pos)),
      senses_(std::move(senses)),
      sense_counts_(std::move(sense_counts)),
      attributes_(std::move(attributes)) {
  if (sense_counts_.size() != senses_.size()) throw ModelError("sense count table does not match senses");
  lookup_.reserve(attributes_.size());
  for (AttrId a = 0; a < attributes_.size(); ++a) lookup_.emplace(attr_key(attributes_[a]), a);
}

void CombinedModel::add_rule(WeakRule rule, std::optional<RoundLog> log) {
  if (rule.c0.size() != senses_.size() || rule.c1.size() != senses_.size()) {
    throw ModelError("rule arity does not match the sense count");
  }
  if (rule.attr >= attributes_.size()) throw ModelError("rule attribute out of range");
  rules_.push_back(std::move(rule));
  if (log) log_.push_back(*log);
}

std::vector<double> CombinedModel::score(const SparseExample& ex, std::optional<std::size_t> prefix) const {
  const std::size_t n = std::min(prefix.value_or(rules_.size()), rules_.size());
  std::vector<double> f(senses_.size(), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& rule = rules_[t];
    const auto& c = rule_holds(ex, rule.attr) ? rule.c1 : rule.c0;
    for (std::size_t l = 0; l < f.size(); ++l) f[l] += c[l];
  }
  return f;
}

SenseId CombinedModel::classify(const SparseExample& ex, std::optional<std::size_t> prefix) const {
  return argmax_sense(score(ex, prefix), sense_counts_);
}

SparseExample CombinedModel::encode(const RawInstance& inst) const {
  SparseExample ex;
  const auto features = extract_features(inst);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const auto it = lookup_.find(attr_key(features[f]));
    ex.attrs[f] = it == lookup_.end() ? kUnknownAttr : it->second;
  }
  std::sort(ex.attrs.begin(), ex.attrs.end());
  const auto it = std::find(senses_.begin(), senses_.end(), inst.sense_label);
  ex.label = it == senses_.end() ? 0 : static_cast<SenseId>(it - senses_.begin());
  return ex;
}

// ---------------------------------------------------------------------------

CombinedModel train(const Dataset& ds, const TrainConfig& config, std::span<const AttrId> pool,
                    TrainTiming* timing) {
  const auto start = Clock::now();
  const std::size_t m = ds.size();
  const std::size_t k = ds.num_senses();
  if (m == 0) throw std::invalid_argument("cannot train on an empty dataset");
  if (k < 2) throw std::invalid_argument("boosting needs at least two senses");
  if (config.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  if (!(config.stop_error >= 0.0 && config.stop_error < 1.0)) {
    throw std::invalid_argument("stop_error must lie in [0, 1)");
  }
  const double smoothing = config.smoothing.value_or(1.0 / (static_cast<double>(m) * static_cast<double>(k)));
  if (!(smoothing > 0)) throw std::invalid_argument("smoothing must be positive");

  std::vector<AttrId> owned_pool;
  if (pool.empty()) {
    owned_pool = all_attributes(ds).kept;
    pool = owned_pool;
  }
  for (AttrId a : pool) {
    if (a >= ds.num_attributes()) throw std::out_of_range("pool attribute out of range");
  }
  if (pool.empty()) throw std::invalid_argument("empty candidate pool");
  const bool lazy = config.sampler.proportion < 1.0;

  std::vector<std::uint32_t> counts(ds.sense_totals().begin(), ds.sense_totals().end());
  CombinedModel model(ds.word(), ds.pos(), {ds.senses().begin(), ds.senses().end()}, counts,
                      {ds.index().values().begin(), ds.index().values().end()});

  Distribution dist = init_distribution(m, k);
  std::vector<double> f(m * k, 0.0);
  double log_bound = 0.0;
  double wl_seconds = 0.0;

  for (std::size_t t = 1; t <= config.max_rounds; ++t) {
    const auto wl_start = Clock::now();
    const LabelMass mass = label_mass(ds, dist);
    RuleChoice choice;
    if (lazy) {
      const auto candidates = sample_candidates(pool, config.sampler, t);
      choice = best_rule_with_mass(ds, dist, mass, candidates, smoothing);
    } else {
      choice = best_rule_with_mass(ds, dist, mass, pool, smoothing);
    }
    wl_seconds += seconds_since(wl_start);

    const double z_emp = update_distribution(dist, choice.rule, ds);
    log_bound += std::log(z_emp);

    std::size_t errors = 0;
    std::size_t sign_errors = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& ex = ds.example(i);
      const auto& c = rule_holds(ex, choice.rule.attr) ? choice.rule.c1 : choice.rule.c0;
      double* row = f.data() + i * k;
      for (std::size_t l = 0; l < k; ++l) {
        row[l] += c[l];
        const bool member = l == ex.label;
        if (member ? !(row[l] > 0) : !(row[l] < 0)) ++sign_errors;
      }
      if (argmax_sense({row, k}, counts) != ex.label) ++errors;
    }

    RoundLog log;
    log.round = t;
    log.attr = choice.rule.attr;
    log.z = choice.z;
    log.z_empirical = z_emp;
    log.training_error = static_cast<double>(errors) / static_cast<double>(m);
    log.hamming_loss = static_cast<double>(sign_errors) / static_cast<double>(m * k);
    log.loss_bound = std::exp(log_bound);
    model.add_rule(std::move(choice.rule), log);

    if (log.training_error < config.stop_error) break;
  }

  if (timing) {
    timing->weak_learner_seconds = wl_seconds;
    timing->total_seconds = seconds_since(start);
    timing->rounds = model.rounds_trained();
  }
  return model;
}

double training_error(const CombinedModel& model, const Dataset& ds) {
  if (ds.size() == 0) return 0.0;
  std::size_t errors = 0;
  for (const auto& ex : ds.examples()) errors += model.classify(ex) != ex.label;
  return static_cast<double>(errors) / static_cast<double>(ds.size());
}

// ---------------------------------------------------------------------------

void save_model(std::ostream& out, const CombinedModel& model) {
  out << "lazyboost-model 1\n";
  out << "word\t" << model.word() << '\n';
  out << "pos\t" << model.pos() << '\n';
  out << "senses\t" << model.num_senses() << '\n';
  for (std::size_t s = 0; s < model.num_senses(); ++s) {
    out << model.sense_counts()[s] << '\t' << model.senses()[s] << '\n';
  }
  out << "attributes\t" << model.attributes().size() << '\n';
  for (const auto& fv : model.attributes()) out << position_name(fv.position) << '\t' << fv.value << '\n';
  out << "rules\t" << model.rounds_trained() << '\n';
  for (const auto& rule : model.rules()) {
    out << rule.attr;
    for (double v : rule.c0) {
      out << ' ';
      write_real(out, v);
    }
    for (double v : rule.c1) {
      out << ' ';
      write_real(out, v);
    }
    out << '\n';
  }
}

namespace {

std::string read_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw ModelError(std::string("model file truncated before ") + what);
  return line;
}

std::size_t read_header_count(std::istream& in, const std::string& key) {
  const auto line = read_line(in, key.c_str());
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.substr(0, tab) != key) throw ModelError("expected '" + key + "' header");
  try {
    return std::stoull(line.substr(tab + 1));
  } catch (const std::exception&) {
    throw ModelError("bad count in '" + key + "' header");
  }
}

std::string read_header_value(std::istream& in, const std::string& key) {
  const auto line = read_line(in, key.c_str());
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.substr(0, tab) != key) throw ModelError("expected '" + key + "' header");
  return line.substr(tab + 1);
}

}  // namespace

CombinedModel load_model(std::istream& in, std::optional<std::size_t> max_rules) {
  if (read_line(in, "version") != "lazyboost-model 1") throw ModelError("not a version 1 model file");
  auto word = read_header_value(in, "word");
  auto pos = read_header_value(in, "pos");

  const auto k = read_header_count(in, "senses");
  std::vector<std::string> senses;
  std::vector<std::uint32_t> counts;
  for (std::size_t s = 0; s < k; ++s) {
    const auto line = read_line(in, "sense table");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ModelError("malformed sense line");
    counts.push_back(static_cast<std::uint32_t>(std::stoul(line.substr(0, tab))));
    senses.push_back(line.substr(tab + 1));
  }

  const auto num_attrs = read_header_count(in, "attributes");
  std::vector<FeatureValue> attrs;
  attrs.reserve(num_attrs);
  for (std::size_t a = 0; a < num_attrs; ++a) {
    const auto line = read_line(in, "attribute table");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ModelError("malformed attribute line");
    try {
      attrs.push_back({position_from_name(line.substr(0, tab)), line.substr(tab + 1)});
    } catch (const DatasetError& e) {
      throw ModelError(e.what());
    }
  }

  CombinedModel model(std::move(word), std::move(pos), std::move(senses), std::move(counts), std::move(attrs));
  const auto num_rules = read_header_count(in, "rules");
  const std::size_t wanted = std::min(num_rules, max_rules.value_or(num_rules));
  for (std::size_t t = 0; t < wanted; ++t) {
    std::istringstream line(read_line(in, "rule records"));
    WeakRule rule;
    rule.c0.resize(k);
    rule.c1.resize(k);
    if (!(line >> rule.attr)) throw ModelError("malformed rule record");
    for (auto& v : rule.c0) {
      if (!(line >> v)) throw ModelError("malformed rule record");
    }
    for (auto& v : rule.c1) {
      if (!(line >> v)) throw ModelError("malformed rule record");
    }
    model.add_rule(std::move(rule));
  }
  return model;
}

}  // namespace lazyboost
