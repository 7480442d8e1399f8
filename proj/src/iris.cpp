#include "fdmsnn/iris.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fdmsnn/rng.hpp"

namespace fdmsnn {

namespace {

int parse_label(const std::string& field) {
  if (field == "0" || field == "Iris-setosa" || field == "setosa") return 0;
  if (field == "1" || field == "Iris-versicolor" || field == "versicolor") return 1;
  if (field == "2" || field == "Iris-virginica" || field == "virginica") return 2;
  throw std::invalid_argument("iris: unknown class label '" + field + "'");
}

}  // namespace

std::vector<IrisSample> load_iris(std::istream& in) {
  std::vector<IrisSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) {
      throw std::invalid_argument("iris: line " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, expected 5");
    }
    IrisSample s;
    for (int k = 0; k < 4; ++k) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(fields[k], &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("iris: line " + std::to_string(line_no) + " field " +
                                    std::to_string(k + 1) + " is not numeric");
      }
      if (used != fields[k].size() || !std::isfinite(v)) {
        throw std::invalid_argument("iris: line " + std::to_string(line_no) + " field " +
                                    std::to_string(k + 1) + " is not numeric");
      }
      s.x[k] = v;
    }
    s.label = parse_label(fields[4]);
    out.push_back(s);
  }
  return out;
}

std::vector<IrisSample> load_iris_file(const std::string& path) {
  if (path.empty()) {
    std::stringstream ss(bundled_iris_csv());
    return load_iris(ss);
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("iris: cannot open dataset file " + path);
  return load_iris(in);
}

void min_max_normalize(std::vector<IrisSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("iris: empty sample set");
  for (int k = 0; k < 4; ++k) {
    double lo = samples[0].x[k], hi = samples[0].x[k];
    for (const auto& s : samples) {
      lo = std::min(lo, s.x[k]);
      hi = std::max(hi, s.x[k]);
    }
    if (!(hi > lo)) throw std::domain_error("iris: attribute " + std::to_string(k + 1) + " has zero range");
    for (auto& s : samples) s.x[k] = (s.x[k] - lo) / (hi - lo);
  }
}

void EncoderParams::validate() const {
  if (fields_per_attribute < 1) throw std::invalid_argument("encoder: need at least one field per attribute");
  if (!(sigma > 0.0)) throw std::invalid_argument("encoder: sigma must be positive");
  if (!(i_max_a > 0.0)) throw std::invalid_argument("encoder: i_max must be positive");
}

void encode(const IrisSample& sample, const EncoderParams& p, std::span<double> currents_out) {
  p.validate();
  if (currents_out.size() != static_cast<std::size_t>(p.total_fields())) {
    throw std::invalid_argument("encode: output span size mismatch");
  }
  int idx = 0;
  for (int attr = 0; attr < 4; ++attr) {
    for (int f = 0; f < p.fields_per_attribute; ++f) {
      const double d = sample.x[attr] - p.center(f);
      currents_out[idx++] = p.i_max_a * std::exp(-(d * d) / (2.0 * p.sigma * p.sigma));
    }
  }
}

std::vector<int> train_split(const std::vector<IrisSample>& samples, double fraction, std::uint64_t seed) {
  Rng rng(seed * 0x5bf03635ULL + 0xa5a5a5a5ULL);
  std::vector<std::vector<int>> per_class(3);
  for (int cls = 0; cls < 3; ++cls) {
    std::vector<int>& idx = per_class[cls];
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
      if (samples[i].label == cls) idx.push_back(i);
    }
    // Fisher-Yates with the run RNG.
    for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i) {
      std::swap(idx[i], idx[rng.below(static_cast<std::uint64_t>(i + 1))]);
    }
    const int take = static_cast<int>(std::lround(fraction * static_cast<double>(idx.size())));
    idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(take)));
  }
  // Class-interleaved order: recency across classes stays balanced at every
  // point of the epoch, which keeps the end-of-epoch state order-neutral.
  std::vector<int> pool;
  const std::size_t longest = std::max({per_class[0].size(), per_class[1].size(), per_class[2].size()});
  for (std::size_t k = 0; k < longest; ++k) {
    for (int cls = 0; cls < 3; ++cls) {
      if (k < per_class[cls].size()) pool.push_back(per_class[cls][k]);
    }
  }
  return pool;
}

std::vector<int> curriculum_order(const std::vector<IrisSample>& samples, const std::vector<int>& pool) {
  std::array<std::array<double, 4>, 3> centroid{};
  std::array<int, 3> count{};
  for (int idx : pool) {
    for (int k = 0; k < 4; ++k) centroid[samples[idx].label][k] += samples[idx].x[k];
    ++count[samples[idx].label];
  }
  for (int c = 0; c < 3; ++c) {
    if (count[c] == 0) continue;
    for (int k = 0; k < 4; ++k) centroid[c][k] /= count[c];
  }
  std::array<std::vector<std::pair<double, int>>, 3> per_class;
  for (int idx : pool) {
    const int own = samples[idx].label;
    double d = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double dd = samples[idx].x[k] - centroid[own][k];
      d += dd * dd;
    }
    per_class[own].push_back({d, idx});
  }
  for (auto& v : per_class) std::sort(v.begin(), v.end());
  std::vector<int> out;
  const std::size_t longest =
      std::max({per_class[0].size(), per_class[1].size(), per_class[2].size()});
  for (std::size_t k = 0; k < longest; ++k) {
    for (int c = 0; c < 3; ++c) {
      if (k < per_class[c].size()) out.push_back(per_class[c][k].second);
    }
  }
  return out;
}

namespace {

void present(SnnEngine& engine, std::span<const double> currents, std::span<const double> bias,
             double duration_s) {
  engine.reset_presentation();
  const long steps = static_cast<long>(std::llround(duration_s / engine.dt_s()));
  for (long k = 0; k < steps; ++k) engine.step(currents, bias);
}

struct EvalCounts {
  std::vector<int> counts;
  std::vector<double> first_spike;
};

EvalCounts output_counts(const SnnEngine& engine) {
  EvalCounts ec;
  ec.counts.assign(engine.cols(), 0);
  ec.first_spike.assign(engine.cols(), std::numeric_limits<double>::infinity());
  for (const auto& e : engine.events()) {
    const int j = e.neuron_id - engine.rows();
    if (j >= 0 && j < engine.cols()) {
      if (ec.counts[j] == 0) ec.first_spike[j] = e.t_s;
      ++ec.counts[j];
    }
  }
  return ec;
}

}  // namespace

int classify(SnnEngine& engine, const IrisSample& sample, const TrainOptions& opt) {
  std::vector<double> currents(static_cast<std::size_t>(opt.encoder.total_fields()));
  encode(sample, opt.encoder, currents);
  engine.set_plastic(false);
  present(engine, currents, {}, opt.presentation_s);
  const EvalCounts ec = output_counts(engine);
  int best = 0;
  for (int j = 1; j < engine.cols(); ++j) {
    if (ec.counts[j] > ec.counts[best]) {
      best = j;
    } else if (ec.counts[j] == ec.counts[best] && ec.first_spike[j] < ec.first_spike[best]) {
      best = j;
    }
  }
  return best;
}

double evaluate_accuracy_pct(SnnEngine& engine, const std::vector<IrisSample>& normalized,
                             const TrainOptions& opt) {
  int correct = 0;
  for (const auto& s : normalized) {
    if (classify(engine, s, opt) == s.label) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(normalized.size());
}

TrainReport train(SnnEngine& engine, const std::vector<IrisSample>& normalized, const TrainOptions& opt) {
  if (opt.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  if (engine.rows() != opt.encoder.total_fields()) throw std::invalid_argument("train: encoder/engine row mismatch");

  TrainReport report;
  report.seed = opt.seed;
  report.epochs = opt.epochs;

  // Seeded mid-range initial weights, shared by design across engines so the
  // same seed starts both simulators from the same map.
  Rng rng(opt.seed);
  std::vector<double> init(static_cast<std::size_t>(engine.rows()) * engine.cols());
  for (auto& w : init) w = rng.uniform(opt.init_lo, opt.init_hi);
  engine.set_weight_positions(init);
  report.initial_weights = engine.weights();

  std::vector<int> order = train_split(normalized, opt.train_fraction, opt.seed);
  if (opt.curriculum) order = curriculum_order(normalized, order);
  Rng order_rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> currents(static_cast<std::size_t>(opt.encoder.total_fields()));
  std::vector<double> bias(static_cast<std::size_t>(engine.cols()));

  auto* ref = dynamic_cast<RefEngineAdapter*>(&engine);

  if (opt.epochs == 0) {
    report.epoch_accuracy_pct.push_back(evaluate_accuracy_pct(engine, normalized, opt));
  }

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    if (opt.reshuffle_each_epoch && epoch > 0) {
      // Reshuffle within each class slot, preserving the interleave.
      for (int i = static_cast<int>(order.size()) / 3 - 1; i > 0; --i) {
        const int j = static_cast<int>(order_rng.below(static_cast<std::uint64_t>(i + 1)));
        for (int cls = 0; cls < 3; ++cls) std::swap(order[3 * i + cls], order[3 * j + cls]);
      }
    }
    long in_spikes = 0, out_spikes = 0;
    const bool record = opt.record_bias_epoch1 && epoch == 0 && ref != nullptr;
    if (record) ref->net().set_record_bias(true);
    for (int idx : order) {
      const IrisSample& s = normalized[idx];
      encode(s, opt.encoder, currents);
      for (int j = 0; j < engine.cols(); ++j) {
        bias[j] = (j == s.label) ? opt.teacher.excite_a : opt.teacher.inhibit_a;
      }
      engine.set_plastic(true);
      present(engine, currents, bias, opt.presentation_s);
      for (const auto& e : engine.events()) {
        if (e.neuron_id < engine.rows()) {
          ++in_spikes;
        } else {
          ++out_spikes;
        }
      }
    }
    if (record) {
      ref->net().set_record_bias(false);
      report.bias_samples = ref->net().bias_samples();
      ref->net().clear_bias_samples();
    }
    report.epoch_input_spikes.push_back(in_spikes);
    report.epoch_output_spikes.push_back(out_spikes);
    report.epoch_accuracy_pct.push_back(evaluate_accuracy_pct(engine, normalized, opt));
  }

  report.final_weights = engine.weights();
  report.peak_accuracy_pct = *std::max_element(report.epoch_accuracy_pct.begin(), report.epoch_accuracy_pct.end());
  const int tail = std::min<int>(10, static_cast<int>(report.epoch_accuracy_pct.size()));
  report.final10_accuracy_std =
      stddev(std::span<const double>(report.epoch_accuracy_pct).last(static_cast<std::size_t>(tail)));
  return report;
}

std::vector<QuadraticStudyRow> run_quadratic_study(std::span<const double> amplitudes_v,
                                                   const RefConfig& base, const TrainOptions& opt,
                                                   const std::vector<IrisSample>& normalized) {
  std::vector<QuadraticStudyRow> rows(amplitudes_v.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < static_cast<int>(amplitudes_v.size()); ++k) {
    RefConfig cfg = base;
    cfg.read_model = ReadModel::eq7_quadratic;
    cfg.eq7_amplitude_v = amplitudes_v[k];
    RefEngineAdapter engine(cfg);
    TrainOptions o = opt;
    o.record_bias_epoch1 = true;
    const TrainReport rep = train(engine, normalized, o);
    rows[k].amplitude_v = amplitudes_v[k];
    rows[k].peak_accuracy_pct = rep.peak_accuracy_pct;
    rows[k].epoch_accuracy_pct = rep.epoch_accuracy_pct;
    rows[k].bias_samples = rep.bias_samples;
  }
  return rows;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson: size mismatch");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double stddev(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / n);
}

}  // namespace fdmsnn
