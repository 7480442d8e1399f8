#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fdmsnn/crossbar.hpp"
#include "fdmsnn/reference_snn.hpp"

namespace fdmsnn {

struct IrisSample {
  std::array<double, 4> x{};
  int label = 0;
};

const char* bundled_iris_csv();

// Rows of 4 numeric fields plus a class label (name or 0/1/2). Throws on
// malformed rows, wrong arity or unknown labels.
std::vector<IrisSample> load_iris(std::istream& in);
std::vector<IrisSample> load_iris_file(const std::string& path);  // empty path -> bundled data

// Min-max normalization per attribute over the whole set; a constant
// attribute column is rejected.
void min_max_normalize(std::vector<IrisSample>& samples);

// Population coding: fields_per_attribute Gaussian receptive fields per
// attribute, centers evenly covering [0, 1].
struct EncoderParams {
  int fields_per_attribute = 4;
  double sigma = 0.16;
  double i_max_a = 10.8e-9;
  void validate() const;
  int total_fields() const { return fields_per_attribute * 4; }
  double center(int field) const { return (2.0 * field + 1.0) / (2.0 * fields_per_attribute); }
};

void encode(const IrisSample& sample, const EncoderParams& p, std::span<double> currents_out);

// Uniform surface the trainer drives; adapters below wrap both simulators.
class SnnEngine {
 public:
  virtual ~SnnEngine() = default;
  virtual int rows() const = 0;
  virtual int cols() const = 0;
  virtual double dt_s() const = 0;
  virtual void set_plastic(bool on) = 0;
  virtual void set_weight_positions(std::span<const double> pos01) = 0;
  virtual std::vector<double> weights() const = 0;
  virtual void step(std::span<const double> in, std::span<const double> bias) = 0;
  virtual void reset_presentation() = 0;
  virtual const std::vector<SpikeEvent>& events() const = 0;
  virtual void clear_events() = 0;
};

class RefEngineAdapter : public SnnEngine {
 public:
  explicit RefEngineAdapter(const RefConfig& cfg) : net_(cfg) {}
  RefNetwork& net() { return net_; }
  int rows() const override { return net_.rows(); }
  int cols() const override { return net_.cols(); }
  double dt_s() const override { return net_.config().dt_s; }
  void set_plastic(bool on) override { net_.set_plastic(on); }
  void set_weight_positions(std::span<const double> p) override { net_.set_weight_positions(p); }
  std::vector<double> weights() const override { return net_.weights(); }
  void step(std::span<const double> in, std::span<const double> bias) override { net_.step(in, bias); }
  void reset_presentation() override { net_.reset_presentation(); }
  const std::vector<SpikeEvent>& events() const override { return net_.events(); }
  void clear_events() override { net_.clear_events(); }

 private:
  RefNetwork net_;
};

class CircuitEngineAdapter : public SnnEngine {
 public:
  explicit CircuitEngineAdapter(const EngineConfig& cfg) : engine_(cfg) {}
  CrossbarEngine& engine() { return engine_; }
  int rows() const override { return engine_.rows(); }
  int cols() const override { return engine_.cols(); }
  double dt_s() const override { return engine_.dt_s(); }
  void set_plastic(bool on) override { engine_.set_writes_enabled(on); }
  void set_weight_positions(std::span<const double> p) override { engine_.set_weight_positions(p); }
  std::vector<double> weights() const override { return engine_.weights(); }
  void step(std::span<const double> in, std::span<const double> bias) override { engine_.step(in, bias); }
  void reset_presentation() override { engine_.reset_presentation(); }
  const std::vector<SpikeEvent>& events() const override { return engine_.events(); }
  void clear_events() override { engine_.clear_events(); }

 private:
  CrossbarEngine engine_;
};

struct TeacherParams {
  double excite_a = 5.4e-9;   // into the labeled output during training
  double inhibit_a = 0.0;     // into the other outputs
};

struct TrainOptions {
  int epochs = 20;
  std::uint64_t seed = 1;
  double presentation_s = 0.1;
  double train_fraction = 0.3;  // stratified
  EncoderParams encoder{};
  TeacherParams teacher{};
  double init_lo = 0.10;  // initial weight band, fraction of full range
  double init_hi = 0.30;
  bool curriculum = true;            // centroid-out interleaved order
  bool reshuffle_each_epoch = false; // seeded order re-draw per epoch instead
  bool record_bias_epoch1 = false;  // eq7 runs: collect Q-point samples
};

struct TrainReport {
  std::vector<double> epoch_accuracy_pct;
  double peak_accuracy_pct = 0.0;
  double final10_accuracy_std = 0.0;
  std::vector<double> initial_weights;  // row-major
  std::vector<double> final_weights;
  std::vector<long> epoch_input_spikes;
  std::vector<long> epoch_output_spikes;
  std::vector<double> bias_samples;  // filled when recording was on
  std::uint64_t seed = 0;
  int epochs = 0;
};

// Stratified split, seeded; teacher-driven presentations with plasticity on;
// after each epoch, accuracy over the full set with plasticity frozen.
TrainReport train(SnnEngine& engine, const std::vector<IrisSample>& normalized, const TrainOptions& opt);

// Present one sample without teacher, plasticity frozen; spike-count argmax,
// ties broken by earliest first spike, then lowest index.
int classify(SnnEngine& engine, const IrisSample& sample, const TrainOptions& opt);

double evaluate_accuracy_pct(SnnEngine& engine, const std::vector<IrisSample>& normalized,
                             const TrainOptions& opt);

// Deterministic stratified pick of train_fraction per class, then a seeded
// presentation order over the pool.
std::vector<int> train_split(const std::vector<IrisSample>& samples, double fraction, std::uint64_t seed);

// Class-interleaved curriculum over the pool: per class, samples run from
// the class centroid outward, so every epoch ends on the boundary cases.
std::vector<int> curriculum_order(const std::vector<IrisSample>& samples, const std::vector<int>& pool);

struct QuadraticStudyRow {
  double amplitude_v = 0.0;
  double peak_accuracy_pct = 0.0;
  std::vector<double> epoch_accuracy_pct;
  std::vector<double> bias_samples;
};

// One network per read amplitude, eq7 read model; sweeps run in parallel.
std::vector<QuadraticStudyRow> run_quadratic_study(std::span<const double> amplitudes_v,
                                                   const RefConfig& base, const TrainOptions& opt,
                                                   const std::vector<IrisSample>& normalized);

double pearson(std::span<const double> a, std::span<const double> b);
double stddev(std::span<const double> v);

}  // namespace fdmsnn
