#include "fdmsnn/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdmsnn/rng.hpp"
#include "fdmsnn/write_overlap.hpp"

namespace fdmsnn {

namespace {
constexpr double kNeverTriggered = -1e30;
}

void EngineConfig::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("engine: grid must be at least 1x1");
  if (!(dt_s > 0.0)) throw std::invalid_argument("engine: dt must be positive");
  read.validate();
  if (dt_s > read.period_s / 10.0 + 1e-15) throw std::invalid_argument("engine: dt must resolve the read sinusoid (dt <= period/10)");
  pre_pulse.validate();
  post_pulse.validate();
  if (t_offset_s < 0.0) throw std::invalid_argument("engine: t_offset must be >= 0");
  hpf.validate();
  if (envelope_skip_periods < 0) throw std::invalid_argument("engine: envelope_skip_periods must be >= 0");
  device.validate();
  input_lif.validate();
  output_lif.validate();
  alpha.validate();
  if (read.amplitude_v >= device.ideal.v_tp || read.amplitude_v >= -device.ideal.v_tn) {
    throw std::invalid_argument("engine: read amplitude must stay below the write thresholds");
  }
}

void CrossbarEngine::EnvelopeTracker::feed(double mag) {
  // Running max with a 3-point parabolic refinement at local peaks, so the
  // detected envelope does not depend on where samples land on the crest.
  double candidate = mag;
  if (fed >= 2 && prev1 >= prev2 && prev1 >= mag) {
    const double a = 0.5 * (prev2 + mag) - prev1;
    if (a < 0.0) {
      const double b = 0.5 * (mag - prev2);
      const double x = -b / (2.0 * a);
      if (std::fabs(x) <= 1.0) candidate = std::max(candidate, prev1 - b * b / (4.0 * a));
    }
  }
  best = std::max({best, prev1, candidate});
  prev2 = prev1;
  prev1 = mag;
  ++fed;
}

void CrossbarEngine::advance_envelope_period() {
  // Period boundary: the freshly tracked peak becomes the held output.
  for (auto& tr : trackers_) {
    if (tr.fed > 0) tr.latch_hold(tr.best);
    tr.best = 0.0;
    tr.prev1 = tr.prev2 = 0.0;
    tr.fed = 0;
  }
}

CrossbarEngine::CrossbarEngine(const EngineConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  rows_ = cfg_.rows;
  cols_ = cfg_.cols;
  devices_.assign(static_cast<std::size_t>(rows_) * cols_, make_device_state(cfg_.device, cfg_.device.v_c_mid()));
  row_v_.assign(rows_, 0.0);
  col_v_.assign(cols_, 0.0);
  col_current_.assign(cols_, 0.0);
  filtered_.assign(cols_, 0.0);
  alpha_slow_.assign(cols_, 0.0);
  alpha_fast_.assign(cols_, 0.0);
  read_start_.assign(rows_, kNeverTriggered);
  row_pulse_.assign(rows_, PulseGen{});
  col_pulse_.assign(cols_, PulseGen{});
  filters_.assign(cols_, HpfCascade(cfg_.hpf));
  trackers_.assign(cols_, EnvelopeTracker{});
  input_neurons_.assign(rows_, NeuronState{});
  output_neurons_.assign(cols_, NeuronState{});
  force_pre_.assign(rows_, 0);
  force_post_.assign(cols_, 0);
  in_coeffs_ = LifCoeffs::make(cfg_.input_lif, cfg_.dt_s);
  out_coeffs_ = LifCoeffs::make(cfg_.output_lif, cfg_.dt_s);
  alpha_decay_slow_ = std::exp(-cfg_.dt_s / cfg_.alpha.tau2_s);
  alpha_decay_fast_ = std::exp(-cfg_.dt_s / cfg_.alpha.tau1_s);
}

void CrossbarEngine::set_weight_positions(std::span<const double> pos01) {
  if (pos01.size() != devices_.size()) throw std::invalid_argument("set_weight_positions: size mismatch");
  const double lo = cfg_.device.v_c_lower();
  const double hi = cfg_.device.v_c_upper();
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      devices_[static_cast<std::size_t>(j) * rows_ + i] =
          make_device_state(cfg_.device, lo + pos01[static_cast<std::size_t>(i) * cols_ + j] * (hi - lo));
    }
  }
}

std::vector<double> CrossbarEngine::weights() const {
  std::vector<double> g(devices_.size());
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      g[static_cast<std::size_t>(i) * cols_ + j] =
          conductance(devices_[static_cast<std::size_t>(j) * rows_ + i], cfg_.device);
    }
  }
  return g;
}

void CrossbarEngine::force_pre_spike(int row) {
  if (row < 0 || row >= rows_) throw std::invalid_argument("force_pre_spike: bad row");
  force_pre_[row] = 1;
}

void CrossbarEngine::force_post_spike(int col) {
  if (col < 0 || col >= cols_) throw std::invalid_argument("force_post_spike: bad col");
  force_post_[col] = 1;
}

void CrossbarEngine::enable_tracing(int decimation) {
  trace_decimation_ = std::max(0, decimation);
  trace_row_v_ = SignalTrace{time_, cfg_.dt_s * trace_decimation_, {}};
  trace_col_i_ = trace_row_v_;
  trace_filtered_ = trace_row_v_;
}

namespace {
double pulse_piece(double start, double handoff, double t, const WritePulseParams& p, double tau_onset) {
  if (t < start) return 0.0;
  double v = write_pulse(t - start, p);
  if (handoff != 0.0) v += handoff * std::exp(-(t - start) / tau_onset);
  return v;
}
}  // namespace

double CrossbarEngine::pulse_value(const PulseGen& g, double t, const WritePulseParams& p) const {
  if (t >= g.next_start) return pulse_piece(g.next_start, g.next_handoff, t, p, cfg_.restart_tau_s);
  return pulse_piece(g.play_start, g.play_handoff, t, p, cfg_.restart_tau_s);
}

void CrossbarEngine::retrigger(PulseGen& g, double t_trigger, const WritePulseParams& p) {
  if (g.next_start <= t_trigger) {
    g.play_start = g.next_start;
    g.play_handoff = g.next_handoff;
  }
  // A pending pulse that never started is simply superseded.
  g.next_start = t_trigger + cfg_.t_offset_s;
  g.next_handoff = pulse_piece(g.play_start, g.play_handoff, g.next_start, p, cfg_.restart_tau_s);
}

void CrossbarEngine::close_read_window() {
  for (int j = 0; j < cols_; ++j) {
    EnvelopeTracker& tr = trackers_[j];
    if (tr.fed > 0) tr.latch_hold(std::max(tr.hold, tr.best));
    tr.accumulate(cfg_.dt_s);  // final tick of the window
    const double estimate = cfg_.kappa * tr.integral / cfg_.read.duration_s;
    impulses_.push_back({j, time_, estimate});
    alpha_slow_[j] += estimate;
    alpha_fast_[j] += estimate;
    tr.reset();
  }
  window_active_ = false;
  reading_rows_ = 0;
}

void CrossbarEngine::step(std::span<const double> input_currents, std::span<const double> output_bias) {
  if (!input_currents.empty() && input_currents.size() != static_cast<std::size_t>(rows_)) {
    throw std::invalid_argument("step: input current vector size mismatch");
  }
  if (!output_bias.empty() && output_bias.size() != static_cast<std::size_t>(cols_)) {
    throw std::invalid_argument("step: output bias vector size mismatch");
  }
  const double t = time_;

  // Input layer: LIF dynamics plus any forced triggers.
  for (int i = 0; i < rows_; ++i) {
    const double drive = input_currents.empty() ? 0.0 : input_currents[i];
    bool spiked = lif_step_coeffs(input_neurons_[i], drive, cfg_.dt_s, in_coeffs_, t);
    if (force_pre_[i]) {
      spiked = true;
      force_pre_[i] = 0;
    }
    if (spiked) {
      events_.push_back({i, t});
      read_start_[i] = t;
      retrigger(row_pulse_[i], t, cfg_.pre_pulse);
    }
  }

  // Node voltages.
  for (int i = 0; i < rows_; ++i) {
    row_v_[i] = read_burst(t, read_start_[i], cfg_.read) + pulse_value(row_pulse_[i], t, cfg_.pre_pulse);
  }
  for (int j = 0; j < cols_; ++j) {
    col_v_[j] = pulse_value(col_pulse_[j], t, cfg_.post_pulse);
  }

  // Device grid: currents into each column node, state updates.
  kernels::device_tick(devices_, rows_, cols_, row_v_, col_v_, cfg_.dt_s, cfg_.device,
                       writes_enabled_, col_current_, cfg_.parallel_min_devices);

  // Read path.
  for (int j = 0; j < cols_; ++j) {
    filtered_[j] = cfg_.filter_enabled ? filters_[j].step(col_current_[j], cfg_.dt_s) : col_current_[j];
  }

  // Every gating edge (a row joining or leaving the active read set) steps
  // the filter input and rings; the tracker stays muted while that settles.
  int reading = 0;
  for (int i = 0; i < rows_; ++i) {
    if (t >= read_start_[i] && t < read_start_[i] + cfg_.read.duration_s) ++reading;
  }
  if (reading > 0 && !window_active_) {
    window_active_ = true;
    window_open_t_ = t;
    period_anchor_ = t;
    for (auto& tr : trackers_) tr.reset();
  }
  if (window_active_ && reading != reading_rows_) {
    window_mute_until_ = t + cfg_.envelope_skip_periods * cfg_.read.period_s;
  }
  reading_rows_ = reading;
  if (window_active_) {
    // A write pulse starting mid-window puts its onset corner through the
    // filter; mute while that rings out.
    const double onset_mute = cfg_.envelope_skip_periods * cfg_.read.period_s;
    auto onset_now = [&](const PulseGen& g) { return t >= g.next_start && t - cfg_.dt_s < g.next_start; };
    for (int i = 0; i < rows_; ++i) {
      if (onset_now(row_pulse_[i])) window_mute_until_ = std::max(window_mute_until_, t + onset_mute);
    }
    for (int j = 0; j < cols_; ++j) {
      if (onset_now(col_pulse_[j])) window_mute_until_ = std::max(window_mute_until_, t + onset_mute);
    }
  }
  if (window_active_) {
    if (reading == 0) {
      close_read_window();
    } else if (t - window_open_t_ >= cfg_.envelope_max_window_s) {
      // Long merged unions deliver at a bounded cadence; bookkeeping only,
      // the filter and the held detector state are untouched.
      for (int j = 0; j < cols_; ++j) {
        EnvelopeTracker& tr = trackers_[j];
        const double estimate = cfg_.kappa * tr.integral / cfg_.read.duration_s;
        impulses_.push_back({j, t, estimate});
        alpha_slow_[j] += estimate;
        alpha_fast_[j] += estimate;
        tr.integral = 0.0;
      }
      window_open_t_ = t;
    } else {
      for (auto& tr : trackers_) tr.accumulate(cfg_.dt_s);
      if (t >= window_mute_until_) {
        if (t - last_feed_time_ > 1.5 * cfg_.dt_s) {
          // History from before a mute gap is not a valid peak neighborhood.
          for (auto& tr : trackers_) {
            tr.prev1 = tr.prev2 = 0.0;
            tr.fed = 0;
          }
          period_anchor_ = t;
        }
        if (t - period_anchor_ >= cfg_.read.period_s) {
          advance_envelope_period();
          period_anchor_ = t;
        }
        for (int j = 0; j < cols_; ++j) trackers_[j].feed(std::fabs(filtered_[j]));
        last_feed_time_ = t;
      }
    }
  }

  // Synaptic current generators and the output layer.
  for (int j = 0; j < cols_; ++j) {
    alpha_slow_[j] *= alpha_decay_slow_;
    alpha_fast_[j] *= alpha_decay_fast_;
    const double i_alpha = cfg_.alpha.v0 * (alpha_slow_[j] - alpha_fast_[j]);
    const double bias = output_bias.empty() ? 0.0 : output_bias[j];
    bool spiked = lif_step_coeffs(output_neurons_[j], i_alpha + bias, cfg_.dt_s, out_coeffs_, t);
    if (force_post_[j]) {
      spiked = true;
      force_post_[j] = 0;
    }
    if (spiked) {
      events_.push_back({rows_ + j, t});
      retrigger(col_pulse_[j], t, cfg_.post_pulse);
    }
  }

  if (trace_decimation_ > 0 && tick_ % trace_decimation_ == 0) {
    trace_row_v_.values.push_back(row_v_[0]);
    trace_col_i_.values.push_back(col_current_[0]);
    trace_filtered_.values.push_back(filtered_[0]);
  }

  time_ += cfg_.dt_s;
  ++tick_;
}

void CrossbarEngine::reset_presentation() {
  std::fill(row_v_.begin(), row_v_.end(), 0.0);
  std::fill(col_v_.begin(), col_v_.end(), 0.0);
  std::fill(col_current_.begin(), col_current_.end(), 0.0);
  std::fill(filtered_.begin(), filtered_.end(), 0.0);
  std::fill(alpha_slow_.begin(), alpha_slow_.end(), 0.0);
  std::fill(alpha_fast_.begin(), alpha_fast_.end(), 0.0);
  std::fill(read_start_.begin(), read_start_.end(), kNeverTriggered);
  std::fill(row_pulse_.begin(), row_pulse_.end(), PulseGen{});
  std::fill(col_pulse_.begin(), col_pulse_.end(), PulseGen{});
  for (auto& f : filters_) f.reset();
  for (auto& tr : trackers_) tr.reset();
  std::fill(input_neurons_.begin(), input_neurons_.end(), NeuronState{});
  std::fill(output_neurons_.begin(), output_neurons_.end(), NeuronState{});
  std::fill(force_pre_.begin(), force_pre_.end(), 0);
  std::fill(force_post_.begin(), force_post_.end(), 0);
  for (auto& d : devices_) {
    d.episode_sign = 0;
    d.episode_peak = 0.0;
    d.below_time_s = 0.0;
  }
  window_active_ = false;
  window_mute_until_ = 0.0;
  reading_rows_ = 0;
  time_ = 0.0;
  tick_ = 0;
  events_.clear();
  impulses_.clear();
}

double calibrate_kappa(const EngineConfig& cfg) {
  EngineConfig c = cfg;
  c.rows = 1;
  c.cols = 1;
  c.kappa = 1.0;
  CrossbarEngine engine(c);
  engine.set_writes_enabled(false);
  const double g_cal = conductance(make_device_state(c.device, c.device.v_c_mid()), c.device);
  std::vector<double> pos{0.5};
  engine.set_weight_positions(pos);

  const double t_spike = 1e-3;
  const double t_end = t_spike + c.read.duration_s + 20.0 * c.dt_s;
  bool forced = false;
  while (engine.time_s() < t_end) {
    if (!forced && engine.time_s() >= t_spike) {
      engine.force_pre_spike(0);
      forced = true;
    }
    engine.step({}, {});
  }
  if (engine.impulses().empty()) throw std::runtime_error("calibrate_kappa: no read window closed");
  const double envelope = engine.impulses().back().value;
  if (envelope < 1e-30) throw std::runtime_error("calibrate_kappa: envelope below numerical floor");
  return g_cal / envelope;
}

void derive_pump_gains(DeviceParams& dev, double a_plus, double tau_plus_s, double a_minus,
                       double tau_minus_s, const WritePulseParams& pre, const WritePulseParams& post) {
  const PulsePairModel pairs(pre, post);
  const double dt_ref = 10e-3;

  // Conductance scale per unit of state around mid-range.
  double g_scale;
  if (dev.model == DeviceModel::ideal) {
    g_scale = dev.ideal.g_max;
  } else {
    const double mid = dev.v_c_mid();
    const double h = 1e-4 * (dev.v_c_upper() - dev.v_c_lower());
    g_scale = (conductance(make_device_state(dev, mid + h), dev) -
               conductance(make_device_state(dev, mid - h), dev)) /
              (2.0 * h);
  }

  // Size the pump against the nominal thresholds; state-dependent threshold
  // laws then modulate around this calibration.
  const double ovd_set = dev.ideal.v_tn - pairs.v_min(dt_ref);
  const double ovd_reset = pairs.v_max(-dt_ref) - dev.ideal.v_tp;
  if (!(ovd_set > 0.0) || !(ovd_reset > 0.0)) {
    throw std::runtime_error("derive_pump_gains: pulses do not cross the thresholds at the reference separation");
  }
  dev.pump.gain_set = std::fabs(a_plus) * std::exp(-dt_ref / tau_plus_s) / (g_scale * ovd_set);
  dev.pump.gain_reset = std::fabs(a_minus) * std::exp(-dt_ref / tau_minus_s) / (g_scale * ovd_reset);
}

std::vector<StdpSweepRow> run_stdp_sweep(std::span<const double> delta_ts_s, const EngineConfig& cfg,
                                         double a_plus, double tau_plus_s, double a_minus,
                                         double tau_minus_s, double p_exponent) {
  if (delta_ts_s.empty()) throw std::invalid_argument("run_stdp_sweep: empty delta-t grid");
  std::vector<StdpSweepRow> rows;
  rows.reserve(delta_ts_s.size());
  const double tail_span = 5.0 * std::max(cfg.pre_pulse.tau_tail_s, cfg.post_pulse.tau_tail_s);

  for (double dt : delta_ts_s) {
    EngineConfig c = cfg;
    c.rows = 1;
    c.cols = 1;
    c.kappa = 1.0;
    CrossbarEngine engine(c);
    std::vector<double> pos{0.5};
    engine.set_weight_positions(pos);
    const double g0 = engine.weights()[0];

    const double t0 = 5e-3;
    const double t_pre = t0 + std::max(0.0, -dt);
    const double t_post = t0 + std::max(0.0, dt);
    const double t_end = std::max(t_pre, t_post) + c.t_offset_s + tail_span + 10e-3;
    bool pre_done = false, post_done = false;
    while (engine.time_s() < t_end) {
      if (!pre_done && engine.time_s() >= t_pre) {
        engine.force_pre_spike(0);
        pre_done = true;
      }
      if (!post_done && engine.time_s() >= t_post) {
        engine.force_post_spike(0);
        post_done = true;
      }
      engine.step({}, {});
    }
    const double g1 = engine.weights()[0];

    const double gmax = cfg.device.ideal.g_max;
    const double gn = g0 / gmax;
    double eq4;
    if (dt >= 0.0) {
      eq4 = std::fabs(a_plus) * std::exp(-dt / tau_plus_s) * std::pow(1.0 - gn, p_exponent);
    } else {
      eq4 = -std::fabs(a_minus) * std::exp(dt / tau_minus_s) * std::pow(gn, p_exponent);
    }
    rows.push_back({dt, g1 - g0, eq4});
  }
  return rows;
}

std::vector<ReadValidationEvent> run_read_validation(int n_events, std::uint64_t seed,
                                                     const EngineConfig& cfg, double isi_min_s,
                                                     double isi_max_s) {
  if (n_events < 1) throw std::invalid_argument("run_read_validation: need at least one event");
  if (!(isi_min_s > 0.0) || !(isi_max_s >= isi_min_s)) throw std::invalid_argument("run_read_validation: bad ISI range");

  EngineConfig c = cfg;
  c.rows = 1;
  c.cols = 1;
  CrossbarEngine engine(c);
  std::vector<double> pos{0.5};
  engine.set_weight_positions(pos);

  Rng rng(seed);
  auto next_isi = [&] { return isi_min_s + (isi_max_s - isi_min_s) * rng.uniform(); };
  double next_pre = 2e-3 + next_isi();
  double next_post = 2e-3 + next_isi();

  std::vector<double> pending_g;  // conductance at each read instant, FIFO
  std::vector<ReadValidationEvent> out;
  out.reserve(n_events);
  std::size_t impulses_seen = 0;
  int fired = 0;

  while (static_cast<int>(out.size()) < n_events) {
    const double t = engine.time_s();
    if (fired < n_events && t >= next_pre) {
      pending_g.push_back(engine.weights()[0]);
      engine.force_pre_spike(0);
      next_pre = t + next_isi();
      ++fired;
    }
    if (t >= next_post) {
      engine.force_post_spike(0);
      next_post = t + next_isi();
    }
    engine.step({}, {});
    while (impulses_seen < engine.impulses().size() && !pending_g.empty()) {
      const auto& imp = engine.impulses()[impulses_seen++];
      const double g_ref = pending_g.front();
      pending_g.erase(pending_g.begin());
      ReadValidationEvent ev;
      ev.t_s = imp.t_s;
      ev.g_actual = g_ref;
      ev.g_estimate = imp.value;
      ev.rel_error = std::fabs(imp.value - g_ref) / g_ref;
      out.push_back(ev);
      if (static_cast<int>(out.size()) >= n_events) break;
    }
  }
  return out;
}

}  // namespace fdmsnn
