#include "nvdd/engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "nvdd/errors.h"

namespace nvdd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Super = Eigen::MatrixXcd;
using Vec81 = Eigen::VectorXcd;

int branch_of(const LevelPair& pair) { return pair.p.mi != 0 ? pair.p.mi : pair.q.mi; }

// Photon-number bookkeeping of the rotating frame: the carrier adds one quantum
// per m_s = -1 level (MW) or per step away from m_i = 0 along the driven branch (RF).
Vec9 photon_number(Channel channel, int branch) {
  Vec9 n;
  for (int k = 0; k < kLevels; ++k) {
    const LevelIndex l = LevelIndex::from_flat(k);
    n[k] = channel == Channel::MW ? (l.ms == -1 ? 1.0 : 0.0) : static_cast<double>(-l.mi * branch);
  }
  return n;
}

Vec9 sz_diagonal() {
  Vec9 d;
  for (int k = 0; k < kLevels; ++k) d[k] = LevelIndex::from_flat(k).ms;
  return d;
}

struct PulseFrame {
  Mat9 h;      // rotating-frame Hamiltonian minus the per-block offset, Hz
  Vec9 delta;  // its diagonal, used to return to the interaction picture
};

double rwa_cutoff(const PulseEvent& pulse, const EngineConfig& config) {
  return config.rwa_cutoff.value_or(config.rwa_cutoff_factor * pulse.rabi);
}

PulseFrame rotating_frame(const PulseEvent& pulse, const NvParams& params,
                          const EngineConfig& config, double phase_rad) {
  const Drive drive = drive_operator(pulse.channel, pulse.target);
  const Vec9 n = photon_number(pulse.channel, branch_of(pulse.target));
  Vec9 dr;
  for (int k = 0; k < kLevels; ++k) {
    dr[k] = level_energy(params, LevelIndex::from_flat(k)) - pulse.freq * n[k];
  }
  const double cutoff = rwa_cutoff(pulse, config);
  const Complex carrier = std::polar(1.0, phase_rad);
  const int tp = pulse.target.p.flat();
  const int tq = pulse.target.q.flat();

  Mat9 coupling = Mat9::Zero();
  std::array<int, kLevels> root{};
  for (int k = 0; k < kLevels; ++k) root[k] = k;
  auto find = [&](int k) {
    while (root[k] != k) k = root[k] = root[root[k]];
    return k;
  };
  bool target_kept = false;
  for (int a = 0; a < kLevels; ++a) {
    for (int b = 0; b < kLevels; ++b) {
      if (std::abs(drive.flip(a, b)) == 0.0 || n[a] - n[b] != 1.0) continue;
      if (std::abs(dr[a] - dr[b]) > cutoff) continue;
      const Complex c = pulse.rabi * drive.amp_norm * drive.flip(a, b) / 2.0 * carrier;
      coupling(a, b) = c;
      coupling(b, a) = std::conj(c);
      root[find(a)] = find(b);
      if ((a == tp && b == tq) || (a == tq && b == tp)) target_kept = true;
    }
  }
  if (!target_kept) {
    throw ConfigError("pulse: target transition detuned beyond the RWA cutoff");
  }
  PulseFrame frame;
  for (int k = 0; k < kLevels; ++k) frame.delta[k] = dr[k] - dr[find(k)];
  frame.h = coupling;
  frame.h.diagonal() += frame.delta.cast<Complex>();
  return frame;
}

Mat9 hermitian_evolution(const Mat9& h, double tau) {
  Eigen::SelfAdjointEigenSolver<Mat9> eig(h);
  Eigen::Matrix<Complex, 9, 1> phases;
  for (int k = 0; k < kLevels; ++k) phases[k] = std::polar(1.0, -kTwoPi * eig.eigenvalues()[k] * tau);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Mat9 frame_phase(const Vec9& delta, double t, double sign) {
  Mat9 v = Mat9::Zero();
  for (int k = 0; k < kLevels; ++k) v(k, k) = std::polar(1.0, sign * kTwoPi * delta[k] * t);
  return v;
}

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
Super kron(const Mat9& a, const Mat9& b) {
  Super out(81, 81);
  for (int i = 0; i < kLevels; ++i) {
    for (int j = 0; j < kLevels; ++j) out.block(9 * i, 9 * j, 9, 9) = a(i, j) * b;
  }
  return out;
}

Super liouvillian(const Mat9& h, const std::vector<Dissipator>& dissipators) {
  const Mat9 id = Mat9::Identity();
  Super l = Complex(0, -kTwoPi) * (kron(id, h) - kron(h.transpose(), id));
  for (const Dissipator& d : dissipators) {
    const Mat9 ldl = d.op.adjoint() * d.op;
    l += d.rate * (kron(d.op.conjugate(), d.op) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  return l;
}

Mat9 apply_channel(const Super& map, const Mat9& rho) {
  const Vec81 v = map * Eigen::Map<const Vec81>(rho.data(), 81);
  Mat9 out = Eigen::Map<const Mat9>(v.data());
  return 0.5 * (out + out.adjoint());
}

// Rotation of `flip_rad` about the axis at `phase_rad` on each listed pair;
// p is the level with one more carrier quantum.
Mat9 ideal_rotation(const std::vector<LevelPair>& pairs, double flip_rad, double phase_rad) {
  Mat9 u = Mat9::Identity();
  const double c = std::cos(flip_rad / 2.0);
  const Complex s(0.0, -std::sin(flip_rad / 2.0));
  const Complex e = std::polar(1.0, phase_rad);
  for (const LevelPair& pair : pairs) {
    const int p = pair.p.flat();
    const int q = pair.q.flat();
    u(p, p) = c;
    u(q, q) = c;
    u(p, q) = s * e;
    u(q, p) = s * std::conj(e);
  }
  return u;
}

std::vector<LevelPair> ideal_pairs(const PulseEvent& pulse) {
  const Vec9 n = photon_number(pulse.channel, branch_of(pulse.target));
  LevelPair target = pulse.target;
  if (n[target.p.flat()] < n[target.q.flat()]) std::swap(target.p, target.q);
  if (n[target.p.flat()] - n[target.q.flat()] != 1.0) {
    throw ConfigError("pulse: target pair not connected by the channel");
  }
  if (pulse.ideal == IdealMode::Selective) return {target};
  std::vector<LevelPair> pairs;
  for (int m = 1; m >= -1; --m) {
    if (pulse.channel == Channel::MW) {
      pairs.push_back({{-1, m}, {0, m}});
    } else {
      pairs.push_back({{m, 0}, {m, branch_of(target)}});
    }
  }
  return pairs;
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Accumulated virtual-Z phases; the logical frame is exp(i sum_c alpha_c N_c).
struct FrameTracker {
  double vz_deg[2] = {0.0, 0.0};

  double& operator[](Channel c) { return vz_deg[c == Channel::MW ? 0 : 1]; }
  double offset(Channel c) const { return vz_deg[c == Channel::MW ? 0 : 1]; }

  Mat9 frame(System system) const {
    const Vec9 nmw = photon_number(Channel::MW, 0);
    const Vec9 nrf = photon_number(Channel::RF, nuclear_branch(system));
    Mat9 f = Mat9::Zero();
    for (int k = 0; k < kLevels; ++k) {
      f(k, k) = std::polar(1.0, deg2rad(vz_deg[0]) * nmw[k] + deg2rad(vz_deg[1]) * nrf[k]);
    }
    return f;
  }
};

struct Trajectory {
  Mat9 final_state;
  std::vector<Mat9> at_measure;
};

class Runner {
 public:
  Runner(const Schedule& schedule, const NvParams& params, const NoiseModel& noise,
         const EngineConfig& config)
      : schedule_(schedule),
        params_(params),
        noise_(noise),
        config_(config),
        dissipators_(lindblad_dissipators(noise)),
        sz_(sz_diagonal()) {
    if (const auto* o = std::get_if<OrnsteinUhlenbeck>(&noise.classical)) {
      dt_max_ = config.dt_max.value_or(o->tau_c / 20.0);
    }
  }

  Trajectory run(const Mat9& rho0, std::uint64_t seed) const {
    Trajectory out;
    DetuningProcess process(noise_.classical, seed);
    FrameTracker tracker;
    Mat9 rho = rho0;
    double t = 0.0;
    for (const Event& event : schedule_.events) {
      if (const auto* pulse = std::get_if<PulseEvent>(&event)) {
        const double phase = deg2rad(pulse->phase - tracker.offset(pulse->channel));
        if (pulse->ideal != IdealMode::None) {
          const Mat9 u = ideal_rotation(ideal_pairs(*pulse), deg2rad(pulse->flip), phase);
          rho = u * rho * u.adjoint();
        } else {
          const PulseFrame frame = rotating_frame(*pulse, params_, config_, phase);
          rho = evolve(rho, frame.h, frame.delta, t, pulse->duration, process);
          t += pulse->duration;
        }
      } else if (const auto* delay = std::get_if<Delay>(&event)) {
        rho = evolve(rho, Mat9::Zero(), Vec9::Zero(), t, delay->duration, process);
        t += delay->duration;
      } else if (const auto* vz = std::get_if<VirtualZ>(&event)) {
        tracker[vz->channel] += vz->angle;
      } else if (std::holds_alternative<LaserInit>(event)) {
        rho = laser_init(rho);
      } else if (std::holds_alternative<Measure>(event)) {
        out.at_measure.push_back(rho);
      }
    }
    const Mat9 f = tracker.frame(schedule_.system);
    out.final_state = f * rho * f.adjoint();
    return out;
  }

 private:
  // Piecewise-constant evolution over [t0, t0 + tau] of the shifted-frame
  // Hamiltonian h plus the current detuning, mapped back to the interaction picture.
  Mat9 evolve(Mat9 rho, const Mat9& h, const Vec9& delta, double t0, double tau,
              DetuningProcess& process) const {
    if (tau <= 0) return rho;
    int steps = 1;
    if (dt_max_) steps = std::max(1, static_cast<int>(std::ceil(tau / *dt_max_ - 1e-9)));
    const double dt = tau / steps;
    for (int k = 0; k < steps; ++k) {
      const double a = t0 + k * dt;
      Mat9 hk = h;
      hk.diagonal() += (process.value() * sz_).cast<Complex>();
      const Mat9 v0 = frame_phase(delta, a, -1.0);
      const Mat9 v1 = frame_phase(delta, a + dt, +1.0);
      if (dissipators_.empty()) {
        const Mat9 u = v1 * hermitian_evolution(hk, dt) * v0;
        rho = u * rho * u.adjoint();
      } else {
        const Super map = (liouvillian(hk, dissipators_) * dt).exp();
        rho = v1 * apply_channel(map, v0 * rho * v0.adjoint()) * v1.adjoint();
      }
      process.advance(dt);
    }
    return rho;
  }

  const Schedule& schedule_;
  const NvParams& params_;
  const NoiseModel& noise_;
  const EngineConfig& config_;
  std::vector<Dissipator> dissipators_;
  Vec9 sz_;
  std::optional<double> dt_max_;
};

std::vector<std::string> measure_labels(const Schedule& schedule) {
  std::vector<std::string> labels;
  for (const Event& e : schedule.events) {
    if (const auto* m = std::get_if<Measure>(&e)) labels.push_back(m->label);
  }
  return labels;
}

}  // namespace

void EngineConfig::validate(const NoiseModel& noise) const {
  if (!(rwa_cutoff_factor > 0)) throw ConfigError("engine: rwa_cutoff_factor must be > 0");
  if (rwa_cutoff && !(*rwa_cutoff > 0)) throw ConfigError("engine: rwa_cutoff must be > 0");
  if (dt_max && !(*dt_max > 0)) throw ConfigError("engine: dt_max must be > 0");
  if (n_traj < 1) throw ConfigError("engine: n_traj must be >= 1");
  if (workers < 1) throw ConfigError("engine: workers must be >= 1");
  if (const auto* o = std::get_if<OrnsteinUhlenbeck>(&noise.classical)) {
    if (dt_max && *dt_max > o->tau_c) {
      throw ConfigError("engine: dt_max exceeds the noise correlation time");
    }
  }
}

double SimResult::value(std::string_view label) const {
  for (const Measurement& m : measurements) {
    if (m.label == label) return m.value;
  }
  throw std::out_of_range("no measurement labelled '" + std::string(label) + "'");
}

Mat9 pulse_propagator(const PulseEvent& pulse, const NvParams& params, const EngineConfig& config,
                      double t_start, double phase_offset_deg) {
  const double phase = deg2rad(pulse.phase - phase_offset_deg);
  if (pulse.ideal != IdealMode::None) {
    return ideal_rotation(ideal_pairs(pulse), deg2rad(pulse.flip), phase);
  }
  const PulseFrame frame = rotating_frame(pulse, params, config, phase);
  return frame_phase(frame.delta, t_start + pulse.duration, +1.0) *
         hermitian_evolution(frame.h, pulse.duration) * frame_phase(frame.delta, t_start, -1.0);
}

SimResult propagate(const Schedule& schedule, const Mat9& rho0, const NvParams& params,
                    const NoiseModel& noise, const EngineConfig& config) {
  params.validate();
  noise.validate();
  config.validate(noise);
  validate(schedule);
  validate_density_matrix(rho0);

  const int n_traj = noise.has_classical() ? config.n_traj : 1;
  const Runner runner(schedule, params, noise, config);
  std::vector<Trajectory> results(static_cast<size_t>(n_traj));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n_traj; i = next++) {
      results[static_cast<size_t>(i)] = runner.run(rho0, config.seed + static_cast<std::uint64_t>(i));
    }
  };
  const int n_workers = std::min(config.workers, n_traj);
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }

  const std::vector<std::string> labels = measure_labels(schedule);
  SimResult out;
  out.final_state = Mat9::Zero();
  std::vector<Mat9> measured(labels.size(), Mat9::Zero());
  for (const Trajectory& r : results) {
    out.final_state += r.final_state;
    for (size_t k = 0; k < labels.size(); ++k) measured[k] += r.at_measure[k];
    if (config.keep_trajectories) {
      std::vector<double> row;
      for (const Mat9& rho : r.at_measure) row.push_back(readout_p0(rho, schedule.system));
      out.trajectories.push_back(std::move(row));
    }
  }
  out.final_state /= static_cast<double>(n_traj);
  for (size_t k = 0; k < labels.size(); ++k) {
    out.measurements.push_back({labels[k], readout_p0(measured[k] / static_cast<double>(n_traj),
                                                      schedule.system)});
  }
  if (!out.final_state.allFinite()) throw NumericError("propagate: non-finite state");
  return out;
}

Mat9 schedule_unitary(const Schedule& schedule, const NvParams& params, const EngineConfig& config) {
  validate(schedule);
  FrameTracker tracker;
  Mat9 u = Mat9::Identity();
  double t = 0.0;
  for (const Event& event : schedule.events) {
    if (const auto* pulse = std::get_if<PulseEvent>(&event)) {
      u = pulse_propagator(*pulse, params, config, t, tracker.offset(pulse->channel)) * u;
      t += pulse->duration;
    } else if (const auto* delay = std::get_if<Delay>(&event)) {
      t += delay->duration;
    } else if (const auto* vz = std::get_if<VirtualZ>(&event)) {
      tracker[vz->channel] += vz->angle;
    } else if (std::holds_alternative<LaserInit>(event)) {
      throw ConfigError("schedule_unitary: laser events are not unitary");
    }
  }
  return tracker.frame(schedule.system) * u;
}

double readout_p0(const Mat9& rho, System system) {
  const auto flat = comp_embedding(system).flat();
  double p0 = 0.0;
  double total = 0.0;
  for (int k : flat) {
    const double p = rho(k, k).real();
    total += p;
    if (LevelIndex::from_flat(k).ms == 0) p0 += p;
  }
  if (total < 1e-12) throw NumericError("readout: no population in the computational levels");
  return p0 / total;
}

double addressed_p0(const Mat9& rho) {
  const int a = LevelIndex{0, 0}.flat();
  const int b = LevelIndex{-1, 0}.flat();
  const double total = rho(a, a).real() + rho(b, b).real();
  if (total < 1e-12) throw NumericError("readout: no population in the m_i = 0 pair");
  return rho(a, a).real() / total;
}

double electron_coherence(const Mat9& rho) {
  const int a = LevelIndex{0, 0}.flat();
  const int b = LevelIndex{-1, 0}.flat();
  const double total = rho(a, a).real() + rho(b, b).real();
  if (total < 1e-12) throw NumericError("coherence: no population in the m_i = 0 pair");
  return 2.0 * std::abs(rho(a, b)) / total;
}

Mat9 laser_init(const Mat9& rho) {
  Mat3 nuclear = Mat3::Zero();
  for (int e = 0; e < 3; ++e) nuclear += rho.block<3, 3>(3 * e, 3 * e);
  Mat3 ground = Mat3::Zero();
  ground(1, 1) = 1.0;
  return embed(ground, nuclear);
}

Mat9 maximally_mixed() { return Mat9::Identity() / 9.0; }

}  // namespace nvdd
