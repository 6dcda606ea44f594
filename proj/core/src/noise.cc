#include "nvdd/noise.h"

#include <cmath>
#include <sstream>

#include "nvdd/errors.h"
#include "nvdd/units.h"

namespace nvdd {
namespace {

using units::Dimension;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t k = s.find(sep, start);
    out.push_back(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return out;
}

double quantity(std::string_view key, std::string_view value, Dimension dim) {
  auto v = units::parse_quantity(value, dim);
  if (!v) {
    throw ConfigError("noise: bad value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return *v;
}

}  // namespace

void NoiseModel::validate() const {
  if (lindblad) {
    if (lindblad->t1 && !(*lindblad->t1 > 0)) throw ConfigError("noise: T1 must be > 0");
    if (lindblad->t2 && !(*lindblad->t2 > 0)) throw ConfigError("noise: T2 must be > 0");
  }
  if (const auto* s = std::get_if<StaticGaussian>(&classical); s && !(s->sigma >= 0)) {
    throw ConfigError("noise: sigma must be >= 0");
  }
  if (const auto* o = std::get_if<OrnsteinUhlenbeck>(&classical)) {
    if (!(o->sigma >= 0)) throw ConfigError("noise: sigma must be >= 0");
    if (!(o->tau_c > 0)) throw ConfigError("noise: tau must be > 0");
  }
}

NoiseModel parse_noise_spec(std::string_view spec) {
  NoiseModel model;
  if (spec.empty() || spec == "none") return model;
  for (std::string_view term : split(spec, '+')) {
    const auto colon = term.find(':');
    const std::string_view kind = term.substr(0, colon);
    std::vector<std::pair<std::string_view, std::string_view>> kv;
    if (colon != std::string_view::npos) {
      for (std::string_view item : split(term.substr(colon + 1), ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
          throw ConfigError("noise: expected key=value in '" + std::string(item) + "'");
        }
        kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      }
    }
    if (kind == "lindblad") {
      if (model.lindblad) throw ConfigError("noise: duplicate lindblad term");
      LindbladNoise l;
      for (auto [k, v] : kv) {
        if (k == "T1" && !l.t1) {
          l.t1 = quantity(k, v, Dimension::Time);
        } else if (k == "T2" && !l.t2) {
          l.t2 = quantity(k, v, Dimension::Time);
        } else {
          throw ConfigError("noise: unexpected lindblad key '" + std::string(k) + "'");
        }
      }
      model.lindblad = l;
    } else if (kind == "static" || kind == "ou") {
      if (model.has_classical()) throw ConfigError("noise: at most one classical term");
      std::optional<double> sigma, tau;
      for (auto [k, v] : kv) {
        if (k == "sigma" && !sigma) {
          sigma = quantity(k, v, Dimension::Frequency);
        } else if (k == "tau" && kind == "ou" && !tau) {
          tau = quantity(k, v, Dimension::Time);
        } else {
          throw ConfigError("noise: unexpected " + std::string(kind) + " key '" + std::string(k) + "'");
        }
      }
      if (!sigma) throw ConfigError("noise: missing sigma");
      if (kind == "static") {
        model.classical = StaticGaussian{*sigma};
      } else {
        if (!tau) throw ConfigError("noise: missing tau");
        model.classical = OrnsteinUhlenbeck{*sigma, *tau};
      }
    } else {
      throw ConfigError("noise: unknown model '" + std::string(kind) + "'");
    }
  }
  model.validate();
  return model;
}

std::string format_noise_spec(const NoiseModel& noise) {
  using units::format_quantity;
  std::vector<std::string> terms;
  if (noise.lindblad) {
    std::string t = "lindblad:";
    std::vector<std::string> kv;
    if (noise.lindblad->t1) kv.push_back("T1=" + format_quantity(*noise.lindblad->t1, Dimension::Time));
    if (noise.lindblad->t2) kv.push_back("T2=" + format_quantity(*noise.lindblad->t2, Dimension::Time));
    for (size_t k = 0; k < kv.size(); ++k) t += (k ? "," : "") + kv[k];
    terms.push_back(t);
  }
  if (const auto* s = std::get_if<StaticGaussian>(&noise.classical)) {
    terms.push_back("static:sigma=" + format_quantity(s->sigma, Dimension::Frequency));
  } else if (const auto* o = std::get_if<OrnsteinUhlenbeck>(&noise.classical)) {
    terms.push_back("ou:sigma=" + format_quantity(o->sigma, Dimension::Frequency) +
                    ",tau=" + format_quantity(o->tau_c, Dimension::Time));
  }
  if (terms.empty()) return "none";
  std::string out;
  for (size_t k = 0; k < terms.size(); ++k) out += (k ? "+" : "") + terms[k];
  return out;
}

std::vector<Dissipator> lindblad_dissipators(const NoiseModel& noise) {
  std::vector<Dissipator> out;
  if (!noise.lindblad) return out;
  if (noise.lindblad->t2) {
    out.push_back({embed(spin1_matrices().z, Mat3::Identity()), 2.0 / *noise.lindblad->t2});
  }
  if (noise.lindblad->t1) {
    const double rate = 1.0 / (3.0 * *noise.lindblad->t1);
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        if (i == j) continue;
        for (int m = -1; m <= 1; ++m) {
          Mat9 op = Mat9::Zero();
          op(LevelIndex{i, m}.flat(), LevelIndex{j, m}.flat()) = 1.0;
          out.push_back({op, rate});
        }
      }
    }
  }
  return out;
}

DetuningProcess::DetuningProcess(const ClassicalNoise& model, std::uint64_t seed)
    : model_(model), rng_(seed) {
  if (const auto* s = std::get_if<StaticGaussian>(&model_)) {
    value_ = s->sigma * normal_(rng_);
  } else if (const auto* o = std::get_if<OrnsteinUhlenbeck>(&model_)) {
    value_ = o->sigma * normal_(rng_);
  }
}

void DetuningProcess::advance(double dt) {
  const auto* o = std::get_if<OrnsteinUhlenbeck>(&model_);
  if (o == nullptr || dt <= 0) return;
  const double decay = std::exp(-dt / o->tau_c);
  value_ = value_ * decay + o->sigma * std::sqrt(1.0 - decay * decay) * normal_(rng_);
}

std::vector<double> sample_noise(const ClassicalNoise& model, double duration, std::uint64_t seed,
                                 double dt) {
  if (!(dt > 0)) throw ConfigError("sample_noise: dt must be > 0");
  const auto steps = static_cast<size_t>(std::ceil(duration / dt - 1e-12));
  std::vector<double> out;
  out.reserve(steps);
  DetuningProcess process(model, seed);
  for (size_t k = 0; k < steps; ++k) {
    out.push_back(process.value());
    process.advance(dt);
  }
  return out;
}

}  // namespace nvdd
