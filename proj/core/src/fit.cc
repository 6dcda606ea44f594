#include "nvdd/fit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "nvdd/errors.h"
#include "nvdd/experiments.h"

namespace nvdd {
namespace {

constexpr int kGrid = 50;
constexpr double kTMin = 1e-6;
constexpr double kTMax = 1.0;
constexpr double kKappaMax = 1e4;

// Time constants are optimized as log values so they stay positive.
bool is_log_param(DecayModel model, size_t k) {
  switch (model) {
    case DecayModel::Eq6:
    case DecayModel::Sr:
      return k == 0;
    case DecayModel::Exp:
    case DecayModel::Gaussian:
      return k == 1;
    case DecayModel::Linear:
      return false;
  }
  return false;
}

std::vector<double> to_internal(DecayModel model, std::vector<double> p) {
  for (size_t k = 0; k < p.size(); ++k) {
    if (is_log_param(model, k)) p[k] = std::log(p[k]);
  }
  return p;
}

std::vector<double> to_external(DecayModel model, std::vector<double> u) {
  for (size_t k = 0; k < u.size(); ++k) {
    if (is_log_param(model, k)) u[k] = std::exp(u[k]);
  }
  if (model == DecayModel::Sr) u[1] = std::max(u[1], 0.0);
  return u;
}

double sse(std::span<const FitPoint> data, DecayModel model, std::span<const double> p) {
  double s = 0;
  for (const FitPoint& x : data) {
    const double r = model_value(model, p, x) - x.signal;
    s += r * r;
  }
  return s;
}

double log_grid(int i) {
  return kTMin * std::pow(kTMax / kTMin, static_cast<double>(i) / (kGrid - 1));
}

// Least-squares a, c in a * f(t) + c for a fixed envelope f.
std::pair<double, double> linear_amplitudes(std::span<const FitPoint> data,
                                            const std::vector<double>& f) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (size_t k = 0; k < data.size(); ++k) {
    m(static_cast<Eigen::Index>(k), 0) = f[k];
    m(static_cast<Eigen::Index>(k), 1) = 1.0;
    y[static_cast<Eigen::Index>(k)] = data[k].signal;
  }
  const Eigen::Vector2d ac = m.colPivHouseholderQr().solve(y);
  return {ac[0], ac[1]};
}

std::vector<double> grid_seed(std::span<const FitPoint> data, DecayModel model) {
  std::vector<double> best;
  double best_cost = std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<double> p) {
    const double c = sse(data, model, p);
    if (c < best_cost) {
      best_cost = c;
      best = std::move(p);
    }
  };
  switch (model) {
    case DecayModel::Eq6:
      for (int i = 0; i < kGrid; ++i) consider({log_grid(i)});
      break;
    case DecayModel::Sr:
      for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) consider({log_grid(i), kKappaMax * j / (kGrid - 1)});
      }
      break;
    case DecayModel::Exp:
    case DecayModel::Gaussian:
      for (int i = 0; i < kGrid; ++i) {
        const double tau = log_grid(i);
        std::vector<double> f;
        for (const FitPoint& x : data) {
          const double z = x.t / tau;
          f.push_back(model == DecayModel::Exp ? std::exp(-z) : std::exp(-z * z));
        }
        const auto [a, c] = linear_amplitudes(data, f);
        consider({a, tau, c});
      }
      break;
    case DecayModel::Linear: {
      std::vector<double> f;
      for (const FitPoint& x : data) f.push_back(x.t);
      const auto [b, a] = linear_amplitudes(data, f);
      consider({a, b});
      break;
    }
  }
  return best;
}

}  // namespace

std::string_view model_name(DecayModel model) {
  switch (model) {
    case DecayModel::Eq6:
      return "eq6";
    case DecayModel::Sr:
      return "s_r";
    case DecayModel::Exp:
      return "exp";
    case DecayModel::Gaussian:
      return "gaussian";
    case DecayModel::Linear:
      return "linear";
  }
  return "";
}

DecayModel parse_model(std::string_view name) {
  for (DecayModel m : {DecayModel::Eq6, DecayModel::Sr, DecayModel::Exp, DecayModel::Gaussian,
                       DecayModel::Linear}) {
    if (model_name(m) == name) return m;
  }
  throw ConfigError("unknown fit model '" + std::string(name) + "'");
}

std::vector<std::string> model_parameters(DecayModel model) {
  switch (model) {
    case DecayModel::Eq6:
      return {"T2"};
    case DecayModel::Sr:
      return {"T2", "kappa"};
    case DecayModel::Exp:
    case DecayModel::Gaussian:
      return {"a", "T", "c"};
    case DecayModel::Linear:
      return {"a", "b"};
  }
  return {};
}

double FitResult::param(std::string_view name) const {
  for (size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return values[k];
  }
  throw std::out_of_range("no fit parameter '" + std::string(name) + "'");
}

double model_value(DecayModel model, std::span<const double> p, const FitPoint& x) {
  switch (model) {
    case DecayModel::Eq6:
      return decayed_signal(x.theta, x.t, p[0]);
    case DecayModel::Sr:
      return residual_model(x.theta, x.t, p[0], p[1]);
    case DecayModel::Exp:
      return p[0] * std::exp(-x.t / p[1]) + p[2];
    case DecayModel::Gaussian: {
      const double z = x.t / p[1];
      return p[0] * std::exp(-z * z) + p[2];
    }
    case DecayModel::Linear:
      return p[0] + p[1] * x.t;
  }
  return 0;
}

FitResult fit_decay(std::span<const FitPoint> data, DecayModel model, const FitOptions& options) {
  FitResult result;
  result.model = model;
  result.names = model_parameters(model);
  const size_t np = result.names.size();
  if (data.size() < 2 * np) {
    throw ConfigError("fit: need at least " + std::to_string(2 * np) + " points");
  }
  std::vector<double> start = options.initial ? *options.initial : grid_seed(data, model);
  if (start.empty() && !options.initial) throw NumericError("fit: no starting point with a finite residual");
  if (start.size() != np) throw ConfigError("fit: wrong number of initial values");
  if (model == DecayModel::Eq6 || model == DecayModel::Sr) {
    if (!(start[0] > 0)) throw ConfigError("fit: initial T2 must be > 0");
  }

  const auto n = static_cast<Eigen::Index>(data.size());
  const auto m = static_cast<Eigen::Index>(np);
  auto residuals = [&](const Eigen::VectorXd& u) {
    const std::vector<double> p = to_external(model, {u.data(), u.data() + m});
    Eigen::VectorXd r(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      r[k] = model_value(model, p, data[static_cast<size_t>(k)]) - data[static_cast<size_t>(k)].signal;
    }
    return r;
  };

  const std::vector<double> u0 = to_internal(model, start);
  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(u0.data(), m);
  Eigen::VectorXd r = residuals(u);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    Eigen::MatrixXd jac(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd up = u;
      const double h = 1e-7 * std::max(1.0, std::abs(u[j]));
      up[j] += h;
      jac.col(j) = (residuals(up) - r) / h;
    }
    const Eigen::MatrixXd a = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    if (g.norm() == 0.0) {
      result.converged = true;
      break;
    }
    bool improved = false;
    while (lambda < 1e16) {
      Eigen::MatrixXd damped = a;
      for (Eigen::Index j = 0; j < m; ++j) damped(j, j) += lambda * std::max(a(j, j), 1e-300);
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      const Eigen::VectorXd trial = u + step;
      const Eigen::VectorXd rt = residuals(trial);
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct <= cost) {
        const bool small = step.norm() <= options.tolerance * (u.norm() + options.tolerance);
        const bool flat = cost - ct <= 1e-15 * cost;
        u = trial;
        r = rt;
        cost = ct;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        if (small || flat) result.converged = true;
        break;
      }
      lambda *= 4.0;
    }
    // No descent direction left at any damping: a stationary point.
    if (!improved) result.converged = true;
    if (result.converged) break;
  }
  result.values = to_external(model, {u.data(), u.data() + m});
  result.residual_norm = std::sqrt(cost);
  if (!std::isfinite(result.residual_norm)) throw NumericError("fit: non-finite residual");
  return result;
}

}  // namespace nvdd
