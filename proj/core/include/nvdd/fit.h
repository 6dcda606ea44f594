#ifndef NVDD_FIT_H
#define NVDD_FIT_H

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nvdd {

// eq6:      decayed_signal(theta, t, T2)                     params {T2}
// s_r:      (1 - kappa t) decayed_signal(theta, t, T2)       params {T2, kappa}
// exp:      a exp(-t / T) + c                                params {a, T, c}
// gaussian: a exp(-(t / T)^2) + c                            params {a, T, c}
// linear:   a + b t                                          params {a, b}
enum class DecayModel { Eq6, Sr, Exp, Gaussian, Linear };

std::string_view model_name(DecayModel model);
// Throws ConfigError for an unknown name.
DecayModel parse_model(std::string_view name);
std::vector<std::string> model_parameters(DecayModel model);

struct FitPoint {
  double theta = 0;  // rad; ignored by the envelope models
  double t = 0;      // s
  double signal = 0;
};

struct FitResult {
  DecayModel model = DecayModel::Eq6;
  std::vector<std::string> names;
  std::vector<double> values;
  double residual_norm = 0;  // sqrt(sum r^2)
  bool converged = false;
  int iterations = 0;

  // Throws std::out_of_range for an unknown parameter.
  double param(std::string_view name) const;
};

double model_value(DecayModel model, std::span<const double> params, const FitPoint& x);

struct FitOptions {
  std::optional<std::vector<double>> initial;  // skips the grid search
  int max_iterations = 200;
  double tolerance = 1e-12;  // relative step size at convergence
};

// Damped Gauss-Newton (Levenberg-Marquardt) with a forward-difference Jacobian,
// seeded by a grid over T2 in [1 us, 1 s] (log) and kappa in [0, 1e4] /s.
// Non-convergence is reported through FitResult::converged. Throws ConfigError
// with fewer than 2 points per parameter.
FitResult fit_decay(std::span<const FitPoint> data, DecayModel model, const FitOptions& options = {});

}  // namespace nvdd

#endif  // NVDD_FIT_H
