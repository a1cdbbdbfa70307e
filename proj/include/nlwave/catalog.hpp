#pragma once

#include <string>
#include <vector>

#include "nlwave/model.hpp"

namespace nlwave {

/// Built-in models: "neural", "ising", "phase". Unknown names throw CatalogError.
///
/// neural: f(r,s) = -r + S̃(s), S̃ the logistic 1/(1+e^{-κ(u-1/2)}), κ = 5, affinely
///         rescaled so its stable fixed points map to ±1; gaussian σ = 2; d = 0.
/// ising:  f(r,s) = tanh(β m* s)/m* - r, β = 2, h = 0, m* the positive root of
///         tanh(βm) = m; bump kernel R = 10; d = 0.
/// phase:  f(r,s) = ε(s - r) + g(r), g = u - u³, ε = 0.1; gaussian σ = 1; d = 4.
ModelProblem builtin_model(const std::string& name);

std::vector<std::string> builtin_names();

/// Phase-transition family with g(u) = (1-u²)(u + detuning); middle zero q = -detuning.
ModelProblem phase_model(double epsilon, double detuning = 0.0, double d = 4.0, double sigma = 1.0);

/// Positive root of tanh(βm) = m for β > 1, by bisection.
double ising_magnetization(double beta);

}  // namespace nlwave
