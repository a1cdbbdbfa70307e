#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "nlwave/model.hpp"

namespace nlwave {

/// Key-value model definition, one `key = value` per line, `#` starts a comment.
///
///   name = detuned            (optional)
///   d = 4
///   param.eps = 0.1           (any number of named constants usable in expressions)
///   kernel.family = gaussian | laplace | bump | tabulated
///   kernel.sigma | kernel.beta | kernel.radius = <value>
///   kernel.file = table.txt   (tabulated; two columns s J(s), relative to the model file)
///   kernel.scale = 1          (optional multiplier on J; mass becomes the scale)
///   nonlinearity.f = eps*(s - r) + r - r^3
///   nonlinearity.f_r = ...    (optional closed-form partials)
///   nonlinearity.f_s = ...
///   nonlinearity.q = 0
///
/// Unknown keys, duplicates and missing required keys throw ParseError.
ModelProblem parse_model(const std::string& text, const std::filesystem::path& base_dir = ".");
ModelProblem load_model(const std::filesystem::path& path);

/// Builtin name or path to a model file.
ModelProblem resolve_model(const std::string& source);

}  // namespace nlwave
