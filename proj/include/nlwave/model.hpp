#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlwave/kernel.hpp"
#include "nlwave/nonlinearity.hpp"

namespace nlwave {

/// Linearization constants at the equilibria: a± = f_r(±1,±1), b± = f_s(±1,±1).
struct EquilibriumConstants {
    double a_plus = 0.0;
    double a_minus = 0.0;
    double b_plus = 0.0;
    double b_minus = 0.0;
};

class ModelProblem {
public:
    ModelProblem(std::string name, double d, Kernel kernel, Nonlinearity nonlinearity);

    const std::string& name() const { return name_; }
    double d() const { return d_; }
    const Kernel& kernel() const { return kernel_; }
    const Nonlinearity& f() const { return f_; }
    double q() const { return f_.q(); }
    const EquilibriumConstants& constants() const { return constants_; }

private:
    std::string name_;
    double d_;
    Kernel kernel_;
    Nonlinearity f_;
    EquilibriumConstants constants_;
};

EquilibriumConstants equilibrium_constants(const ModelProblem& problem);

enum class Verdict { pass, fail, deferred };
std::string to_string(Verdict v);

struct Witness {
    std::string location;
    double magnitude = 0.0;
};

struct HypothesisResult {
    std::string id;  // H1a, H1b, H2, H3, H4, H5
    Verdict verdict = Verdict::pass;
    std::string detail;
    std::optional<Witness> witness;  // always present on fail
};

/// Sampling used by check_hypotheses. A pass is evidence on these samples, not proof.
struct SamplingGrid {
    int square_points = 201;  // per axis of [-1,1]^2 for (H3)
    int line_points = 2001;   // on [-1,1] for (H5), and on [-s_max, s_max] for (H1b)
    double s_max = 0.0;       // 0 selects the kernel's effective radius
};

struct HypothesisReport {
    std::vector<HypothesisResult> results;
    SamplingGrid grid;
    std::optional<double> speed;
    /// Monotonicity interval [l, l'] of f̄ detected for (H5), when found.
    std::optional<std::pair<double, double>> increasing_interval;

    /// No hypothesis failed; deferred (speed-dependent) entries do not count as failures.
    bool all_pass() const;
    bool any_fail() const;
    bool conclusive() const;
    const HypothesisResult& get(const std::string& id) const;
};

/// Checks (H1a) d+|c|≠0 (needs `speed` unless d>0), (H1b) kernel, (H2)-(H5).
HypothesisReport check_hypotheses(const ModelProblem& problem, const SamplingGrid& grid = {},
                                  std::optional<double> speed = std::nullopt);

}  // namespace nlwave
