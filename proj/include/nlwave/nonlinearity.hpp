#pragma once

#include <functional>
#include <optional>
#include <string>

namespace nlwave {

using Fn2 = std::function<double(double, double)>;

/// Affine change of state variable u = center + half_width * v, mapping the
/// rescaled equilibria v = ±1 onto the original stable states.
struct AffineMap {
    double center = 0.0;
    double half_width = 1.0;
    double to_original(double v) const { return center + half_width * v; }
    double to_rescaled(double u) const { return (u - center) / half_width; }
};

/// f(r, s) with partial derivatives. Missing closed-form partials fall back to
/// centered differences (step 1e-6), Richardson-refined against step 1e-5 when
/// the two disagree by more than 1e-6.
class Nonlinearity {
public:
    Nonlinearity(std::string name, Fn2 f, double q, std::optional<Fn2> f_r = std::nullopt,
                 std::optional<Fn2> f_s = std::nullopt);

    double operator()(double r, double s) const { return f_(r, s); }
    double f_r(double r, double s) const;
    double f_s(double r, double s) const;
    double f_r_fd(double r, double s) const;
    double f_s_fd(double r, double s) const;

    bool has_closed_partials() const { return fr_.has_value() && fs_.has_value(); }
    double q() const { return q_; }
    const std::string& name() const { return name_; }

    const std::optional<AffineMap>& rescaling() const { return rescaling_; }
    Nonlinearity with_rescaling(AffineMap map) const;

private:
    std::string name_;
    Fn2 f_;
    double q_;
    std::optional<Fn2> fr_, fs_;
    std::optional<AffineMap> rescaling_;
};

}  // namespace nlwave
