#pragma once

#include <vector>

namespace nlwave {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

/// Ordinary least squares y ≈ slope·x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Upper envelope |g(ξ)| ≤ K e^{-α|ξ|} from a log-linear fit of |g| over the
/// samples with |ξ| in [lo, hi] (both sides pooled), with K raised so the
/// envelope dominates every sample on the window.
struct EnvelopeFit {
    double K = 0.0;
    double alpha = 0.0;
    double r2 = 0.0;
    double relative_residual = 0.0;  // rms of log-residuals divided by the log range
};

EnvelopeFit fit_envelope(const std::vector<double>& xi, const std::vector<double>& magnitude, double lo, double hi,
                         double floor = 1e-280);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace nlwave
