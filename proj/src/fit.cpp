#include "nlwave/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlwave/errors.hpp"

namespace nlwave {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw FitError("line fit needs at least two paired samples");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("line fit abscissae are degenerate");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.points = static_cast<int>(n);
    return fit;
}

EnvelopeFit fit_envelope(const std::vector<double>& xi, const std::vector<double>& magnitude, double lo, double hi,
                         double floor) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double a = std::abs(xi[i]);
        if (a >= lo && a <= hi && magnitude[i] > floor) {
            x.push_back(a);
            y.push_back(std::log(magnitude[i]));
        }
    }
    const LineFit line = fit_line(x, y);
    EnvelopeFit env;
    env.alpha = -line.slope;
    env.r2 = line.r2;
    double shift = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (line.slope * x[i] + line.intercept);
        shift = std::max(shift, r);
        ss += r * r;
    }
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    const double range = std::max(*ymax - *ymin, 1e-300);
    env.relative_residual = std::sqrt(ss / static_cast<double>(x.size())) / range;
    env.K = std::exp(line.intercept + shift);
    return env;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw FitError("spearman needs two equal samples of size >= 2");
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double m = (n + 1.0) / 2.0;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - m) * (rb[i] - m);
        saa += (ra[i] - m) * (ra[i] - m);
        sbb += (rb[i] - m) * (rb[i] - m);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace nlwave
