#include "nlwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

std::string at(const char* name, double v) {
    std::ostringstream out;
    out << name << "=" << v;
    return out.str();
}

std::string at2(double r, double s) {
    std::ostringstream out;
    out << "(r,s)=(" << r << "," << s << ")";
    return out.str();
}

HypothesisResult pass(std::string id, std::string detail) {
    return {std::move(id), Verdict::pass, std::move(detail), std::nullopt};
}

HypothesisResult fail(std::string id, std::string detail, std::string where, double magnitude) {
    return {std::move(id), Verdict::fail, std::move(detail), Witness{std::move(where), magnitude}};
}

constexpr double kZeroTol = 1e-10;

HypothesisResult check_h1a(const ModelProblem& p, std::optional<double> speed) {
    if (p.d() > 0.0) return pass("H1a", "d > 0");
    if (!speed) {
        return {"H1a", Verdict::deferred, "d = 0: needs the wave speed (d+|c| != 0)", std::nullopt};
    }
    if (std::abs(*speed) > 1e-8) return pass("H1a", "d = 0 and c != 0");
    return fail("H1a", "d = 0 and c = 0", at("c", *speed), std::abs(*speed));
}

HypothesisResult check_h1b(const ModelProblem& p, const SamplingGrid& g) {
    const Kernel& k = p.kernel();
    const double smax = g.s_max > 0.0 ? g.s_max : std::min(k.effective_radius() * 1.1, 1e3);
    const int n = g.line_points;
    double worst_odd = 0.0, odd_at = 0.0, most_negative = 0.0, neg_at = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = -smax + 2.0 * smax * i / (n - 1);
        const double js = k(s), jm = k(-s);
        if (std::abs(js - jm) > worst_odd) {
            worst_odd = std::abs(js - jm);
            odd_at = s;
        }
        if (js < most_negative) {
            most_negative = js;
            neg_at = s;
        }
    }
    if (worst_odd > 1e-12) return fail("H1b", "kernel not even", at("s", odd_at), worst_odd);
    if (most_negative < 0.0) return fail("H1b", "kernel negative", at("s", neg_at), -most_negative);
    const double mass_error = std::abs(k.transform(0.0).real() - 1.0);
    if (mass_error > 1e-8) return fail("H1b", "kernel mass differs from 1", "|int J - 1|", mass_error);
    if (std::isfinite(k.abscissa())) {
        return fail("H1b", "exponential moments diverge", at("|rho|", k.abscissa()), k.abscissa());
    }
    return pass("H1b", "even, nonnegative, unit mass, all exponential moments finite");
}

HypothesisResult check_h2(const ModelProblem& p) {
    const auto& f = p.f();
    const double q = p.q();
    const double vals[3] = {f(-1.0, -1.0), f(1.0, 1.0), f(q, q)};
    const char* where[3] = {"(-1,-1)", "(1,1)", "(q,q)"};
    int worst = 0;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(vals[i]) > std::abs(vals[worst])) worst = i;
    }
    if (std::abs(vals[worst]) > kZeroTol || !std::isfinite(vals[worst])) {
        return fail("H2", "f does not vanish at an equilibrium", where[worst], std::abs(vals[worst]));
    }
    return pass("H2", "f(-1,-1) = f(1,1) = f(q,q) = 0");
}

HypothesisResult check_h3(const ModelProblem& p, const SamplingGrid& g) {
    const int n = g.square_points;
    double worst = std::numeric_limits<double>::infinity();
    double wr = 0.0, ws = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = -1.0 + 2.0 * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double s = -1.0 + 2.0 * j / (n - 1);
            const double v = p.f().f_s(r, s);
            if (!(v >= worst)) {
                worst = v;
                wr = r;
                ws = s;
            }
        }
    }
    if (!(worst > 0.0)) return fail("H3", "f_s not positive", at2(wr, ws), worst);
    return pass("H3", "min f_s on the sampled square is positive");
}

HypothesisResult check_h4(const ModelProblem& p) {
    const auto& k = p.constants();
    const double margins[4] = {k.a_plus, k.a_minus, k.a_plus + k.b_plus, k.a_minus + k.b_minus};
    const char* names[4] = {"a+", "a-", "a+ + b+", "a- + b-"};
    for (int i = 0; i < 4; ++i) {
        if (!(margins[i] < 0.0)) {
            return fail("H4", std::string(names[i]) + " is not negative", names[i], margins[i]);
        }
    }
    return pass("H4", "a± < 0 and a± < -b±");
}

HypothesisResult check_h5(const ModelProblem& p, const SamplingGrid& g,
                          std::optional<std::pair<double, double>>& interval) {
    const auto& f = p.f();
    const double q = p.q();
    const int n = g.line_points;
    const double ds = 2.0 / (n - 1);
    const double guard = 1.5 * ds;
    auto near_zero = [&](double s) {
        return std::abs(s + 1.0) < guard || std::abs(s - 1.0) < guard || std::abs(s - q) < guard;
    };
    std::vector<double> s(n), fbar(n), slope(n);
    for (int i = 0; i < n; ++i) {
        s[i] = -1.0 + i * ds;
        fbar[i] = f(s[i], s[i]);
        slope[i] = f.f_r(s[i], s[i]) + f.f_s(s[i], s[i]);
    }
    for (int i = 0; i < n; ++i) {
        if (near_zero(s[i])) continue;
        if (std::abs(fbar[i]) <= 1e-12) {
            return fail("H5", "f̄ has a zero besides ±1 and q", at("s", s[i]), std::abs(fbar[i]));
        }
        if (i + 1 < n && !near_zero(s[i + 1]) && fbar[i] * fbar[i + 1] < 0.0) {
            return fail("H5", "f̄ changes sign besides ±1 and q", at("s", s[i]),
                        std::min(std::abs(fbar[i]), std::abs(fbar[i + 1])));
        }
    }
    // {f̄' >= 0} must be one interval [l, l'] strictly inside (-1, 1) containing q.
    // Samples with |f̄'| below the finite-difference noise are left unclassified.
    constexpr double kSlopeNoise = 1e-7;
    int first = -1, last = -1;
    for (int i = 0; i < n; ++i) {
        if (slope[i] > kSlopeNoise) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return fail("H5", "f̄ is nowhere increasing", at("s", q), 0.0);
    for (int i = first; i <= last; ++i) {
        if (slope[i] < -kSlopeNoise) {
            return fail("H5", "increasing set of f̄ is not an interval", at("s", s[i]), -slope[i]);
        }
    }
    if (first == 0 || last == n - 1) {
        return fail("H5", "increasing interval of f̄ reaches ±1", at("s", s[first == 0 ? 0 : last]),
                    slope[first == 0 ? 0 : last]);
    }
    // Extend through unclassified neighbours to the last sample with f̄' >= -noise.
    while (first > 1 && slope[first - 1] >= -kSlopeNoise) --first;
    while (last < n - 2 && slope[last + 1] >= -kSlopeNoise) ++last;
    if (q < s[first] - ds || q > s[last] + ds) {
        return fail("H5", "q lies outside the increasing interval of f̄", at("q", q),
                    std::min(std::abs(q - s[first]), std::abs(q - s[last])));
    }
    interval = std::make_pair(s[first], s[last]);
    std::ostringstream detail;
    detail << "bistable, f̄' >= 0 on [" << s[first] << ", " << s[last] << "]";
    return pass("H5", detail.str());
}

}  // namespace

ModelProblem::ModelProblem(std::string name, double d, Kernel kernel, Nonlinearity nonlinearity)
    : name_(std::move(name)), d_(d), kernel_(std::move(kernel)), f_(std::move(nonlinearity)) {
    if (!(d_ >= 0.0) || !std::isfinite(d_)) throw SpecError("diffusion d must be finite and >= 0");
    constants_ = equilibrium_constants(*this);
}

EquilibriumConstants equilibrium_constants(const ModelProblem& problem) {
    const auto& f = problem.f();
    return {f.f_r(1.0, 1.0), f.f_r(-1.0, -1.0), f.f_s(1.0, 1.0), f.f_s(-1.0, -1.0)};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::deferred: return "deferred";
    }
    return "unknown";
}

bool HypothesisReport::all_pass() const { return !any_fail(); }

bool HypothesisReport::conclusive() const {
    return std::none_of(results.begin(), results.end(),
                        [](const HypothesisResult& r) { return r.verdict == Verdict::deferred; });
}

bool HypothesisReport::any_fail() const {
    return std::any_of(results.begin(), results.end(),
                       [](const HypothesisResult& r) { return r.verdict == Verdict::fail; });
}

const HypothesisResult& HypothesisReport::get(const std::string& id) const {
    for (const auto& r : results) {
        if (r.id == id) return r;
    }
    throw SpecError("no hypothesis named " + id);
}

HypothesisReport check_hypotheses(const ModelProblem& problem, const SamplingGrid& grid,
                                  std::optional<double> speed) {
    if (grid.square_points < 3 || grid.line_points < 3) {
        throw SpecError("hypothesis sampling needs at least 3 points per axis");
    }
    HypothesisReport report;
    report.grid = grid;
    report.speed = speed;
    report.results.push_back(check_h1a(problem, speed));
    report.results.push_back(check_h1b(problem, grid));
    report.results.push_back(check_h2(problem));
    report.results.push_back(check_h3(problem, grid));
    report.results.push_back(check_h4(problem));
    report.results.push_back(check_h5(problem, grid, report.increasing_interval));
    return report;
}

}  // namespace nlwave
