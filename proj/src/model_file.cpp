#include "nlwave/model_file.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "nlwave/catalog.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/expression.hpp"
#include "nlwave/textio.hpp"

namespace nlwave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entries {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;
    std::set<std::string> used;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    const std::string& text(const std::string& key) {
        auto it = values.find(key);
        if (it == values.end()) throw ParseError("model file: missing required key '" + key + "'");
        used.insert(key);
        return it->second;
    }

    double number(const std::string& key) {
        const std::string& v = text(key);
        double out = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
            throw ParseError("model file line " + std::to_string(lines[key]) + ": '" + key +
                             "' expects a number, got '" + v + "'");
        }
        return out;
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
};

Kernel parse_kernel(Entries& e, const std::filesystem::path& base_dir) {
    const std::string family = e.text("kernel.family");
    const double scale = e.number_or("kernel.scale", 1.0);
    if (family == "gaussian") return Kernel::gaussian(e.number("kernel.sigma"), scale);
    if (family == "laplace") return Kernel::laplace(e.number("kernel.beta"), scale);
    if (family == "bump") return Kernel::bump(e.number("kernel.radius"), scale);
    if (family == "tabulated") {
        if (e.has("kernel.scale")) throw ParseError("model file: tabulated kernels are renormalized; drop kernel.scale");
        std::filesystem::path file = e.text("kernel.file");
        if (file.is_relative()) file = base_dir / file;
        auto cols = read_columns(file, 2);
        return Kernel::tabulated(std::move(cols[0]), std::move(cols[1]));
    }
    throw ParseError("model file: unknown kernel.family '" + family + "'");
}

}  // namespace

ModelProblem parse_model(const std::string& text, const std::filesystem::path& base_dir) {
    Entries e;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("model file line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError("model file line " + std::to_string(lineno) + ": empty key or value");
        }
        if (e.has(key)) throw ParseError("model file line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        e.values[key] = value;
        e.lines[key] = lineno;
    }

    std::map<std::string, double> constants;
    for (const auto& [key, value] : e.values) {
        if (key.rfind("param.", 0) == 0) constants[key.substr(6)] = e.number(key);
    }

    const std::string name = e.has("name") ? e.text("name") : std::string("custom");
    const double d = e.number("d");
    Kernel kernel = parse_kernel(e, base_dir);
    const Expression f = Expression::parse(e.text("nonlinearity.f"), constants);
    std::optional<Fn2> fr, fs;
    if (e.has("nonlinearity.f_r")) {
        const Expression g = Expression::parse(e.text("nonlinearity.f_r"), constants);
        fr = [g](double r, double s) { return g(r, s); };
    }
    if (e.has("nonlinearity.f_s")) {
        const Expression g = Expression::parse(e.text("nonlinearity.f_s"), constants);
        fs = [g](double r, double s) { return g(r, s); };
    }
    const double q = e.number("nonlinearity.q");

    for (const auto& [key, value] : e.values) {
        if (!e.used.count(key)) {
            throw ParseError("model file line " + std::to_string(e.lines[key]) + ": unknown key '" + key + "'");
        }
    }
    Nonlinearity nl(name, [f](double r, double s) { return f(r, s); }, q, fr, fs);
    return {name, d, std::move(kernel), std::move(nl)};
}

ModelProblem load_model(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    return parse_model(text, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

ModelProblem resolve_model(const std::string& source) {
    for (const auto& n : builtin_names()) {
        if (n == source) return builtin_model(source);
    }
    if (!std::filesystem::exists(source)) {
        throw CatalogError("model '" + source + "' is neither a built-in name nor an existing file");
    }
    return load_model(source);
}

}  // namespace nlwave
