#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "nlwave/asymptotics.hpp"
#include "nlwave/greens.hpp"
#include "nlwave/model.hpp"
#include "nlwave/spectrum.hpp"
#include "nlwave/wave.hpp"

namespace nlwave {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "nlwave-report/1";

/// {"value", "tolerance", "pass"}: every checked number travels with its tolerance.
/// `below` selects value < tolerance, otherwise value > tolerance.
Json claim(double value, double tolerance, bool below = true);

Json to_json(const HypothesisReport& report);
/// Header fields only; the profile itself goes to a column file.
Json to_json(const WaveSolution& wave);
Json to_json(const DecayFit& fit, double rate_tolerance = 0.01);
Json to_json(const ResidueAmplitude& residue);
Json to_json(const UniquenessReport& report);
Json to_json(const SpectrumReport& report, const Classification& classes);
Json to_json(const GreensTable& table, double jump);

/// Versioned document. With `reproducible` set, timings are dropped so identical
/// inputs give byte-identical output.
class RunReport {
public:
    RunReport(std::string command, bool reproducible);
    Json& section(const std::string& name) { return doc_["sections"][name]; }
    void set_status(int exit_code, const std::string& message = {});
    void add_timing(const std::string& name, double seconds);
    const Json& document() const { return doc_; }
    std::string dump() const { return doc_.dump(2) + "\n"; }
    void write(const std::filesystem::path& path) const;

private:
    Json doc_;
    bool reproducible_;
};

}  // namespace nlwave
