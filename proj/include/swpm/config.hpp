#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "swpm/particle.hpp"
#include "swpm/reduction.hpp"

namespace swpm {

/// Where the reference curve for error/CI statistics comes from.
enum class ReferenceSource { equilibriumAnalytic, oracleRun };

/// Full experiment description, parsed from a flat key=value file.
struct ExperimentConfig {
    ReductionScheme scheme = ReductionScheme::pressureTensorCentralHeatFlux;
    std::size_t m0 = 0;
    std::size_t ensembles = 0;        // N; 0 = derive from particleBudget
    double tEnd = 3.0;
    std::size_t timeGridPoints = 31;
    MixtureSpec mixture;
    std::uint64_t seed = 0;
    double reductionTriggerFactor = 4.0;
    double reductionTargetFactor = 0.25;
    std::string outputPath;
    std::size_t workerCount = 0;      // 0 = all hardware threads
    ReferenceSource reference = ReferenceSource::equilibriumAnalytic;
    std::string referencePath;        // CSV from the oracle subcommand
    std::size_t particleBudget = 1024000;  // m0*N when N is not given

    std::size_t resolvedEnsembles() const;
    void validate() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse a key=value document ('#' comments, blank lines allowed). Unknown
/// keys and invariant violations raise ConfigError with the line number.
ExperimentConfig parseConfig(const std::string& text);

ExperimentConfig loadConfigFile(const std::string& path);

/// Inverse of parseConfig up to formatting; parse(serialize(c)) == c.
std::string serializeConfig(const ExperimentConfig& config);

}  // namespace swpm
