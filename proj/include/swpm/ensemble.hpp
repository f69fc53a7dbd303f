#pragma once

#include <map>
#include <optional>
#include <vector>

#include "swpm/collision.hpp"
#include "swpm/config.hpp"
#include "swpm/moments.hpp"

namespace swpm {

/// Scalar diagnostics tracked on the time grid and reported in the CSV.
enum class TrackedMoment { rho, energy, pi11, h2, s };

constexpr TrackedMoment kTrackedMoments[] = {
    TrackedMoment::rho, TrackedMoment::energy, TrackedMoment::pi11,
    TrackedMoment::h2, TrackedMoment::s};

const char* trackedMomentName(TrackedMoment m);
double extractMoment(const MomentSet& set, TrackedMoment m);

/// Standard normal quantile, Acklam's rational approximation (|err| < 1.2e-9).
double normalQuantile(double p);

/// |reference - mean| / |reference|; empty when the reference vanishes.
std::optional<double> relativeError(double reference, double mean);

/// z_{1-alpha/2} * sqrt(sigma^2 / N) / |reference| with the unbiased sample
/// variance. Requires at least two samples.
double confidenceHalfWidth(std::span<const double> samples, double reference,
                           double alphaLevel);

/// Unbiased sample variance (divisor N-1).
double sampleVariance(std::span<const double> samples);

/// t -> infinity Maxwellian limit of the mixture, fixed by the collision
/// invariants (weight, momentum, energy are conserved exactly).
MomentSet equilibriumMoments(const MixtureSpec& spec);

/// Reference curve for error statistics: either the analytic equilibrium
/// limit or the mean curve of a no-reduction oracle run.
struct ReferenceMoments {
    ReferenceSource source = ReferenceSource::equilibriumAnalytic;
    std::vector<double> times;
    std::map<TrackedMoment, std::vector<double>> values;
};

ReferenceMoments equilibriumReference(const MixtureSpec& spec,
                                      const std::vector<double>& times);

/// Moment time series across N independently seeded ensembles.
struct EnsembleSeries {
    std::vector<double> times;
    std::vector<std::vector<MomentSet>> moments;  // [ensemble][time]
    std::vector<double> ensembleSeconds;
    RunStats totalStats;
};

/// Per-moment statistics on the grid. relError/halfWidth are empty where the
/// reference is missing or zero.
struct MomentStatistics {
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<std::optional<double>> relError;
    std::vector<std::optional<double>> halfWidth;
};

MomentStatistics computeStatistics(const EnsembleSeries& series,
                                   TrackedMoment moment,
                                   const ReferenceMoments* reference,
                                   double alphaLevel = 1e-3);

std::vector<double> uniformTimeGrid(double tEnd, std::size_t points);

/// Run the configured SWPM experiment: N ensembles with ensemble i seeded
/// seed xor splitmix(i), each advanced to tEnd with the reduction trigger at
/// reductionTriggerFactor*m0 and target reductionTargetFactor*m0. Results are
/// aggregated in ensemble-index order regardless of worker scheduling.
EnsembleSeries runExperiment(const ExperimentConfig& config);

/// Equal-weight DSMC reference: gamma_coll = min(gi,gj), no reduction.
EnsembleSeries runOracleExperiment(const ExperimentConfig& config);

}  // namespace swpm
