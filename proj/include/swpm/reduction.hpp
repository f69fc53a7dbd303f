#pragma once

#include <optional>
#include <vector>

#include "swpm/moments.hpp"
#include "swpm/particle.hpp"

namespace swpm {

/// The three deterministic reduction schemes. All conserve total weight,
/// momentum, and energy per group; the named moments come on top.
enum class ReductionScheme {
    energy,
    energyCentralHeatFlux,
    pressureTensorCentralHeatFlux,
};

const char* schemeName(ReductionScheme scheme);

/// Replacement particle set for one group, plus the before/after bookkeeping.
struct ReducedGroup {
    std::vector<Particle> particles;  // 1 to 6 entries
    MomentSet sourceMoments;
    MomentSet reducedMoments;
    std::optional<double> rawHeatFluxError;
    std::optional<double> centralHeatFluxError;
};

/// New scheme: conserves rho, momentum, the full pressure tensor (hence the
/// momentum flux tensor) and the central heat flux (hence the raw one).
/// Emits one particle pair per nonzero pressure eigenvalue.
ReducedGroup reduceGroupPressureHeatFlux(const MomentSet& moments);

/// Rjasanow-Wagner scheme conserving rho, momentum, energy, and central heat
/// flux: a single asymmetric pair along the heat-flux direction.
ReducedGroup reduceGroupEnergyHeatFlux(const MomentSet& moments);

/// Simplest scheme: an equal-weight pair at V +- sqrt(3T) e. Conserves rho,
/// momentum, energy; the post-reduction central heat flux is exactly zero.
ReducedGroup reduceGroupEnergy(const MomentSet& moments);

ReducedGroup reduceGroup(const MomentSet& moments, ReductionScheme scheme);

/// Per-reduction summary: group-averaged relative 2-norm errors for each
/// moment, plus the per-group details.
struct ReductionReport {
    std::size_t groupCount = 0;
    std::size_t particlesBefore = 0;
    std::size_t particlesAfter = 0;
    std::vector<ReducedGroup> groups;
    /// Averaged relative errors (zero-reference groups excluded).
    std::optional<double> meanRawHeatFluxError;
    std::optional<double> meanCentralHeatFluxError;
    std::optional<double> meanPressureError;
    std::optional<double> meanEnergyError;
};

/// Cluster the system and replace every group through the chosen scheme,
/// skipping groups the scheme would not shrink. Refreshes the weight caches.
ReductionReport reduceSystem(SystemState& state, ReductionScheme scheme,
                             std::size_t targetCount);

}  // namespace swpm
