#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swpm/moments.hpp"
#include "swpm/particle.hpp"

namespace swpm {

/// One cluster of particle indices plus its moments and split priority
/// (total weight times the weighted standard deviation of speeds).
struct ParticleGroup {
    std::vector<std::size_t> indices;
    MomentSet moments;
    double splitCriterion = 0.0;
    std::size_t creationIndex = 0;  // tie-break for the greedy split order
};

/// Build a group over the given indices, computing moments and criterion.
ParticleGroup makeGroup(std::span<const Particle> particles,
                        std::vector<std::size_t> indices,
                        std::size_t creationIndex);

/// Unit eigenvector for the largest eigenvalue of the group velocity
/// covariance, sign fixed so the first nonzero component is positive.
/// Throws UnsplittableGroup when the covariance vanishes.
Vec3 principalDirection(const ParticleGroup& group,
                        std::span<const Particle> particles);

struct UnsplittableGroup : std::runtime_error {
    UnsplittableGroup() : std::runtime_error("group cannot be split") {}
};

/// Split by the cutting plane through the drift velocity, normal to the
/// principal covariance direction. Falls back to the weighted median of the
/// projections, then to the remaining eigenvectors, before giving up.
std::pair<ParticleGroup, ParticleGroup> bisectGroup(
    const ParticleGroup& group, std::span<const Particle> particles,
    std::size_t nextCreationIndex);

/// Greedy recursive bisection: always split the group with the largest
/// splitCriterion until targetGroups is reached or nothing splits.
std::vector<ParticleGroup> clusterSystem(const SystemState& state,
                                         std::size_t targetGroups);

}  // namespace swpm
