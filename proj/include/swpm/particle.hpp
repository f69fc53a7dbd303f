#pragma once

#include <cstddef>
#include <vector>

#include "swpm/random.hpp"
#include "swpm/vec3.hpp"

namespace swpm {

/// A stochastic particle: velocity plus the fraction of physical particles it
/// represents.
struct Particle {
    Vec3 velocity{};
    double weight = 0.0;
};

/// The full stochastic system with cached aggregates. maxWeight is an upper
/// bound on every particle weight; it can exceed the true maximum after
/// collisions shrink weights and is recomputed exactly after each reduction.
struct SystemState {
    std::vector<Particle> particles;
    double totalWeight = 0.0;
    double maxWeight = 0.0;
    double time = 0.0;

    std::size_t count() const { return particles.size(); }

    /// Recompute totalWeight and maxWeight from scratch.
    void refreshCaches();
};

/// Two-component Maxwellian mixture: component 1 with probability alpha.
struct MixtureSpec {
    double alpha = 0.5;
    Vec3 v1{-2.0, 2.0, 0.0};
    Vec3 v2{2.0, 0.0, 0.0};
    double t1 = 1.0;
    double t2 = 1.0;

    void validate() const;
};

/// Draw from the Maxwellian with drift V and temperature T (unit mass).
Vec3 sampleMaxwellian(const Vec3& v, double t, RandomSource& rng);

/// m0 particles of weight 1/m0 drawn from the mixture; time = 0.
SystemState sampleInitialState(const MixtureSpec& spec, std::size_t m0,
                               RandomSource& rng);

}  // namespace swpm
