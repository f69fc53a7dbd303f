#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>

#include "swpm/particle.hpp"

namespace swpm {

/// Collision kernel B(v,w,Theta). Only the constant Maxwell-molecule kernel
/// 1/(4 pi) is implemented; the enum reserves the slot for others.
enum class CollisionKernelKind { constantMaxwell };

struct CollisionKernelSpec {
    CollisionKernelKind kind = CollisionKernelKind::constantMaxwell;
};

/// Weight transferred per collision. halfMin is the SWPM rule
/// gamma = min(gi,gj)/2; fullMin (gamma = min) gives Bird-style equal-weight
/// DSMC when all weights match, used by the no-reduction oracle.
enum class WeightTransferRule { halfMin, fullMin };

struct CollisionEvent {
    std::size_t i = 0;
    std::size_t j = 0;
    Vec3 theta{};
    double dt = 0.0;
    double gamma = 0.0;
    bool isNull = false;
};

/// Elastic post-collision velocities for scattering direction theta.
std::pair<Vec3, Vec3> postCollisionVelocities(const Vec3& v, const Vec3& w,
                                              const Vec3& theta);

/// gamma_coll = min(gi, gj)/2; weights must be positive.
double weightTransfer(double gi, double gj);

/// Apply a non-null event in place: shrink the colliding weights by gamma and
/// append two particles at the post-collision velocities. Particles whose
/// weight reaches exactly zero are removed (swap-and-pop).
void applyCollision(SystemState& state, const CollisionEvent& event);

/// Majorant collision frequency: every unordered pair bounded by the rate of
/// a pair of maxWeight particles. Exceeds the exact frequency
/// sum_{i<j} gi gj / gamma_coll whenever weights differ.
double majorantFrequency(const SystemState& state,
                         WeightTransferRule rule = WeightTransferRule::halfMin);

/// One event of the null-collision loop: sample the waiting time from the
/// majorant, advance the clock, pick a uniform pair, accept with probability
/// max(gi,gj)/maxWeight, and on acceptance scatter isotropically and apply
/// the collision. Rejected events advance time but change nothing.
CollisionEvent advanceOneCollision(
    SystemState& state, const CollisionKernelSpec& kernel, RandomSource& rng,
    WeightTransferRule rule = WeightTransferRule::halfMin);

/// Reduction trigger for runUntil. triggerCount = 0 disables; reduce must
/// bring the particle count back below the trigger and refresh the caches.
struct ReductionController {
    std::size_t triggerCount = 0;
    std::function<void(SystemState&)> reduce;
};

/// Moment-recording hook: record(state, k) is called once per grid time, with
/// the state the system held at times[k].
struct RunRecorder {
    std::span<const double> times;
    std::function<void(const SystemState&, std::size_t)> record;
};

struct RunStats {
    std::uint64_t events = 0;
    std::uint64_t nullEvents = 0;
    std::uint64_t reductions = 0;
    double collisionSeconds = 0.0;
    double reductionSeconds = 0.0;
};

/// Event loop until tEnd. The event whose waiting time crosses tEnd is
/// discarded and the clock clamps to tEnd.
RunStats runUntil(SystemState& state, double tEnd,
                  const CollisionKernelSpec& kernel, RandomSource& rng,
                  const ReductionController& reducer = {},
                  const RunRecorder& recorder = {},
                  WeightTransferRule rule = WeightTransferRule::halfMin);

}  // namespace swpm
