#include "swpm/collision.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace swpm {

std::pair<Vec3, Vec3> postCollisionVelocities(const Vec3& v, const Vec3& w,
                                              const Vec3& theta) {
    if (std::abs(norm(theta) - 1.0) > 1e-12)
        throw std::invalid_argument("postCollisionVelocities: theta not a unit vector");
    double rel = norm(w - v);
    Vec3 sum = v + w;
    Vec3 shift = rel * theta;
    return {0.5 * (sum - shift), 0.5 * (sum + shift)};
}

double weightTransfer(double gi, double gj) {
    if (!(gi > 0.0) || !(gj > 0.0))
        throw std::invalid_argument("weightTransfer: weights must be positive");
    return 0.5 * std::min(gi, gj);
}

void applyCollision(SystemState& state, const CollisionEvent& event) {
    if (event.isNull)
        throw std::invalid_argument("applyCollision: null event");
    auto& ps = state.particles;
    if (event.i >= ps.size() || event.j >= ps.size() || event.i == event.j)
        throw std::invalid_argument("applyCollision: bad particle indices");
    Particle& pi = ps[event.i];
    Particle& pj = ps[event.j];
    double minw = std::min(pi.weight, pj.weight);
    if (event.gamma > minw * (1.0 + 1e-12))
        throw std::invalid_argument("applyCollision: gamma exceeds min weight");

    auto [vp, wp] = postCollisionVelocities(pi.velocity, pj.velocity, event.theta);
    pi.weight -= event.gamma;
    pj.weight -= event.gamma;
    ps.push_back({vp, event.gamma});
    ps.push_back({wp, event.gamma});

    // Drop exactly-zeroed originals (happens for gamma = min, never for min/2).
    std::size_t hi = std::max(event.i, event.j);
    std::size_t lo = std::min(event.i, event.j);
    for (std::size_t idx : {hi, lo}) {
        if (ps[idx].weight == 0.0) {
            ps[idx] = ps.back();
            ps.pop_back();
        }
    }
}

double majorantFrequency(const SystemState& state, WeightTransferRule rule) {
    std::size_t m = state.count();
    if (m < 2)
        throw std::invalid_argument("majorantFrequency: need at least 2 particles");
    double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
    double pairBound = (rule == WeightTransferRule::halfMin ? 2.0 : 1.0) *
                       state.maxWeight;
    return pairs * pairBound;
}

CollisionEvent advanceOneCollision(SystemState& state,
                                   const CollisionKernelSpec& kernel,
                                   RandomSource& rng, WeightTransferRule rule) {
    (void)kernel;  // constant kernel: isotropic scattering, unit angular integral
    std::size_t m = state.count();
    double nuHat = majorantFrequency(state, rule);

    CollisionEvent event;
    event.dt = -std::log(rng.nextOpenDouble()) / nuHat;
    state.time += event.dt;

    event.i = rng.nextIndex(m);
    do {
        event.j = rng.nextIndex(m);
    } while (event.j == event.i);

    double gi = state.particles[event.i].weight;
    double gj = state.particles[event.j].weight;
    double accept = std::max(gi, gj) / state.maxWeight;
    if (rng.nextDouble() >= accept) {
        event.isNull = true;
        return event;
    }

    event.theta = rng.nextUnitSphere();
    event.gamma = (rule == WeightTransferRule::halfMin) ? 0.5 * std::min(gi, gj)
                                                        : std::min(gi, gj);
    applyCollision(state, event);
    return event;
}

RunStats runUntil(SystemState& state, double tEnd,
                  const CollisionKernelSpec& kernel, RandomSource& rng,
                  const ReductionController& reducer, const RunRecorder& recorder,
                  WeightTransferRule rule) {
    if (tEnd < state.time)
        throw std::invalid_argument("runUntil: tEnd before current time");

    RunStats stats;
    std::size_t nextRecord = 0;
    auto flushBefore = [&](double t) {
        while (nextRecord < recorder.times.size() && recorder.times[nextRecord] < t) {
            if (recorder.record) recorder.record(state, nextRecord);
            ++nextRecord;
        }
    };

    using Clock = std::chrono::steady_clock;
    auto tStart = Clock::now();
    while (state.count() >= 2) {
        double nuHat = majorantFrequency(state, rule);
        double dt = -std::log(rng.nextOpenDouble()) / nuHat;
        if (state.time + dt > tEnd) break;

        // The system is piecewise constant; grid times inside (prev, next)
        // see the pre-event state.
        flushBefore(state.time + dt);
        state.time += dt;

        std::size_t m = state.count();
        CollisionEvent event;
        event.i = rng.nextIndex(m);
        do {
            event.j = rng.nextIndex(m);
        } while (event.j == event.i);
        double gi = state.particles[event.i].weight;
        double gj = state.particles[event.j].weight;
        ++stats.events;
        if (rng.nextDouble() >= std::max(gi, gj) / state.maxWeight) {
            ++stats.nullEvents;
            continue;
        }
        event.theta = rng.nextUnitSphere();
        event.gamma = (rule == WeightTransferRule::halfMin)
                          ? 0.5 * std::min(gi, gj)
                          : std::min(gi, gj);
        applyCollision(state, event);

        if (reducer.triggerCount > 0 && reducer.reduce &&
            state.count() >= reducer.triggerCount) {
            auto tRed = Clock::now();
            stats.collisionSeconds +=
                std::chrono::duration<double>(tRed - tStart).count();
            reducer.reduce(state);
            ++stats.reductions;
            tStart = Clock::now();
            stats.reductionSeconds +=
                std::chrono::duration<double>(tStart - tRed).count();
        }
    }
    state.time = tEnd;
    // Remaining grid points (including one exactly at tEnd) see the final state.
    while (nextRecord < recorder.times.size()) {
        if (recorder.record) recorder.record(state, nextRecord);
        ++nextRecord;
    }
    stats.collisionSeconds +=
        std::chrono::duration<double>(Clock::now() - tStart).count();
    return stats;
}

}  // namespace swpm
