#include "swpm/reduction.hpp"

#include <cmath>
#include <stdexcept>

#include "swpm/clustering.hpp"
#include "swpm/eigen3.hpp"

namespace swpm {

const char* schemeName(ReductionScheme scheme) {
    switch (scheme) {
        case ReductionScheme::energy: return "energy";
        case ReductionScheme::energyCentralHeatFlux: return "energy-chf";
        case ReductionScheme::pressureTensorCentralHeatFlux: return "pthf";
    }
    return "?";
}

namespace {

void finishGroup(ReducedGroup& out) {
    out.reducedMoments = computeMoments(out.particles);
    out.rawHeatFluxError = relativeMomentError(out.sourceMoments, out.reducedMoments,
                                               MomentKind::RawHeatFlux);
    out.centralHeatFluxError = relativeMomentError(
        out.sourceMoments, out.reducedMoments, MomentKind::CentralHeatFlux);
}

/// Asymmetric pair along dir at offsets +g a and -a/g, a = sqrt(lambda/rho),
/// with weights rhoShare/(1+g^2) and rhoShare g^2/(1+g^2). Reproduces weight
/// rhoShare, mean drift, second central moment rhoShare lambda / rho and
/// central heat flux rhoShare q / rho along dir, with
/// g = b + sqrt(1+b^2), b = sqrt(rho) q / lambda^(3/2).
void emitPair(std::vector<Particle>& out, const Vec3& drift, const Vec3& dir,
              double rhoShare, double lambda, double q, double rho) {
    double lam32 = lambda * std::sqrt(lambda);
    double b = std::sqrt(rho) * q / lam32;
    double gamma = b + std::sqrt(1.0 + b * b);
    double alpha = std::sqrt(lambda / rho);
    out.push_back({drift + (gamma * alpha) * dir, rhoShare / (1.0 + gamma * gamma)});
    out.push_back({drift - (alpha / gamma) * dir,
                   rhoShare * gamma * gamma / (1.0 + gamma * gamma)});
}

}  // namespace

ReducedGroup reduceGroupPressureHeatFlux(const MomentSet& m) {
    if (!(m.rho > 0.0))
        throw std::invalid_argument("reduceGroupPressureHeatFlux: rho must be positive");

    ReducedGroup out;
    out.sourceMoments = m;

    auto eig = eigenSymmetric3(m.pressure);
    double zeroThreshold = 1e-12 * std::max(m.pressure.trace(), 1e-300);
    int k = 0;
    while (k < 3 && eig.values[k] > zeroThreshold) ++k;

    if (k == 0) {
        out.particles.push_back({m.driftVelocity, m.rho});
        finishGroup(out);
        return out;
    }

    for (int i = 0; i < k; ++i) {
        Vec3 dir = eig.vectors[i];
        double qHat = dot(dir, m.centralHeatFlux);
        if (qHat < 0.0) {
            dir = -dir;
            qHat = -qHat;
        }
        // Each pair carries rho/k of the weight with lambda scaled by k, so
        // the pair's second moment along dir is exactly eig.values[i]; the
        // heat-flux share scales by k for the same reason.
        emitPair(out.particles, m.driftVelocity, dir, m.rho / k,
                 k * eig.values[i], k * qHat, m.rho);
    }
    finishGroup(out);
    return out;
}

ReducedGroup reduceGroupEnergyHeatFlux(const MomentSet& m) {
    if (!(m.rho > 0.0))
        throw std::invalid_argument("reduceGroupEnergyHeatFlux: rho must be positive");

    ReducedGroup out;
    out.sourceMoments = m;

    double qNorm = norm(m.centralHeatFlux);
    if (!(m.temperature > 0.0)) {
        if (qNorm > 0.0)
            throw std::invalid_argument(
                "reduceGroupEnergyHeatFlux: nonzero heat flux with zero temperature");
        out.particles.push_back({m.driftVelocity, m.rho});
        finishGroup(out);
        return out;
    }

    Vec3 dir = qNorm > 0.0 ? (1.0 / qNorm) * m.centralHeatFlux : Vec3{1.0, 0.0, 0.0};
    // Single pair with lambda = 3 rho T = tr P: the full thermal energy sits
    // on the heat-flux axis.
    emitPair(out.particles, m.driftVelocity, dir, m.rho,
             3.0 * m.rho * m.temperature, qNorm, m.rho);
    finishGroup(out);
    return out;
}

ReducedGroup reduceGroupEnergy(const MomentSet& m) {
    if (!(m.rho > 0.0))
        throw std::invalid_argument("reduceGroupEnergy: rho must be positive");

    ReducedGroup out;
    out.sourceMoments = m;

    double qNorm = norm(m.centralHeatFlux);
    Vec3 dir;
    if (qNorm > 0.0) {
        dir = (1.0 / qNorm) * m.centralHeatFlux;
    } else {
        auto eig = eigenSymmetric3(m.pressure);
        dir = eig.values[0] > 0.0 ? eig.vectors[0] : Vec3{1.0, 0.0, 0.0};
    }
    double speed = std::sqrt(3.0 * std::max(0.0, m.temperature));
    out.particles.push_back({m.driftVelocity + speed * dir, 0.5 * m.rho});
    out.particles.push_back({m.driftVelocity - speed * dir, 0.5 * m.rho});
    finishGroup(out);
    return out;
}

ReducedGroup reduceGroup(const MomentSet& moments, ReductionScheme scheme) {
    switch (scheme) {
        case ReductionScheme::energy: return reduceGroupEnergy(moments);
        case ReductionScheme::energyCentralHeatFlux:
            return reduceGroupEnergyHeatFlux(moments);
        case ReductionScheme::pressureTensorCentralHeatFlux:
            return reduceGroupPressureHeatFlux(moments);
    }
    throw std::invalid_argument("reduceGroup: unknown scheme");
}

namespace {

std::size_t particlesPerGroup(ReductionScheme scheme) {
    return scheme == ReductionScheme::pressureTensorCentralHeatFlux ? 6 : 2;
}

void accumulateMean(const MomentSet& before, const MomentSet& after,
                    MomentKind kind, KahanSum& sum, std::size_t& n) {
    if (auto err = relativeMomentError(before, after, kind)) {
        sum.add(*err);
        ++n;
    }
}

}  // namespace

ReductionReport reduceSystem(SystemState& state, ReductionScheme scheme,
                             std::size_t targetCount) {
    if (state.count() < targetCount)
        throw std::invalid_argument("reduceSystem: fewer particles than target");

    std::size_t perGroup = particlesPerGroup(scheme);
    std::size_t targetGroups = (targetCount + perGroup - 1) / perGroup;
    auto groups = clusterSystem(state, targetGroups);

    ReductionReport report;
    report.particlesBefore = state.count();
    report.groupCount = groups.size();

    KahanSum hSum, qSum, pSum, eSum;
    std::size_t hN = 0, qN = 0, pN = 0, eN = 0;

    std::vector<Particle> rebuilt;
    rebuilt.reserve(targetGroups * perGroup);
    for (const auto& group : groups) {
        ReducedGroup reduced = reduceGroup(group.moments, scheme);
        if (reduced.particles.size() >= group.indices.size()) {
            // Reduction must never grow a group; keep the original particles.
            for (std::size_t idx : group.indices)
                rebuilt.push_back(state.particles[idx]);
            continue;
        }
        accumulateMean(reduced.sourceMoments, reduced.reducedMoments,
                       MomentKind::RawHeatFlux, hSum, hN);
        accumulateMean(reduced.sourceMoments, reduced.reducedMoments,
                       MomentKind::CentralHeatFlux, qSum, qN);
        accumulateMean(reduced.sourceMoments, reduced.reducedMoments,
                       MomentKind::Pressure, pSum, pN);
        accumulateMean(reduced.sourceMoments, reduced.reducedMoments,
                       MomentKind::Energy, eSum, eN);
        for (const auto& p : reduced.particles) rebuilt.push_back(p);
        report.groups.push_back(std::move(reduced));
    }

    if (hN) report.meanRawHeatFluxError = hSum.value() / hN;
    if (qN) report.meanCentralHeatFluxError = qSum.value() / qN;
    if (pN) report.meanPressureError = pSum.value() / pN;
    if (eN) report.meanEnergyError = eSum.value() / eN;

    state.particles = std::move(rebuilt);
    state.refreshCaches();
    report.particlesAfter = state.count();
    return report;
}

}  // namespace swpm
