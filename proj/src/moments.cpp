#include "swpm/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "swpm/eigen3.hpp"

namespace swpm {

namespace {

struct Vec3Sum {
    KahanSum c[3];
    void add(const Vec3& v) {
        c[0].add(v[0]);
        c[1].add(v[1]);
        c[2].add(v[2]);
    }
    Vec3 value() const { return {c[0].value(), c[1].value(), c[2].value()}; }
};

struct Mat3Sum {
    KahanSum c[9];
    void addOuter(double g, const Vec3& v) {
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) c[3 * i + j].add(g * v[i] * v[j]);
    }
    Mat3 value() const {
        Mat3 m;
        for (std::size_t i = 0; i < 9; ++i) m.a[i] = c[i].value();
        return m;
    }
};

}  // namespace

MomentSet computeMoments(std::span<const Particle> particles) {
    if (particles.empty())
        throw std::invalid_argument("computeMoments: empty particle list");

    MomentSet m;

    KahanSum rho, energy, fourth;
    Vec3Sum momentum, rawHeat;
    Mat3Sum flux;
    for (const auto& p : particles) {
        double g = p.weight;
        double v2 = normSq(p.velocity);
        rho.add(g);
        momentum.add(g * p.velocity);
        flux.addOuter(g, p.velocity);
        energy.add(g * v2);
        rawHeat.add((0.5 * g * v2) * p.velocity);
        fourth.add(g * v2 * v2);
    }
    m.rho = rho.value();
    if (!(m.rho > 0.0))
        throw std::invalid_argument("computeMoments: total weight must be positive");
    m.momentum = momentum.value();
    m.driftVelocity = (1.0 / m.rho) * m.momentum;
    m.momentumFlux = flux.value();
    m.energy = energy.value();
    m.rawHeatFlux = rawHeat.value();
    m.fourthMoment = fourth.value();

    // Second pass for the central moments; subtracting raw moments loses
    // digits on drifting clouds.
    Mat3Sum press;
    Vec3Sum centralHeat;
    for (const auto& p : particles) {
        Vec3 c = p.velocity - m.driftVelocity;
        press.addOuter(p.weight, c);
        centralHeat.add((0.5 * p.weight * normSq(c)) * c);
    }
    m.pressure = press.value();
    m.centralHeatFlux = centralHeat.value();
    m.temperature = m.pressure.trace() / (3.0 * m.rho);
    return m;
}

MomentSet aggregateGroupMoments(std::span<const MomentSet> groups) {
    if (groups.empty())
        throw std::invalid_argument("aggregateGroupMoments: empty group list");

    MomentSet m;
    KahanSum rho, energy, fourth;
    Vec3Sum momentum, rawHeat;
    Mat3Sum flux;
    for (const auto& g : groups) {
        if (!(g.rho > 0.0))
            throw std::invalid_argument("aggregateGroupMoments: group with rho <= 0");
        rho.add(g.rho);
        momentum.add(g.momentum);
        energy.add(g.energy);
        fourth.add(g.fourthMoment);
        rawHeat.add(g.rawHeatFlux);
        for (std::size_t i = 0; i < 9; ++i) flux.c[i].add(g.momentumFlux.a[i]);
    }
    m.rho = rho.value();
    m.momentum = momentum.value();
    m.energy = energy.value();
    m.fourthMoment = fourth.value();
    m.rawHeatFlux = rawHeat.value();
    m.momentumFlux = flux.value();

    m.driftVelocity = (1.0 / m.rho) * m.momentum;
    m.pressure = m.momentumFlux - Mat3::outer(m.rho, m.driftVelocity);
    m.temperature = m.pressure.trace() / (3.0 * m.rho);
    const Vec3& v = m.driftVelocity;
    m.centralHeatFlux = m.rawHeatFlux - m.pressure * v -
                        (0.5 * m.rho * normSq(v)) * v -
                        (1.5 * m.rho * m.temperature) * v;
    return m;
}

std::vector<MomentIdentityResidual> momentIdentityResiduals(const MomentSet& m) {
    std::vector<MomentIdentityResidual> out;
    double scale3 = std::max(std::abs(m.energy), 1e-300);

    out.push_back({"energy = rho|V|^2 + 3 rho T",
                   std::abs(m.energy - m.rho * normSq(m.driftVelocity) -
                            3.0 * m.rho * m.temperature) /
                       scale3});

    Mat3 pFromRaw = m.momentumFlux - Mat3::outer(m.rho, m.driftVelocity);
    double fluxScale = std::max(m.momentumFlux.frobeniusNorm(), 1e-300);
    out.push_back(
        {"P = Pi - rho V V^T", (m.pressure - pFromRaw).frobeniusNorm() / fluxScale});

    out.push_back({"trace(P) = 3 rho T",
                   std::abs(m.pressure.trace() - 3.0 * m.rho * m.temperature) /
                       std::max(std::abs(m.pressure.trace()), 1e-300)});

    const Vec3& v = m.driftVelocity;
    Vec3 qFromRaw = m.rawHeatFlux - m.pressure * v - (0.5 * m.rho * normSq(v)) * v -
                    (1.5 * m.rho * m.temperature) * v;
    double thermalSpeed = std::sqrt(std::max(0.0, 3.0 * m.temperature));
    double heatScale = std::max({norm(m.rawHeatFlux),
                                 m.rho * thermalSpeed * thermalSpeed * thermalSpeed,
                                 1e-300});
    out.push_back({"q = h - P V - rho V |V|^2/2 - 3 rho T V / 2",
                   norm(m.centralHeatFlux - qFromRaw) / heatScale});

    auto eig = eigenSymmetric3(m.pressure);
    out.push_back({"P positive semi-definite",
                   std::max(0.0, -eig.values[2]) /
                       std::max(m.pressure.trace(), 1e-300)});
    return out;
}

namespace {

double momentNorm(const MomentSet& m, MomentKind which) {
    switch (which) {
        case MomentKind::Rho: return std::abs(m.rho);
        case MomentKind::Momentum: return norm(m.momentum);
        case MomentKind::MomentumFlux: return m.momentumFlux.frobeniusNorm();
        case MomentKind::Pressure: return m.pressure.frobeniusNorm();
        case MomentKind::Energy: return std::abs(m.energy);
        case MomentKind::RawHeatFlux: return norm(m.rawHeatFlux);
        case MomentKind::CentralHeatFlux: return norm(m.centralHeatFlux);
        case MomentKind::FourthMoment: return std::abs(m.fourthMoment);
    }
    return 0.0;
}

double momentDiffNorm(const MomentSet& a, const MomentSet& b, MomentKind which) {
    switch (which) {
        case MomentKind::Rho: return std::abs(a.rho - b.rho);
        case MomentKind::Momentum: return norm(a.momentum - b.momentum);
        case MomentKind::MomentumFlux:
            return (a.momentumFlux - b.momentumFlux).frobeniusNorm();
        case MomentKind::Pressure: return (a.pressure - b.pressure).frobeniusNorm();
        case MomentKind::Energy: return std::abs(a.energy - b.energy);
        case MomentKind::RawHeatFlux: return norm(a.rawHeatFlux - b.rawHeatFlux);
        case MomentKind::CentralHeatFlux:
            return norm(a.centralHeatFlux - b.centralHeatFlux);
        case MomentKind::FourthMoment:
            return std::abs(a.fourthMoment - b.fourthMoment);
    }
    return 0.0;
}

}  // namespace

std::optional<double> relativeMomentError(const MomentSet& before,
                                          const MomentSet& after,
                                          MomentKind which) {
    double ref = momentNorm(before, which);
    if (ref == 0.0) return std::nullopt;
    return momentDiffNorm(after, before, which) / ref;
}

}  // namespace swpm
