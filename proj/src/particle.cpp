#include "swpm/particle.hpp"

#include <stdexcept>

namespace swpm {

void SystemState::refreshCaches() {
    KahanSum total;
    double maxw = 0.0;
    for (const auto& p : particles) {
        total.add(p.weight);
        if (p.weight > maxw) maxw = p.weight;
    }
    totalWeight = total.value();
    maxWeight = maxw;
}

void MixtureSpec::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("mixture alpha must be in [0,1]");
    if (!(t1 > 0.0) || !(t2 > 0.0))
        throw std::invalid_argument("mixture temperatures must be positive");
}

Vec3 sampleMaxwellian(const Vec3& v, double t, RandomSource& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
    double sigma = std::sqrt(t);
    Vec3 xi = rng.nextNormal3();
    return v + sigma * xi;
}

SystemState sampleInitialState(const MixtureSpec& spec, std::size_t m0,
                               RandomSource& rng) {
    spec.validate();
    if (m0 == 0) throw std::invalid_argument("m0 must be at least 1");

    SystemState state;
    state.particles.reserve(m0);
    double weight = 1.0 / static_cast<double>(m0);
    for (std::size_t i = 0; i < m0; ++i) {
        bool first = rng.nextDouble() < spec.alpha;
        Vec3 v = first ? sampleMaxwellian(spec.v1, spec.t1, rng)
                       : sampleMaxwellian(spec.v2, spec.t2, rng);
        state.particles.push_back({v, weight});
    }
    state.refreshCaches();
    state.time = 0.0;
    return state;
}

}  // namespace swpm
