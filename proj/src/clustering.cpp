#include "swpm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "swpm/eigen3.hpp"

namespace swpm {

ParticleGroup makeGroup(std::span<const Particle> particles,
                        std::vector<std::size_t> indices,
                        std::size_t creationIndex) {
    ParticleGroup group;
    group.creationIndex = creationIndex;
    group.indices = std::move(indices);

    std::vector<Particle> members;
    members.reserve(group.indices.size());
    for (std::size_t idx : group.indices) members.push_back(particles[idx]);
    group.moments = computeMoments(members);

    // Priority: rho * weighted stddev of particle speeds.
    KahanSum speedSum;
    for (const auto& p : members) speedSum.add(p.weight * norm(p.velocity));
    double meanSpeed = speedSum.value() / group.moments.rho;
    KahanSum varSum;
    for (const auto& p : members) {
        double d = norm(p.velocity) - meanSpeed;
        varSum.add(p.weight * d * d);
    }
    double variance = std::max(0.0, varSum.value() / group.moments.rho);
    group.splitCriterion = group.moments.rho * std::sqrt(variance);
    return group;
}

namespace {

/// Spread below this is drift-computation roundoff, not structure.
double degenerateCovariance(const ParticleGroup& group, const Mat3& cov) {
    return 1e-24 * (normSq(group.moments.driftVelocity) + cov.trace());
}

}  // namespace

Vec3 principalDirection(const ParticleGroup& group,
                        std::span<const Particle> particles) {
    (void)particles;
    if (group.indices.size() < 2) throw UnsplittableGroup{};
    Mat3 cov = (1.0 / group.moments.rho) * group.moments.pressure;
    auto eig = eigenSymmetric3(cov);
    if (!(eig.values[0] > degenerateCovariance(group, cov)))
        throw UnsplittableGroup{};
    return eig.vectors[0];
}

std::pair<ParticleGroup, ParticleGroup> bisectGroup(
    const ParticleGroup& group, std::span<const Particle> particles,
    std::size_t nextCreationIndex) {
    if (group.indices.size() < 2) throw UnsplittableGroup{};

    const Vec3& drift = group.moments.driftVelocity;

    // Plane through the drift velocity; fall back to the weighted median of
    // the projections, then to the next eigenvector.
    auto trySplit = [&](const Vec3& dir)
        -> std::optional<std::pair<std::vector<std::size_t>,
                                   std::vector<std::size_t>>> {
        std::vector<double> proj(group.indices.size());
        for (std::size_t k = 0; k < group.indices.size(); ++k)
            proj[k] = dot(particles[group.indices[k]].velocity - drift, dir);

        auto splitAt = [&](double cut)
            -> std::optional<std::pair<std::vector<std::size_t>,
                                       std::vector<std::size_t>>> {
            std::vector<std::size_t> left, right;
            for (std::size_t k = 0; k < group.indices.size(); ++k) {
                (proj[k] <= cut ? left : right).push_back(group.indices[k]);
            }
            if (left.empty() || right.empty()) return std::nullopt;
            return std::make_pair(std::move(left), std::move(right));
        };

        if (auto split = splitAt(0.0)) return split;

        std::vector<std::size_t> order(group.indices.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return proj[a] < proj[b]; });
        double half = 0.5 * group.moments.rho;
        KahanSum acc;
        double median = proj[order.back()];
        for (std::size_t k : order) {
            acc.add(particles[group.indices[k]].weight);
            if (acc.value() >= half) {
                median = proj[k];
                break;
            }
        }
        return splitAt(median);
    };

    Mat3 cov = (1.0 / group.moments.rho) * group.moments.pressure;
    auto eig = eigenSymmetric3(cov);
    double floor = degenerateCovariance(group, cov);
    for (int axis = 0; axis < 3; ++axis) {
        if (!(eig.values[axis] > floor)) break;  // sorted descending
        if (auto split = trySplit(eig.vectors[axis])) {
            return {makeGroup(particles, std::move(split->first), nextCreationIndex),
                    makeGroup(particles, std::move(split->second),
                              nextCreationIndex + 1)};
        }
    }
    throw UnsplittableGroup{};
}

std::vector<ParticleGroup> clusterSystem(const SystemState& state,
                                         std::size_t targetGroups) {
    if (targetGroups == 0) targetGroups = 1;
    std::span<const Particle> particles(state.particles);

    std::vector<std::size_t> all(state.count());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<ParticleGroup> groups;
    groups.push_back(makeGroup(particles, std::move(all), 0));
    std::vector<bool> frozen{false};
    std::size_t creationCounter = 1;

    while (groups.size() < targetGroups) {
        std::size_t best = groups.size();
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (frozen[g] || groups[g].indices.size() < 2) continue;
            if (best == groups.size() ||
                groups[g].splitCriterion > groups[best].splitCriterion ||
                (groups[g].splitCriterion == groups[best].splitCriterion &&
                 groups[g].creationIndex < groups[best].creationIndex)) {
                best = g;
            }
        }
        if (best == groups.size()) break;

        try {
            auto [left, right] = bisectGroup(groups[best], particles, creationCounter);
            creationCounter += 2;
            groups[best] = std::move(left);
            groups.push_back(std::move(right));
            frozen.push_back(false);
        } catch (const UnsplittableGroup&) {
            frozen[best] = true;
        }
    }
    return groups;
}

}  // namespace swpm
