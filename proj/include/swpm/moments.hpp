#pragma once

#include <optional>
#include <span>
#include <vector>

#include "swpm/particle.hpp"
#include "swpm/vec3.hpp"

namespace swpm {

/// Raw and central velocity moments of a weighted particle collection.
struct MomentSet {
    double rho = 0.0;          // total weight
    Vec3 momentum{};           // rho * V
    Vec3 driftVelocity{};      // V
    Mat3 momentumFlux{};       // Pi = sum g v v^T
    Mat3 pressure{};           // P  = sum g (v-V)(v-V)^T
    double energy = 0.0;       // E  = sum g |v|^2
    double temperature = 0.0;  // 3 rho T = trace(P)
    Vec3 rawHeatFlux{};        // h = 1/2 sum g v |v|^2
    Vec3 centralHeatFlux{};    // q = 1/2 sum g (v-V) |v-V|^2
    double fourthMoment = 0.0; // s = sum g |v|^4
};

/// Which moment a relative-error query refers to.
enum class MomentKind {
    Rho,
    Momentum,
    MomentumFlux,
    Pressure,
    Energy,
    RawHeatFlux,
    CentralHeatFlux,
    FourthMoment,
};

/// Two-pass weighted moments with compensated summation. Requires at least
/// one particle and positive total weight.
MomentSet computeMoments(std::span<const Particle> particles);

inline MomentSet computeMoments(const SystemState& state) {
    return computeMoments(std::span<const Particle>(state.particles));
}

/// Combine group moments into system moments: raw moments are additive, the
/// central quantities are rebuilt from the aggregated raw moments.
MomentSet aggregateGroupMoments(std::span<const MomentSet> groups);

/// One inter-moment identity check: name plus relative residual.
struct MomentIdentityResidual {
    const char* name;
    double residual;
};

/// Residuals of the identities tying the fields of a MomentSet together:
/// E = rho|V|^2 + 3 rho T, P = Pi - rho V V^T, trace(P) = 3 rho T,
/// q = h - P V - rho V |V|^2 / 2 - 3 rho T V / 2, and positive
/// semi-definiteness of P (most negative eigenvalue over trace).
std::vector<MomentIdentityResidual> momentIdentityResiduals(const MomentSet& m);

/// ||after - before|| / ||before|| for the selected moment (Frobenius norm for
/// tensors, 2-norm for vectors, absolute value for scalars). Empty when the
/// reference norm is zero; callers exclude such entries from averages.
std::optional<double> relativeMomentError(const MomentSet& before,
                                          const MomentSet& after,
                                          MomentKind which);

}  // namespace swpm
