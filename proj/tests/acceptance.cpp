// Acceptance harness: one pass/fail line per criterion, exit code = number
// of failed criteria. Heavier statistical end-to-end checks than the unit
// suites; expected wall time is a few minutes on a desktop.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "swpm/clustering.hpp"
#include "swpm/collision.hpp"
#include "swpm/csv.hpp"
#include "swpm/ensemble.hpp"
#include "swpm/reduction.hpp"

using namespace swpm;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

MixtureSpec maxwellianSpec() {
    MixtureSpec spec;
    spec.alpha = 1.0;
    spec.v1 = {0.0, 0.0, 0.0};
    spec.t1 = 1.0;
    return spec;
}

struct TableErrors {
    double maxCentral = 0.0;
    double maxRaw = 0.0;
};

/// Single-ensemble grow/reduce cycle: collide to 4 m0, reduce to m0/4,
/// tracking the per-reduction group-averaged relative errors.
TableErrors tableErrors(ReductionScheme scheme, std::size_t m0, int reductions,
                        std::uint64_t seed) {
    RandomSource rng(seed);
    SystemState state = sampleInitialState(maxwellianSpec(), m0, rng);
    TableErrors out;
    for (int r = 0; r < reductions; ++r) {
        while (state.count() < 4 * m0) advanceOneCollision(state, {}, rng);
        ReductionReport rep = reduceSystem(state, scheme, m0 / 4);
        if (rep.meanCentralHeatFluxError)
            out.maxCentral = std::max(out.maxCentral, *rep.meanCentralHeatFluxError);
        if (rep.meanRawHeatFluxError)
            out.maxRaw = std::max(out.maxRaw, *rep.meanRawHeatFluxError);
    }
    return out;
}

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    TableErrors e = tableErrors(ReductionScheme::pressureTensorCentralHeatFlux,
                                10240, 10, 101);
    bool pass = e.maxCentral < 1e-12 && e.maxRaw < 1e-12;
    report(1, pass,
           "pthf max avg rel errors over 10 reductions (m0=10240): E(q)=" +
               fmt(e.maxCentral) + " E(h)=" + fmt(e.maxRaw) + " (< 1e-12), " +
               fmt(seconds(t0)) + " s");
}

void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    TableErrors energy = tableErrors(ReductionScheme::energy, 10240, 10, 102);
    TableErrors chf =
        tableErrors(ReductionScheme::energyCentralHeatFlux, 10240, 10, 103);
    bool energyPass = std::abs(energy.maxCentral - 1.0) < 1e-9;
    bool chfPass = chf.maxCentral < 1e-12 && chf.maxRaw >= 3e-3 && chf.maxRaw <= 6e-2;
    report(2, energyPass && chfPass,
           "energy E(q)=" + fmt(energy.maxCentral) +
               " (=1); energy-chf E(q)=" + fmt(chf.maxCentral) +
               " (<1e-12), E(h)=" + fmt(chf.maxRaw) + " (in [3e-3,6e-2]), " +
               fmt(seconds(t0)) + " s");
}

void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.scheme = ReductionScheme::pressureTensorCentralHeatFlux;
    cfg.m0 = 1024;
    cfg.ensembles = 1;
    cfg.tEnd = 3.0;
    cfg.timeGridPoints = 31;
    cfg.seed = 104;
    EnsembleSeries series = runExperiment(cfg);

    const auto& row = series.moments[0];
    double weightDrift = 0.0, momentumDrift = 0.0, energyDrift = 0.0;
    const MomentSet& first = row.front();
    for (const MomentSet& m : row) {
        weightDrift = std::max(weightDrift, std::abs(m.rho - first.rho) / first.rho);
        momentumDrift = std::max(
            momentumDrift,
            norm(m.momentum - first.momentum) / std::max(1.0, norm(first.momentum)));
        energyDrift = std::max(energyDrift,
                               std::abs(m.energy - first.energy) / first.energy);
    }
    bool pass = weightDrift < 1e-10 && momentumDrift < 1e-9 && energyDrift < 1e-9;
    report(3, pass,
           "full-run drift (m0=1024, t=3, pthf): weight=" + fmt(weightDrift) +
               " momentum=" + fmt(momentumDrift) + " energy=" + fmt(energyDrift) +
               ", " + fmt(seconds(t0)) + " s");
}

/// Exact fourth moment of the default mixture under the constant isotropic
/// kernel. The moment system closes: ds/dt = -s/3 + (2/3)E^2 - (1/3)|M|_F^2
/// with M(t) = P(t) + V V^T and P(t) = rho*T*I + (P0 - rho*T*I) e^{-t/2}.
/// Solving with s(0) = 115 for the default mixture gives the curve below;
/// it matches a reduction-free equal-weight oracle run to sampling accuracy.
double exactFourthMoment(double t) {
    return 403.0 / 3.0 - (8.0 / 3.0) * std::exp(-0.5 * t) +
           (25.0 / 3.0) * std::exp(-t) - 25.0 * std::exp(-t / 3.0);
}

/// E(s) and CI(s) at the last grid time against the exact mean curve.
std::pair<double, double> fourthMomentStats(ReductionScheme scheme,
                                            std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.m0 = 1024;
    cfg.ensembles = 200;
    cfg.tEnd = 3.0;
    cfg.timeGridPoints = 4;
    cfg.seed = seed;
    EnsembleSeries series = runExperiment(cfg);

    ReferenceMoments ref;
    ref.source = ReferenceSource::equilibriumAnalytic;
    ref.times = series.times;
    std::vector<double> sRef;
    for (double t : series.times) sRef.push_back(exactFourthMoment(t));
    ref.values[TrackedMoment::s] = std::move(sRef);

    MomentStatistics stats =
        computeStatistics(series, TrackedMoment::s, &ref, 1e-3);
    return {stats.relError.back().value(), stats.halfWidth.back().value()};
}

void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    int holds = 0;
    std::string details;
    for (int rep = 0; rep < 5; ++rep) {
        std::uint64_t base = 1000 + 10 * static_cast<std::uint64_t>(rep);
        auto [ePthf, ciPthf] = fourthMomentStats(
            ReductionScheme::pressureTensorCentralHeatFlux, base + 1);
        auto [eChf, ciChf] =
            fourthMomentStats(ReductionScheme::energyCentralHeatFlux, base + 2);

        bool ok = ePthf < ciPthf && eChf > ciChf;
        if (ok) ++holds;
        details += " rep" + std::to_string(rep) + "[pthf " + fmt(ePthf) + "<" +
                   fmt(ciPthf) + ", energy-chf " + fmt(eChf) + ">" +
                   fmt(ciChf) + (ok ? " ok]" : " no]");
    }
    // Informational: the plain energy scheme with the pinned pair direction
    // (along q) sits near the pthf bias and below CI; reported, not gated.
    auto [eEnergy, ciEnergy] = fourthMomentStats(ReductionScheme::energy, 1999);
    report(4, holds >= 4,
           "E(s) vs CI(s) ordering at t=3 (m0=1024, N=200) held in " +
               std::to_string(holds) + "/5 reps:" + details +
               "; energy scheme (info only): E=" + fmt(eEnergy) +
               " CI=" + fmt(ciEnergy) + ", " + fmt(seconds(t0)) + " s");
}

void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.scheme = ReductionScheme::pressureTensorCentralHeatFlux;
    cfg.m0 = 2048;
    cfg.ensembles = 100;
    cfg.tEnd = 12.0;
    cfg.timeGridPoints = 5;
    cfg.seed = 105;
    EnsembleSeries series = runExperiment(cfg);
    ReferenceMoments ref = equilibriumReference(cfg.mixture, series.times);

    auto pi = computeStatistics(series, TrackedMoment::pi11, &ref, 1e-3);
    auto s = computeStatistics(series, TrackedMoment::s, &ref, 1e-3);
    double ePi = pi.relError.back().value();
    double ciPi = pi.halfWidth.back().value();
    double eS = s.relError.back().value();
    double ciS = s.halfWidth.back().value();
    bool pass = ePi < 3.0 * ciPi && eS < 3.0 * ciS;
    report(5, pass,
           "equilibrium at t=12 (m0=2048, N=100): Pi11 E=" + fmt(ePi) +
               " vs 3CI=" + fmt(3.0 * ciPi) + "; s E=" + fmt(eS) +
               " vs 3CI=" + fmt(3.0 * ciS) + ", " + fmt(seconds(t0)) + " s");
}

void criterion6() {
    auto t0 = std::chrono::steady_clock::now();
    RandomSource rng(106);
    bool identitiesOk = true, chiOk = true, partitionOk = true, boundOk = true;

    // Moment identities on random clouds.
    for (int iter = 0; iter < 2000 && identitiesOk; ++iter) {
        std::vector<Particle> cloud(2 + rng.nextIndex(40));
        for (auto& p : cloud) {
            p.velocity = 2.0 * rng.nextNormal3();
            p.weight = std::pow(10.0, -4.0 * rng.nextDouble());
        }
        for (const auto& check : momentIdentityResiduals(computeMoments(cloud)))
            if (!(check.residual < 1e-12)) identitiesOk = false;
    }

    // Null-collision pair distribution vs the brute-force rates.
    {
        std::vector<Particle> base{{{1, 0, 0}, 0.6},
                                   {{0, 1, 0}, 0.3},
                                   {{0, 0, 1}, 0.1}};
        double rates[3] = {0.6, 0.6, 0.3};  // max per pair (0,1),(0,2),(1,2)
        double total = rates[0] + rates[1] + rates[2];
        std::int64_t counts[3] = {0, 0, 0};
        int accepted = 0;
        while (accepted < 30000) {
            SystemState state;
            state.particles = base;
            state.refreshCaches();
            CollisionEvent ev = advanceOneCollision(state, {}, rng);
            if (ev.isNull) continue;
            ++accepted;
            std::size_t lo = std::min(ev.i, ev.j), hi = std::max(ev.i, ev.j);
            counts[lo == 0 ? (hi == 1 ? 0 : 1) : 2]++;
        }
        double chi2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            double expect = accepted * rates[k] / total;
            chi2 += (counts[k] - expect) * (counts[k] - expect) / expect;
        }
        chiOk = chi2 < 27.6;  // df=2, p ~ 1e-6
    }

    // Clustering partition property.
    {
        MixtureSpec spec;
        SystemState state = sampleInitialState(spec, 2000, rng);
        for (std::size_t target : {1, 5, 32, 170}) {
            auto groups = clusterSystem(state, target);
            std::vector<char> hit(state.count(), 0);
            for (const auto& g : groups)
                for (std::size_t idx : g.indices) {
                    if (idx >= hit.size() || hit[idx]) partitionOk = false;
                    else hit[idx] = 1;
                }
            for (char h : hit)
                if (!h) partitionOk = false;
        }
    }

    // gamma >= 1 and the concentration bound on 1e4 random groups.
    for (int iter = 0; iter < 10000 && boundOk; ++iter) {
        std::vector<Particle> cloud(4 + rng.nextIndex(20));
        for (auto& p : cloud) {
            p.velocity = Vec3{rng.nextNormal(), 0.5, -1.0} + 1.5 * rng.nextNormal3();
            p.weight = std::pow(10.0, -4.0 * rng.nextDouble());
        }
        MomentSet m = computeMoments(cloud);
        ReducedGroup out = reduceGroupPressureHeatFlux(m);
        for (std::size_t pair = 0; pair + 1 < out.particles.size(); pair += 2) {
            // Pair layout: light particle first; gamma^2 = heavy/light >= 1.
            if (out.particles[pair + 1].weight <
                out.particles[pair].weight * (1.0 - 1e-12))
                boundOk = false;
        }
        double lhs = 0.0;
        for (const auto& p : out.particles)
            lhs += p.weight * norm(p.velocity - m.driftVelocity);
        if (lhs > m.rho * std::sqrt(3.0 * m.temperature) * (1.0 + 1e-12))
            boundOk = false;
    }

    bool pass = identitiesOk && chiOk && partitionOk && boundOk;
    report(6, pass,
           std::string("property families: identities ") +
               (identitiesOk ? "ok" : "FAIL") + ", pair chi-square " +
               (chiOk ? "ok" : "FAIL") + ", partition " +
               (partitionOk ? "ok" : "FAIL") + ", gamma/bound " +
               (boundOk ? "ok" : "FAIL") + ", " + fmt(seconds(t0)) + " s");
}

void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::size_t> grid{256, 1024, 4096, 10240};
    std::vector<double> perParticle;
    for (std::size_t m0 : grid) {
        ExperimentConfig cfg;
        cfg.scheme = ReductionScheme::pressureTensorCentralHeatFlux;
        cfg.m0 = m0;
        cfg.ensembles = 1;
        cfg.tEnd = 2.0;
        cfg.timeGridPoints = 2;
        cfg.seed = 107;
        cfg.workerCount = 1;
        runExperiment(cfg);  // warm caches/allocator before timing
        double best = 1e300;
        const int repeats = 3;
        for (int r = 0; r < repeats; ++r) {
            auto tr = std::chrono::steady_clock::now();
            runExperiment(cfg);
            best = std::min(best, seconds(tr));
        }
        perParticle.push_back(best / static_cast<double>(m0));
    }
    double lo = *std::min_element(perParticle.begin(), perParticle.end());
    double hi = *std::max_element(perParticle.begin(), perParticle.end());
    std::string detail = "seconds/m0 over {256,1024,4096,10240}:";
    for (double v : perParticle) detail += " " + fmt(v);
    bool pass = hi / lo <= 2.0;
    report(7, pass,
           detail + " (spread x" + fmt(hi / lo) + " <= 2), " + fmt(seconds(t0)) +
               " s");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::printf("%s (%d/7 criteria passed)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                7 - failures);
    return failures == 0 ? 0 : 1;
}
