#include "swpm/ensemble.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "swpm/reduction.hpp"

namespace swpm {

const char* trackedMomentName(TrackedMoment m) {
    switch (m) {
        case TrackedMoment::rho: return "rho";
        case TrackedMoment::energy: return "energy";
        case TrackedMoment::pi11: return "Pi11";
        case TrackedMoment::h2: return "h2";
        case TrackedMoment::s: return "s";
    }
    return "?";
}

double extractMoment(const MomentSet& set, TrackedMoment m) {
    switch (m) {
        case TrackedMoment::rho: return set.rho;
        case TrackedMoment::energy: return set.energy;
        case TrackedMoment::pi11: return set.momentumFlux(0, 0);
        case TrackedMoment::h2: return set.rawHeatFlux[1];
        case TrackedMoment::s: return set.fourthMoment;
    }
    return 0.0;
}

double normalQuantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normalQuantile: p must lie in (0,1)");

    // Acklam's rational approximation with one Halley refinement step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double pLow = 0.02425;

    double x;
    if (p < pLow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - pLow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

std::optional<double> relativeError(double reference, double mean) {
    if (reference == 0.0) return std::nullopt;
    return std::abs(reference - mean) / std::abs(reference);
}

double sampleVariance(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("sampleVariance: need at least two samples");
    KahanSum sum;
    for (double x : samples) sum.add(x);
    double mean = sum.value() / static_cast<double>(samples.size());
    KahanSum sq;
    for (double x : samples) sq.add((x - mean) * (x - mean));
    return sq.value() / static_cast<double>(samples.size() - 1);
}

double confidenceHalfWidth(std::span<const double> samples, double reference,
                           double alphaLevel) {
    if (reference == 0.0)
        throw std::invalid_argument("confidenceHalfWidth: zero reference");
    double z = normalQuantile(1.0 - 0.5 * alphaLevel);
    double var = sampleVariance(samples);
    return z * std::sqrt(var / static_cast<double>(samples.size())) /
           std::abs(reference);
}

MomentSet equilibriumMoments(const MixtureSpec& spec) {
    spec.validate();
    MomentSet m;
    double a = spec.alpha;
    m.rho = 1.0;
    m.driftVelocity = a * spec.v1 + (1.0 - a) * spec.v2;
    m.momentum = m.driftVelocity;
    m.energy = a * (normSq(spec.v1) + 3.0 * spec.t1) +
               (1.0 - a) * (normSq(spec.v2) + 3.0 * spec.t2);
    m.temperature = (m.energy - normSq(m.driftVelocity)) / 3.0;
    m.pressure = m.temperature * Mat3::identity();
    m.momentumFlux =
        Mat3::outer(1.0, m.driftVelocity) + m.temperature * Mat3::identity();
    double v2 = normSq(m.driftVelocity);
    m.rawHeatFlux = (0.5 * (v2 + 5.0 * m.temperature)) * m.driftVelocity;
    m.centralHeatFlux = Vec3{};
    // Gaussian identity: E|v|^4 = 15 T^2 + 10 T |V|^2 + |V|^4.
    m.fourthMoment =
        15.0 * m.temperature * m.temperature + 10.0 * m.temperature * v2 + v2 * v2;
    return m;
}

ReferenceMoments equilibriumReference(const MixtureSpec& spec,
                                      const std::vector<double>& times) {
    ReferenceMoments ref;
    ref.source = ReferenceSource::equilibriumAnalytic;
    ref.times = times;
    MomentSet eq = equilibriumMoments(spec);
    for (TrackedMoment m : kTrackedMoments)
        ref.values[m].assign(times.size(), extractMoment(eq, m));
    return ref;
}

std::vector<double> uniformTimeGrid(double tEnd, std::size_t points) {
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k)
        grid[k] = tEnd * static_cast<double>(k) / static_cast<double>(points - 1);
    return grid;
}

MomentStatistics computeStatistics(const EnsembleSeries& series,
                                   TrackedMoment moment,
                                   const ReferenceMoments* reference,
                                   double alphaLevel) {
    std::size_t nTimes = series.times.size();
    std::size_t nEns = series.moments.size();
    MomentStatistics stats;
    stats.mean.resize(nTimes);
    stats.variance.resize(nTimes, 0.0);
    stats.relError.resize(nTimes);
    stats.halfWidth.resize(nTimes);

    std::vector<double> samples(nEns);
    for (std::size_t k = 0; k < nTimes; ++k) {
        for (std::size_t i = 0; i < nEns; ++i)
            samples[i] = extractMoment(series.moments[i][k], moment);
        KahanSum sum;
        for (double x : samples) sum.add(x);
        stats.mean[k] = sum.value() / static_cast<double>(nEns);
        if (nEns >= 2) stats.variance[k] = sampleVariance(samples);

        if (reference) {
            auto it = reference->values.find(moment);
            if (it != reference->values.end() && k < it->second.size()) {
                double ref = it->second[k];
                stats.relError[k] = relativeError(ref, stats.mean[k]);
                if (ref != 0.0 && nEns >= 2)
                    stats.halfWidth[k] =
                        confidenceHalfWidth(samples, ref, alphaLevel);
            }
        }
    }
    return stats;
}

namespace {

EnsembleSeries runSeries(const ExperimentConfig& cfg, bool withReduction,
                         WeightTransferRule rule) {
    cfg.validate();
    std::size_t nEns = cfg.resolvedEnsembles();
    EnsembleSeries series;
    series.times = uniformTimeGrid(cfg.tEnd, cfg.timeGridPoints);
    series.moments.assign(nEns, std::vector<MomentSet>(series.times.size()));
    series.ensembleSeconds.assign(nEns, 0.0);

    std::size_t triggerCount = static_cast<std::size_t>(
        std::ceil(cfg.reductionTriggerFactor * static_cast<double>(cfg.m0)));
    std::size_t targetCount = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               cfg.reductionTargetFactor * static_cast<double>(cfg.m0))));

    std::mutex statsMutex;
    std::atomic<std::size_t> nextEnsemble{0};
    std::exception_ptr firstError;
    std::mutex errorMutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = nextEnsemble.fetch_add(1);
            if (i >= nEns) return;
            try {
                auto t0 = std::chrono::steady_clock::now();
                RandomSource rng = RandomSource::forEnsemble(cfg.seed, i);
                SystemState state = sampleInitialState(cfg.mixture, cfg.m0, rng);

                ReductionController reducer;
                if (withReduction) {
                    reducer.triggerCount = triggerCount;
                    reducer.reduce = [&](SystemState& s) {
                        reduceSystem(s, cfg.scheme, targetCount);
                    };
                }
                RunRecorder recorder;
                recorder.times = series.times;
                auto& row = series.moments[i];
                recorder.record = [&row](const SystemState& s, std::size_t k) {
                    row[k] = computeMoments(s);
                };

                CollisionKernelSpec kernel;
                RunStats stats =
                    runUntil(state, cfg.tEnd, kernel, rng, reducer, recorder, rule);

                series.ensembleSeconds[i] =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  t0)
                        .count();
                std::lock_guard lock(statsMutex);
                series.totalStats.events += stats.events;
                series.totalStats.nullEvents += stats.nullEvents;
                series.totalStats.reductions += stats.reductions;
                series.totalStats.collisionSeconds += stats.collisionSeconds;
                series.totalStats.reductionSeconds += stats.reductionSeconds;
            } catch (const std::exception& e) {
                std::lock_guard lock(errorMutex);
                if (!firstError)
                    firstError = std::make_exception_ptr(std::runtime_error(
                        "ensemble " + std::to_string(i) + " (seed " +
                        std::to_string(cfg.seed ^ splitmix64Once(i)) +
                        ") failed: " + e.what()));
                nextEnsemble.store(nEns);  // drain remaining work
                return;
            } catch (...) {
                std::lock_guard lock(errorMutex);
                if (!firstError) firstError = std::current_exception();
                nextEnsemble.store(nEns);
                return;
            }
        }
    };

    std::size_t nWorkers = cfg.workerCount > 0
                               ? cfg.workerCount
                               : std::max(1u, std::thread::hardware_concurrency());
    nWorkers = std::min(nWorkers, nEns);
    std::vector<std::thread> threads;
    threads.reserve(nWorkers);
    for (std::size_t w = 0; w < nWorkers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (firstError) std::rethrow_exception(firstError);
    return series;
}

}  // namespace

EnsembleSeries runExperiment(const ExperimentConfig& config) {
    return runSeries(config, /*withReduction=*/true, WeightTransferRule::halfMin);
}

EnsembleSeries runOracleExperiment(const ExperimentConfig& config) {
    return runSeries(config, /*withReduction=*/false, WeightTransferRule::fullMin);
}

}  // namespace swpm
