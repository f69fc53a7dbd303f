// Command-line front end: run experiments, reproduce the reduction-error
// table, generate oracle reference curves, and self-check moment identities.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swpm/collision.hpp"
#include "swpm/csv.hpp"
#include "swpm/ensemble.hpp"
#include "swpm/reduction.hpp"

namespace {

using namespace swpm;

struct CommonOptions {
    std::string configPath;
    std::optional<std::uint64_t> seed;
    std::string outPath;
    std::optional<std::size_t> workers;
};

ExperimentConfig resolveConfig(const CommonOptions& opts,
                               bool requireConfig = true) {
    ExperimentConfig cfg;
    if (!opts.configPath.empty()) {
        cfg = loadConfigFile(opts.configPath);
    } else if (requireConfig) {
        throw ConfigError("missing --config");
    } else {
        cfg.m0 = 10240;
        cfg.ensembles = 1;
    }
    if (opts.seed) cfg.seed = *opts.seed;
    if (!opts.outPath.empty()) cfg.outputPath = opts.outPath;
    if (opts.workers) cfg.workerCount = *opts.workers;
    cfg.validate();
    return cfg;
}

void writeCsvTo(const ExperimentConfig& cfg, const EnsembleSeries& series,
                const ReferenceMoments* reference) {
    if (cfg.outputPath.empty() || cfg.outputPath == "-") {
        writeExperimentCsv(std::cout, cfg, series, reference);
        return;
    }
    std::ofstream out(cfg.outputPath);
    if (!out) throw std::runtime_error("cannot open output: " + cfg.outputPath);
    writeExperimentCsv(out, cfg, series, reference);
}

void printTiming(const EnsembleSeries& series) {
    std::fprintf(stderr,
                 "timing: collisions %.3fs, clustering+reduction %.3fs "
                 "(%llu events, %llu null, %llu reductions)\n",
                 series.totalStats.collisionSeconds,
                 series.totalStats.reductionSeconds,
                 static_cast<unsigned long long>(series.totalStats.events),
                 static_cast<unsigned long long>(series.totalStats.nullEvents),
                 static_cast<unsigned long long>(series.totalStats.reductions));
}

int cmdRun(const CommonOptions& opts) {
    ExperimentConfig cfg = resolveConfig(opts);
    ReferenceMoments reference;
    if (cfg.reference == ReferenceSource::oracleRun) {
        reference = loadReferenceCsv(cfg.referencePath);
        auto grid = uniformTimeGrid(cfg.tEnd, cfg.timeGridPoints);
        if (reference.times.size() != grid.size())
            throw std::runtime_error("reference CSV time grid does not match");
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (std::abs(reference.times[k] - grid[k]) > 1e-9)
                throw std::runtime_error("reference CSV time grid does not match");
    } else {
        reference = equilibriumReference(cfg.mixture,
                                         uniformTimeGrid(cfg.tEnd, cfg.timeGridPoints));
    }
    EnsembleSeries series = runExperiment(cfg);
    writeCsvTo(cfg, series, &reference);
    printTiming(series);
    return 0;
}

int cmdOracle(const CommonOptions& opts) {
    ExperimentConfig cfg = resolveConfig(opts);
    EnsembleSeries series = runOracleExperiment(cfg);
    writeCsvTo(cfg, series, nullptr);
    printTiming(series);
    return 0;
}

// Single-ensemble Maxwellian experiment behind the reduction-error table:
// max over the first ten reductions of the group-averaged relative error.
int cmdTableErrors(const CommonOptions& opts, std::size_t m0,
                   std::size_t reductionCount) {
    std::uint64_t seed = opts.seed.value_or(0);
    MixtureSpec maxwellian;
    maxwellian.alpha = 1.0;
    maxwellian.v1 = {0.0, 0.0, 0.0};
    maxwellian.t1 = 1.0;

    std::printf("%-12s %22s %22s\n", "scheme", "central-heat-flux", "raw-heat-flux");
    for (ReductionScheme scheme :
         {ReductionScheme::energy, ReductionScheme::energyCentralHeatFlux,
          ReductionScheme::pressureTensorCentralHeatFlux}) {
        RandomSource rng(seed);
        SystemState state = sampleInitialState(maxwellian, m0, rng);
        CollisionKernelSpec kernel;

        double maxQ = 0.0, maxH = 0.0;
        std::size_t reductions = 0;
        while (reductions < reductionCount) {
            advanceOneCollision(state, kernel, rng);
            if (state.count() >= 4 * m0) {
                auto report = reduceSystem(state, scheme, m0 / 4);
                if (report.meanCentralHeatFluxError)
                    maxQ = std::max(maxQ, *report.meanCentralHeatFluxError);
                if (report.meanRawHeatFluxError)
                    maxH = std::max(maxH, *report.meanRawHeatFluxError);
                ++reductions;
            }
        }
        std::printf("%-12s %22.6g %22.6g\n", schemeName(scheme), maxQ, maxH);
    }
    return 0;
}

int cmdEquilibrium(const CommonOptions& opts) {
    ExperimentConfig cfg = resolveConfig(opts, /*requireConfig=*/false);
    MomentSet eq = equilibriumMoments(cfg.mixture);
    std::printf("rho  = %.6f\n", eq.rho);
    std::printf("V    = (%.6f, %.6f, %.6f)\n", eq.driftVelocity[0],
                eq.driftVelocity[1], eq.driftVelocity[2]);
    std::printf("E    = %.6f\n", eq.energy);
    std::printf("T_eq = %.6f\n", eq.temperature);
    std::printf("Pi11 = %.6f\n", eq.momentumFlux(0, 0));
    std::printf("h    = (%.6f, %.6f, %.6f)\n", eq.rawHeatFlux[0], eq.rawHeatFlux[1],
                eq.rawHeatFlux[2]);
    std::printf("s_eq = %.6f\n", eq.fourthMoment);
    return 0;
}

int cmdValidate(const CommonOptions& opts) {
    ExperimentConfig cfg = resolveConfig(opts);
    RandomSource rng(cfg.seed);
    SystemState state = sampleInitialState(cfg.mixture, cfg.m0, rng);
    MomentSet m = computeMoments(state);

    bool ok = true;
    for (const auto& check : momentIdentityResiduals(m)) {
        bool pass = check.residual < 1e-12;
        ok = ok && pass;
        std::printf("%-45s residual %.3e  %s\n", check.name, check.residual,
                    pass ? "ok" : "FAILED");
    }
    double weightDrift = std::abs(state.totalWeight - 1.0);
    bool weightOk = weightDrift < 1e-12;
    ok = ok && weightOk;
    std::printf("%-45s residual %.3e  %s\n", "total weight = 1", weightDrift,
                weightOk ? "ok" : "FAILED");
    if (!ok) throw std::runtime_error("moment identity self-check failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted-particle Monte Carlo solver for the homogeneous "
                 "Boltzmann equation with moment-preserving particle reduction"};
    app.require_subcommand(1);

    CommonOptions opts;
    app.add_option("--config", opts.configPath, "key=value experiment config");
    app.add_option("--seed", opts.seed, "override the config seed");
    app.add_option("--out", opts.outPath, "override the config output path");
    app.add_option("--workers", opts.workers, "worker threads (0 = all)");

    auto* run = app.add_subcommand("run", "run the experiment and write CSV");
    auto* oracle = app.add_subcommand(
        "oracle", "equal-weight no-reduction DSMC reference run");
    auto* table = app.add_subcommand(
        "table-errors", "per-scheme max averaged heat-flux reduction errors");
    std::size_t tableM0 = 10240, tableReductions = 10;
    table->add_option("--m0", tableM0, "initial particle count");
    table->add_option("--reductions", tableReductions, "reductions to observe");
    auto* equilibrium =
        app.add_subcommand("equilibrium", "print the long-time moment limits");
    auto* validate = app.add_subcommand(
        "validate", "moment-identity self-check on the initial state");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmdRun(opts);
        if (oracle->parsed()) return cmdOracle(opts);
        if (table->parsed()) return cmdTableErrors(opts, tableM0, tableReductions);
        if (equilibrium->parsed()) return cmdEquilibrium(opts);
        if (validate->parsed()) return cmdValidate(opts);
    } catch (const swpm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
