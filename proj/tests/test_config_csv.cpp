#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swpm/csv.hpp"

using namespace swpm;

namespace {

std::string tempPath(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("parsing a full config") {
    ExperimentConfig cfg = parseConfig(
        "# experiment\n"
        "scheme = energy-chf\n"
        "m0 = 1024\n"
        "N = 500\n"
        "tEnd = 3\n"
        "timeGridPoints = 31\n"
        "alpha = 0.5\n"
        "V1 = -2, 2, 0\n"
        "V2 = 2, 0, 0\n"
        "T1 = 1\n"
        "T2 = 1\n"
        "seed = 12345\n"
        "reductionTriggerFactor = 4\n"
        "reductionTargetFactor = 0.25\n"
        "workers = 8\n");
    CHECK(cfg.scheme == ReductionScheme::energyCentralHeatFlux);
    CHECK(cfg.m0 == 1024);
    CHECK(cfg.ensembles == 500);
    CHECK(cfg.resolvedEnsembles() == 500);
    CHECK(cfg.tEnd == 3.0);
    CHECK(cfg.timeGridPoints == 31);
    CHECK(cfg.mixture.v1 == Vec3{-2, 2, 0});
    CHECK(cfg.mixture.v2 == Vec3{2, 0, 0});
    CHECK(cfg.seed == 12345);
    CHECK(cfg.workerCount == 8);
    CHECK(cfg.reference == ReferenceSource::equilibriumAnalytic);
}

TEST_CASE("defaults survive a minimal config") {
    ExperimentConfig cfg = parseConfig("m0=1024\n");
    CHECK(cfg.scheme == ReductionScheme::pressureTensorCentralHeatFlux);
    CHECK(cfg.tEnd == 3.0);
    CHECK(cfg.timeGridPoints == 31);
    CHECK(cfg.mixture.alpha == 0.5);
    CHECK(cfg.reductionTriggerFactor == 4.0);
    CHECK(cfg.reductionTargetFactor == 0.25);
    // N falls back to particleBudget / m0.
    CHECK(cfg.resolvedEnsembles() == 1000);
}

TEST_CASE("parse errors carry the line number") {
    auto expectError = [](const std::string& text, const std::string& needle) {
        try {
            parseConfig(text);
            FAIL("expected ConfigError for: " << text);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expectError("m0=1024\nbogus\n", "line 2");
    expectError("m0=1024\nmystery=1\n", "unknown key 'mystery'");
    expectError("m0=1024\nscheme=fancy\n", "unknown scheme");
    expectError("m0=abc\n", "bad integer");
    expectError("m0=1024\ntEnd=soon\n", "bad real");
    expectError("m0=1024\nV1=1,2\n", "triple");
    expectError("m0=1024\nV1=1,2,3,4\n", "triple");
    expectError("m0=1024\nreference=guess\n", "unknown reference");
}

TEST_CASE("invariant violations are rejected after parsing") {
    CHECK_THROWS_AS(parseConfig(""), ConfigError);  // m0 missing
    CHECK_THROWS_AS(parseConfig("m0=1024\ntimeGridPoints=1\n"), ConfigError);
    CHECK_THROWS_AS(parseConfig("m0=1024\nreductionTriggerFactor=0.5\n"),
                    ConfigError);
    CHECK_THROWS_AS(parseConfig("m0=1024\nreductionTargetFactor=9\n"),
                    ConfigError);
    CHECK_THROWS_AS(parseConfig("m0=1024\nalpha=1.5\n"), ConfigError);
    CHECK_THROWS_AS(parseConfig("m0=1024\nT1=-1\n"), ConfigError);
    CHECK_THROWS_AS(parseConfig("m0=1024\nreference=oracle\n"), ConfigError);
    CHECK_NOTHROW(
        parseConfig("m0=1024\nreference=oracle\nreferencePath=ref.csv\n"));
}

TEST_CASE("serialization round-trips") {
    ExperimentConfig cfg = parseConfig(
        "scheme=pthf\nm0=2048\nN=100\ntEnd=12\nseed=9\n"
        "alpha=0.25\nV1=0.5,-1,3\nworkers=3\n");
    ExperimentConfig again = parseConfig(serializeConfig(cfg));
    CHECK(again.scheme == cfg.scheme);
    CHECK(again.m0 == cfg.m0);
    CHECK(again.resolvedEnsembles() == cfg.resolvedEnsembles());
    CHECK(again.tEnd == cfg.tEnd);
    CHECK(again.mixture.alpha == cfg.mixture.alpha);
    CHECK(again.mixture.v1 == cfg.mixture.v1);
    CHECK(again.seed == cfg.seed);
    CHECK(again.workerCount == cfg.workerCount);
    CHECK(serializeConfig(again) == serializeConfig(cfg));
}

TEST_CASE("config file loading") {
    FileGuard guard{tempPath("swpm_test_config.txt")};
    {
        std::ofstream out(guard.path);
        out << "m0=256\nN=2\nseed=4\n";
    }
    ExperimentConfig cfg = loadConfigFile(guard.path);
    CHECK(cfg.m0 == 256);
    CHECK_THROWS_AS(loadConfigFile(tempPath("swpm_no_such_file.txt")),
                    ConfigError);
}

TEST_CASE("experiment CSV output") {
    ExperimentConfig cfg = parseConfig(
        "scheme=pthf\nm0=64\nN=3\ntEnd=1\ntimeGridPoints=3\nseed=5\nworkers=1\n");
    EnsembleSeries series = runExperiment(cfg);
    ReferenceMoments ref = equilibriumReference(cfg.mixture, series.times);

    std::ostringstream out;
    writeExperimentCsv(out, cfg, series, &ref);
    std::string text = out.str();

    SUBCASE("layout: config comments, header, one block per moment and stat") {
        CHECK(text.find("# scheme=pthf") != std::string::npos);
        CHECK(text.find("# m0=64") != std::string::npos);
        CHECK(text.find("time,moment,stat,value") != std::string::npos);
        std::size_t dataRows = 0;
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line))
            if (!line.empty() && line[0] != '#' && line[0] != 't') ++dataRows;
        // 5 moments x 3 times x 4 stats (mean, variance, E, CI).
        CHECK(dataRows == 5 * 3 * 4);
        CHECK(text.find(",rho,mean,") != std::string::npos);
        CHECK(text.find(",s,CI,") != std::string::npos);
    }
    SUBCASE("without a reference only mean and variance appear") {
        std::ostringstream bare;
        writeExperimentCsv(bare, cfg, series, nullptr);
        CHECK(bare.str().find(",E,") == std::string::npos);
        CHECK(bare.str().find(",CI,") == std::string::npos);
    }
    SUBCASE("output is byte-stable across identical runs") {
        EnsembleSeries series2 = runExperiment(cfg);
        std::ostringstream out2;
        writeExperimentCsv(out2, cfg, series2, &ref);
        CHECK(out2.str() == text);
    }
    SUBCASE("mean rows round-trip through the reference loader") {
        FileGuard guard{tempPath("swpm_test_ref.csv")};
        {
            std::ofstream file(guard.path);
            file << text;
        }
        ReferenceMoments loaded = loadReferenceCsv(guard.path);
        REQUIRE(loaded.times.size() == series.times.size());
        for (std::size_t k = 0; k < loaded.times.size(); ++k)
            CHECK(loaded.times[k] == doctest::Approx(series.times[k]));
        auto stats = computeStatistics(series, TrackedMoment::energy, nullptr);
        for (std::size_t k = 0; k < loaded.times.size(); ++k)
            CHECK(loaded.values.at(TrackedMoment::energy)[k] ==
                  doctest::Approx(stats.mean[k]).epsilon(1e-15));
        CHECK(loaded.source == ReferenceSource::oracleRun);
    }
    SUBCASE("undefined error entries are written as nan") {
        ReferenceMoments zeroRef = ref;
        zeroRef.values[TrackedMoment::h2].assign(series.times.size(), 0.0);
        std::ostringstream out3;
        writeExperimentCsv(out3, cfg, series, &zeroRef);
        CHECK(out3.str().find(",h2,E,nan") != std::string::npos);
    }
}

TEST_CASE("reference loader rejects unusable files") {
    CHECK_THROWS(loadReferenceCsv(tempPath("swpm_absent.csv")));
    FileGuard guard{tempPath("swpm_empty_ref.csv")};
    {
        std::ofstream file(guard.path);
        file << "time,moment,stat,value\n";
    }
    CHECK_THROWS(loadReferenceCsv(guard.path));
}

TEST_SUITE_END();
