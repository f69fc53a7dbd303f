#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "swpm/particle.hpp"
#include "test_support.hpp"

using namespace swpm;

TEST_SUITE_BEGIN("random");

TEST_CASE("identical seeds give identical sequences") {
    RandomSource a(1234567), b(1234567);
    for (int i = 0; i < 1000; ++i) CHECK(a.nextU64() == b.nextU64());
}

TEST_CASE("ensemble substreams differ from each other and the base stream") {
    RandomSource base(42);
    RandomSource s0 = RandomSource::forEnsemble(42, 0);
    RandomSource s1 = RandomSource::forEnsemble(42, 1);
    CHECK(s0.nextU64() != s1.nextU64());
    CHECK(base.nextU64() != RandomSource::forEnsemble(42, 0).nextU64());
    // Same index reproduces the same substream.
    RandomSource s1again = RandomSource::forEnsemble(42, 1);
    CHECK(s1again.nextU64() == RandomSource::forEnsemble(42, 1).nextU64());
}

TEST_CASE("unit sphere draws are unit vectors with uniform statistics") {
    RandomSource rng(7);
    const int n = 1000000;
    Vec3 mean{};
    double zz = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec3 u = rng.nextUnitSphere();
        CHECK(std::abs(norm(u) - 1.0) < 1e-12);
        mean += u;
        zz += u[2] * u[2];
    }
    double tol = 5.0 / std::sqrt(3.0 * n);
    for (int d = 0; d < 3; ++d) CHECK(std::abs(mean[d] / n) < tol);
    CHECK(zz / n == doctest::Approx(1.0 / 3.0).epsilon(0.015));
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("particle");

TEST_CASE("maxwellian sampler hits the requested mean and variance") {
    RandomSource rng(11);
    const int n = 1000000;
    Vec3 target{-2.0, 2.0, 0.0};
    Vec3 mean{};
    Vec3 var{};
    for (int i = 0; i < n; ++i) {
        Vec3 v = sampleMaxwellian(target, 1.0, rng);
        mean += v;
    }
    mean = (1.0 / n) * mean;
    RandomSource rng2(11);
    for (int i = 0; i < n; ++i) {
        Vec3 v = sampleMaxwellian(target, 1.0, rng2);
        Vec3 d = v - mean;
        var += Vec3{d[0] * d[0], d[1] * d[1], d[2] * d[2]};
    }
    double tol = 5.0 / std::sqrt(static_cast<double>(n));
    for (int d = 0; d < 3; ++d) {
        CHECK(std::abs(mean[d] - target[d]) < tol);
        CHECK(var[d] / n == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("maxwellian sampler degenerates to the drift for vanishing T") {
    RandomSource rng(3);
    Vec3 v = sampleMaxwellian({0, 0, 0}, 1e-30, rng);
    CHECK(norm(v) < 1e-10);
    CHECK_THROWS_AS(sampleMaxwellian({0, 0, 0}, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sampleMaxwellian({0, 0, 0}, -1.0, rng), std::invalid_argument);
}

TEST_CASE("initial state: normalized weight, mixture fractions, drift limit") {
    MixtureSpec spec;  // paper mixture defaults
    RandomSource rng(5);
    const std::size_t m0 = 10240 * 8;
    SystemState state = sampleInitialState(spec, m0, rng);
    CHECK(state.count() == m0);
    CHECK(state.time == 0.0);
    CHECK(state.totalWeight == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(state.maxWeight == doctest::Approx(1.0 / m0));

    Vec3 mean{};
    for (const auto& p : state.particles) mean += p.weight * p.velocity;
    // Drift -> alpha V1 + (1-alpha) V2 = (0,1,0); sd per component ~ sqrt(3)/sqrt(m0).
    double tol = 5.0 * std::sqrt(3.0 / static_cast<double>(m0));
    CHECK(std::abs(mean[0] - 0.0) < tol);
    CHECK(std::abs(mean[1] - 1.0) < tol);
    CHECK(std::abs(mean[2] - 0.0) < tol);
}

TEST_CASE("mixture component fraction matches alpha within binomial 5 sigma") {
    MixtureSpec spec;
    spec.alpha = 0.3;
    spec.v1 = {100.0, 0.0, 0.0};  // far-separated components are attributable
    spec.v2 = {-100.0, 0.0, 0.0};
    RandomSource rng(17);
    const std::size_t m0 = 100000;
    SystemState state = sampleInitialState(spec, m0, rng);
    std::size_t fromFirst = 0;
    for (const auto& p : state.particles)
        if (p.velocity[0] > 0.0) ++fromFirst;
    double frac = static_cast<double>(fromFirst) / m0;
    double sigma = std::sqrt(0.3 * 0.7 / m0);
    CHECK(std::abs(frac - 0.3) < 5.0 * sigma);
}

TEST_CASE("degenerate initial states") {
    RandomSource rng(1);
    MixtureSpec spec;

    SUBCASE("m0 = 1 gives a single unit-weight particle") {
        SystemState state = sampleInitialState(spec, 1, rng);
        REQUIRE(state.count() == 1);
        CHECK(state.particles[0].weight == 1.0);
    }
    SUBCASE("m0 = 0 is a parameter error") {
        CHECK_THROWS_AS(sampleInitialState(spec, 0, rng), std::invalid_argument);
    }
    SUBCASE("alpha = 1 draws only from component 1") {
        spec.alpha = 1.0;
        spec.v1 = {50.0, 0.0, 0.0};
        spec.t1 = 1e-6;
        SystemState state = sampleInitialState(spec, 100, rng);
        for (const auto& p : state.particles)
            CHECK(p.velocity[0] == doctest::Approx(50.0).epsilon(1e-3));
    }
}

TEST_CASE("sampling is bitwise reproducible for a fixed seed") {
    MixtureSpec spec;
    RandomSource r1(999), r2(999);
    SystemState a = sampleInitialState(spec, 1000, r1);
    SystemState b = sampleInitialState(spec, 1000, r2);
    for (std::size_t i = 0; i < a.count(); ++i) {
        CHECK(a.particles[i].velocity == b.particles[i].velocity);
        CHECK(a.particles[i].weight == b.particles[i].weight);
    }
}

TEST_SUITE_END();
