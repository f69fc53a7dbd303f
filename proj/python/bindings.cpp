#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "swpm/csv.hpp"
#include "swpm/ensemble.hpp"
#include "swpm/reduction.hpp"

namespace py = pybind11;
using namespace swpm;

namespace {

std::vector<Particle> toParticles(
    py::array_t<double, py::array::c_style | py::array::forcecast> velocities,
    py::array_t<double, py::array::c_style | py::array::forcecast> weights) {
    auto v = velocities.unchecked<2>();
    auto w = weights.unchecked<1>();
    if (v.shape(1) != 3) throw py::value_error("velocities must be (m, 3)");
    if (w.shape(0) != v.shape(0))
        throw py::value_error("weights must match the velocity count");
    std::vector<Particle> particles(static_cast<std::size_t>(v.shape(0)));
    for (py::ssize_t i = 0; i < v.shape(0); ++i) {
        particles[i].velocity = {v(i, 0), v(i, 1), v(i, 2)};
        particles[i].weight = w(i);
    }
    return particles;
}

py::tuple fromParticles(const std::vector<Particle>& particles) {
    py::array_t<double> velocities({static_cast<py::ssize_t>(particles.size()),
                                    py::ssize_t{3}});
    py::array_t<double> weights(
        py::array::ShapeContainer{static_cast<py::ssize_t>(particles.size())});
    auto v = velocities.mutable_unchecked<2>();
    auto w = weights.mutable_unchecked<1>();
    for (std::size_t i = 0; i < particles.size(); ++i) {
        for (int d = 0; d < 3; ++d) v(static_cast<py::ssize_t>(i), d) =
            particles[i].velocity[d];
        w(static_cast<py::ssize_t>(i)) = particles[i].weight;
    }
    return py::make_tuple(velocities, weights);
}

py::dict momentsToDict(const MomentSet& m) {
    py::dict d;
    d["rho"] = m.rho;
    d["momentum"] = py::make_tuple(m.momentum[0], m.momentum[1], m.momentum[2]);
    d["drift_velocity"] = py::make_tuple(m.driftVelocity[0], m.driftVelocity[1],
                                         m.driftVelocity[2]);
    py::array_t<double> pi({py::ssize_t{3}, py::ssize_t{3}});
    py::array_t<double> pr({py::ssize_t{3}, py::ssize_t{3}});
    auto piM = pi.mutable_unchecked<2>();
    auto prM = pr.mutable_unchecked<2>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            piM(i, j) = m.momentumFlux(i, j);
            prM(i, j) = m.pressure(i, j);
        }
    d["momentum_flux"] = pi;
    d["pressure"] = pr;
    d["energy"] = m.energy;
    d["temperature"] = m.temperature;
    d["raw_heat_flux"] =
        py::make_tuple(m.rawHeatFlux[0], m.rawHeatFlux[1], m.rawHeatFlux[2]);
    d["central_heat_flux"] = py::make_tuple(
        m.centralHeatFlux[0], m.centralHeatFlux[1], m.centralHeatFlux[2]);
    d["fourth_moment"] = m.fourthMoment;
    return d;
}

ReductionScheme schemeFromString(const std::string& name) {
    if (name == "energy") return ReductionScheme::energy;
    if (name == "energy-chf") return ReductionScheme::energyCentralHeatFlux;
    if (name == "pthf") return ReductionScheme::pressureTensorCentralHeatFlux;
    throw py::value_error("unknown scheme: " + name);
}

MixtureSpec mixtureFromArgs(double alpha, py::sequence v1, py::sequence v2,
                            double t1, double t2) {
    MixtureSpec spec;
    spec.alpha = alpha;
    for (int d = 0; d < 3; ++d) {
        spec.v1[d] = v1[d].cast<double>();
        spec.v2[d] = v2[d].cast<double>();
    }
    spec.t1 = t1;
    spec.t2 = t2;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_swpm, m) {
    m.doc() = "Weighted-particle Boltzmann solver with moment-preserving "
              "particle reduction";

    m.def(
        "sample_mixture",
        [](double alpha, py::sequence v1, py::sequence v2, double t1, double t2,
           std::size_t m0, std::uint64_t seed) {
            RandomSource rng(seed);
            SystemState state = sampleInitialState(
                mixtureFromArgs(alpha, v1, v2, t1, t2), m0, rng);
            return fromParticles(state.particles);
        },
        py::arg("alpha"), py::arg("v1"), py::arg("v2"), py::arg("t1"),
        py::arg("t2"), py::arg("m0"), py::arg("seed"),
        "Sample m0 equal-weight particles from a two-Maxwellian mixture; "
        "returns (velocities, weights).");

    m.def(
        "moments",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v,
           py::array_t<double, py::array::c_style | py::array::forcecast> w) {
            return momentsToDict(computeMoments(toParticles(v, w)));
        },
        py::arg("velocities"), py::arg("weights"),
        "All raw and central moments of a weighted particle cloud.");

    m.def(
        "reduce_group",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v,
           py::array_t<double, py::array::c_style | py::array::forcecast> w,
           const std::string& scheme) {
            auto particles = toParticles(v, w);
            auto reduced =
                reduceGroup(computeMoments(particles), schemeFromString(scheme));
            return fromParticles(reduced.particles);
        },
        py::arg("velocities"), py::arg("weights"), py::arg("scheme"),
        "Replace a particle group by the scheme's conserving particle set.");

    m.def(
        "simulate",
        [](const std::string& configText) {
            ExperimentConfig cfg = parseConfig(configText);
            EnsembleSeries series = runExperiment(cfg);
            py::dict out;
            out["times"] = series.times;
            py::dict perMoment;
            auto eq = equilibriumReference(
                cfg.mixture, uniformTimeGrid(cfg.tEnd, cfg.timeGridPoints));
            for (TrackedMoment tm : kTrackedMoments) {
                auto stats = computeStatistics(series, tm, &eq);
                py::dict entry;
                entry["mean"] = stats.mean;
                entry["variance"] = stats.variance;
                perMoment[trackedMomentName(tm)] = entry;
            }
            out["moments"] = perMoment;
            return out;
        },
        py::arg("config"),
        "Run the full ensemble experiment from a key=value config string.");

    m.def(
        "equilibrium",
        [](double alpha, py::sequence v1, py::sequence v2, double t1, double t2) {
            return momentsToDict(
                equilibriumMoments(mixtureFromArgs(alpha, v1, v2, t1, t2)));
        },
        py::arg("alpha"), py::arg("v1"), py::arg("v2"), py::arg("t1"),
        py::arg("t2"), "Long-time Maxwellian moment limits of the mixture.");

    m.def("normal_quantile", &normalQuantile, py::arg("p"));
}
