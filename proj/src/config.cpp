#include "swpm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace swpm {

std::size_t ExperimentConfig::resolvedEnsembles() const {
    if (ensembles > 0) return ensembles;
    if (m0 == 0) return 0;
    return std::max<std::size_t>(1, (particleBudget + m0 / 2) / m0);
}

void ExperimentConfig::validate() const {
    if (m0 == 0) throw ConfigError("m0 must be positive");
    if (resolvedEnsembles() == 0) throw ConfigError("N must be positive");
    if (!(tEnd >= 0.0)) throw ConfigError("tEnd must be nonnegative");
    if (timeGridPoints < 2) throw ConfigError("timeGridPoints must be at least 2");
    if (!(reductionTriggerFactor > 1.0))
        throw ConfigError("reductionTriggerFactor must exceed 1");
    if (!(reductionTargetFactor > 0.0 &&
          reductionTargetFactor < reductionTriggerFactor))
        throw ConfigError("reductionTargetFactor must be in (0, triggerFactor)");
    try {
        mixture.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (reference == ReferenceSource::oracleRun && referencePath.empty())
        throw ConfigError("reference=oracle requires referencePath");
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parseReal(const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        if (!std::isfinite(x)) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad real value '" +
                          value + "'");
    }
}

std::uint64_t parseUnsigned(const std::string& value, int line) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("line " + std::to_string(line) +
                          ": bad integer value '" + value + "'");
    return x;
}

Vec3 parseVec3(const std::string& value, int line) {
    Vec3 v{};
    std::stringstream ss(value);
    std::string item;
    int n = 0;
    bool extra = false;
    while (std::getline(ss, item, ',')) {
        if (n >= 3) {
            extra = true;
            break;
        }
        v[n++] = parseReal(trim(item), line);
    }
    if (n != 3 || extra)
        throw ConfigError("line " + std::to_string(line) +
                          ": expected 'x,y,z' triple, got '" + value + "'");
    return v;
}

ReductionScheme parseScheme(const std::string& value, int line) {
    if (value == "energy") return ReductionScheme::energy;
    if (value == "energy-chf") return ReductionScheme::energyCentralHeatFlux;
    if (value == "pthf") return ReductionScheme::pressureTensorCentralHeatFlux;
    throw ConfigError("line " + std::to_string(line) + ": unknown scheme '" +
                      value + "' (expected energy | energy-chf | pthf)");
}

}  // namespace

ExperimentConfig parseConfig(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream stream(text);
    std::string rawLine;
    int lineNo = 0;
    while (std::getline(stream, rawLine)) {
        ++lineNo;
        std::string line = rawLine;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineNo) +
                              ": expected key=value, got '" + rawLine + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "scheme") cfg.scheme = parseScheme(value, lineNo);
        else if (key == "m0") cfg.m0 = parseUnsigned(value, lineNo);
        else if (key == "N") cfg.ensembles = parseUnsigned(value, lineNo);
        else if (key == "tEnd") cfg.tEnd = parseReal(value, lineNo);
        else if (key == "timeGridPoints")
            cfg.timeGridPoints = parseUnsigned(value, lineNo);
        else if (key == "alpha") cfg.mixture.alpha = parseReal(value, lineNo);
        else if (key == "V1") cfg.mixture.v1 = parseVec3(value, lineNo);
        else if (key == "V2") cfg.mixture.v2 = parseVec3(value, lineNo);
        else if (key == "T1") cfg.mixture.t1 = parseReal(value, lineNo);
        else if (key == "T2") cfg.mixture.t2 = parseReal(value, lineNo);
        else if (key == "seed") cfg.seed = parseUnsigned(value, lineNo);
        else if (key == "reductionTriggerFactor")
            cfg.reductionTriggerFactor = parseReal(value, lineNo);
        else if (key == "reductionTargetFactor")
            cfg.reductionTargetFactor = parseReal(value, lineNo);
        else if (key == "outputPath") cfg.outputPath = value;
        else if (key == "workers") cfg.workerCount = parseUnsigned(value, lineNo);
        else if (key == "particleBudget")
            cfg.particleBudget = parseUnsigned(value, lineNo);
        else if (key == "reference") {
            if (value == "equilibrium")
                cfg.reference = ReferenceSource::equilibriumAnalytic;
            else if (value == "oracle") cfg.reference = ReferenceSource::oracleRun;
            else
                throw ConfigError("line " + std::to_string(lineNo) +
                                  ": unknown reference '" + value + "'");
        } else if (key == "referencePath") cfg.referencePath = value;
        else
            throw ConfigError("line " + std::to_string(lineNo) +
                              ": unknown key '" + key + "'");
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config invariant violated: ") + e.what());
    }
    return cfg;
}

ExperimentConfig loadConfigFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseConfig(buf.str());
}

std::string serializeConfig(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    auto vec = [&](const Vec3& v) {
        std::ostringstream s;
        s.precision(17);
        s << v[0] << "," << v[1] << "," << v[2];
        return s.str();
    };
    out << "scheme=" << schemeName(cfg.scheme) << "\n";
    out << "m0=" << cfg.m0 << "\n";
    out << "N=" << cfg.resolvedEnsembles() << "\n";
    out << "tEnd=" << cfg.tEnd << "\n";
    out << "timeGridPoints=" << cfg.timeGridPoints << "\n";
    out << "alpha=" << cfg.mixture.alpha << "\n";
    out << "V1=" << vec(cfg.mixture.v1) << "\n";
    out << "V2=" << vec(cfg.mixture.v2) << "\n";
    out << "T1=" << cfg.mixture.t1 << "\n";
    out << "T2=" << cfg.mixture.t2 << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "reductionTriggerFactor=" << cfg.reductionTriggerFactor << "\n";
    out << "reductionTargetFactor=" << cfg.reductionTargetFactor << "\n";
    if (!cfg.outputPath.empty()) out << "outputPath=" << cfg.outputPath << "\n";
    out << "workers=" << cfg.workerCount << "\n";
    out << "particleBudget=" << cfg.particleBudget << "\n";
    out << "reference="
        << (cfg.reference == ReferenceSource::oracleRun ? "oracle" : "equilibrium")
        << "\n";
    if (!cfg.referencePath.empty())
        out << "referencePath=" << cfg.referencePath << "\n";
    return out.str();
}

}  // namespace swpm
