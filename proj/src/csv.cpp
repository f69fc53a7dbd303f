#include "swpm/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace swpm {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void writeExperimentCsv(std::ostream& out, const ExperimentConfig& config,
                        const EnsembleSeries& series,
                        const ReferenceMoments* reference) {
    // Self-describing header: the full resolved config as comments.
    std::istringstream cfgLines(serializeConfig(config));
    std::string line;
    while (std::getline(cfgLines, line)) out << "# " << line << "\n";
    out << "time,moment,stat,value\n";

    for (TrackedMoment m : kTrackedMoments) {
        MomentStatistics stats = computeStatistics(series, m, reference);
        const char* name = trackedMomentName(m);
        for (std::size_t k = 0; k < series.times.size(); ++k) {
            std::string t = fmt(series.times[k]);
            out << t << "," << name << ",mean," << fmt(stats.mean[k]) << "\n";
            out << t << "," << name << ",variance," << fmt(stats.variance[k])
                << "\n";
            if (reference) {
                out << t << "," << name << ",E,"
                    << (stats.relError[k] ? fmt(*stats.relError[k]) : "nan")
                    << "\n";
                out << t << "," << name << ",CI,"
                    << (stats.halfWidth[k] ? fmt(*stats.halfWidth[k]) : "nan")
                    << "\n";
            }
        }
    }
}

ReferenceMoments loadReferenceCsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference CSV: " + path);

    std::map<std::string, TrackedMoment> byName;
    for (TrackedMoment m : kTrackedMoments) byName[trackedMomentName(m)] = m;

    // time -> (moment -> mean); the map keeps times sorted.
    std::map<double, std::map<TrackedMoment, double>> rows;
    std::string line;
    bool sawHeader = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!sawHeader) {
            sawHeader = true;  // "time,moment,stat,value"
            continue;
        }
        std::stringstream ss(line);
        std::string tStr, name, stat, vStr;
        if (!std::getline(ss, tStr, ',') || !std::getline(ss, name, ',') ||
            !std::getline(ss, stat, ',') || !std::getline(ss, vStr))
            throw std::runtime_error("malformed CSV row: " + line);
        if (stat != "mean") continue;
        auto it = byName.find(name);
        if (it == byName.end()) continue;
        rows[std::stod(tStr)][it->second] = std::stod(vStr);
    }
    if (rows.empty())
        throw std::runtime_error("reference CSV has no mean rows: " + path);

    ReferenceMoments ref;
    ref.source = ReferenceSource::oracleRun;
    for (const auto& [t, vals] : rows) {
        ref.times.push_back(t);
        for (TrackedMoment m : kTrackedMoments) {
            auto it = vals.find(m);
            ref.values[m].push_back(it != vals.end()
                                        ? it->second
                                        : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return ref;
}

}  // namespace swpm
