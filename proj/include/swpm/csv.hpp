#pragma once

#include <iosfwd>
#include <string>

#include "swpm/ensemble.hpp"

namespace swpm {

/// Long-format CSV: comment lines with the resolved config, then
/// time,moment,stat,value rows (17 significant digits; nan marks undefined
/// error/CI entries). Byte-identical for a fixed config and seed.
void writeExperimentCsv(std::ostream& out, const ExperimentConfig& config,
                        const EnsembleSeries& series,
                        const ReferenceMoments* reference);

/// Rebuild a reference curve from the mean rows of a CSV written by
/// writeExperimentCsv (typically an oracle run).
ReferenceMoments loadReferenceCsv(const std::string& path);

}  // namespace swpm
