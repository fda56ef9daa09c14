#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qmlab/config.hpp"
#include "qmlab/report.hpp"

namespace qmlab {

// Execute the configured scenario(s). Fills the report with check records
// (tagged by acceptance criterion), CSV series, and notes. Does not touch
// the filesystem.
RunReport run(const ScenarioConfig& config);

// Render the standard plots from the report's series into `dir`; returns the
// file names written. Series that did not run are skipped.
std::vector<std::string> emit_plots(const RunReport& report, const std::string& dir);

// Write CSV tables, plots, the config echo, and notes under config.out_dir.
// Artifact paths are appended to the report.
void write_artifacts(RunReport& report, const ScenarioConfig& config);

// run + write_artifacts + a human summary on `out`. Returns the process
// exit code: 0 when every check passed, 1 otherwise.
int execute(const ScenarioConfig& config, std::ostream& out);

}  // namespace qmlab
