#pragma once

#include <string>
#include <vector>

#include "experiments.hpp"
#include "quantum.hpp"
#include "readout.hpp"

namespace cim {

// Shortest round-trip decimal form, '.' separator, locale-independent.
std::string format_double(double v);

// Writes to a temp file in the same directory and renames into place, so an
// interrupted run leaves no partial artifact.
void write_file_atomic(const std::string& path, const std::string& content);

// Each writer emits one CSV (and JSON where noted) per report kind and
// returns the paths written. Data files never contain wall-clock values.
std::vector<std::string> write_campaign_reports(const CampaignStats& stats,
                                                const std::string& dir);
std::vector<std::string> write_survey_reports(const CubicSurveyResult& survey,
                                              const std::string& dir);
std::vector<std::string> write_gset_reports(const std::vector<GsetBenchRow>& rows,
                                            const std::string& dir);
std::vector<std::string> write_squeeze_reports(const std::vector<SqueezeRow>& rows,
                                               const std::string& dir);
std::vector<std::string> write_readout_table_report(const std::string& dir);
std::vector<std::string> write_independent_reports(const IndependentResult& result,
                                                   const std::string& dir);

std::string histogram_csv(const StateHistogram& hist);
std::string levels_csv(const std::map<double, double>& levels);

// Columns t, c_1..c_n, s_1..s_n.
std::string trajectory_csv(const std::vector<OpoNetworkState>& trajectory);

} // namespace cim
