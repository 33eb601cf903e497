#pragma once

#include <string>
#include <vector>

#include "reslab/characters.hpp"
#include "reslab/experiments.hpp"
#include "reslab/resonator.hpp"
#include "reslab/smooth.hpp"

namespace reslab {

/// Bumped whenever a JSON field or CSV column changes meaning.
inline constexpr int kSchemaVersion = 1;

/// 12 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);

// Character sums: CSV columns char_index,re,im,abs. char_index is the flat
// (row-major) index over the component orders listed in the JSON form.
std::string profile_to_csv(const CharacterSumProfile& profile);
std::string profile_to_json(const CharacterSumProfile& profile);

std::string report_to_json(const ResonanceReport& report);

/// Experiment records. JSON wraps them as {"schema_version", "records"};
/// timings are left out unless requested so reruns compare byte for byte.
/// One record as a standalone JSON object carrying schema_version.
std::string record_to_json(const ExperimentRecord& record, bool include_timings = false);
std::string records_to_json(const std::vector<ExperimentRecord>& records, bool include_timings = false);
std::string records_to_csv(const std::vector<ExperimentRecord>& records);
/// The CSV header row, without newline.
std::string records_csv_header();

// Grid columns x,y,u,psi_exact,psi_estimate,ratio.
std::string psi_grid_to_csv(const std::vector<PsiGridRow>& rows);
std::string psi_grid_to_json(const std::vector<PsiGridRow>& rows);

std::string conjecture_to_json(const ConjectureTable& table);
std::string conjecture_to_csv(const ConjectureTable& table);

std::string levels_to_json(const LevelsTable& table);
std::string levels_to_csv(const LevelsTable& table);

}  // namespace reslab
