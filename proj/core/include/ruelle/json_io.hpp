#pragma once

// JSON ingestion and emission for the toolkit's file formats. Map files:
//   {"numerator": [[re,im],...], "denominator": [[re,im],...]}
// with coefficients in ascending degree order; bare reals are accepted in
// place of [re,im] pairs. Kernel combinations:
//   [{"kind":"gamma"|"tau","base":[re,im],"coeff":[re,im]},...]
// Report emitters return pretty-printed JSON text; infinite tail estimates
// are emitted as the string "inf".

#include <string>

#include "ruelle/stability.hpp"
#include "ruelle/suites.hpp"

namespace ruelle {

RationalMap map_from_json_text(const std::string& text);
RationalMap map_from_json_file(const std::string& path);
std::string map_to_json_text(const RationalMap& map);

KernelCombination combination_from_json_text(const std::string& text);
std::string combination_to_json_text(const KernelCombination& f);

std::string critical_data_to_json_text(const RationalMap& map,
                                       const CriticalData& cd);
std::string series_report_to_json_text(const SeriesReport& r);
std::string summability_to_json_text(const SummabilityReport& r);
std::string stability_to_json_text(const StabilityReport& r);
std::string linear_system_to_json_text(const LinearRelationSystem& s);
std::string suite_result_to_json_text(const SuiteResult& r);

// CLI scalar syntax: "re,im" or a bare real
cplx parse_complex(const std::string& s);
std::string format_complex(cplx v);

}  // namespace ruelle
