#pragma once

#include <string>

#include <json.hpp>

#include "kgbell/bell.hpp"
#include "kgbell/certify.hpp"
#include "kgbell/polytope.hpp"
#include "kgbell/seesaw.hpp"

// Structured-text (JSON) views of the computed reports.  Every report embeds
// the inequality label; see-saw reports also echo their configuration and
// carry the derived Grothendieck lower bound and visibility threshold.

namespace kgbell {

std::string init_scheme_name(InitScheme scheme);
InitScheme init_scheme_from_name(const std::string& name);

nlohmann::json config_to_json(const SeesawConfig& config);

// include_assignment pulls the full vector families into the report
nlohmann::json seesaw_report_to_json(const BellInequality& ineq, const SeesawReport& report,
                                     bool include_assignment = false);

nlohmann::json certificate_to_json(const DualCertificate& cert);

nlohmann::json tightness_report_to_json(const TightnessReport& report);

nlohmann::json inclusion_evidence_to_json(const InclusionEvidence& evidence);

} // namespace kgbell
