#include "kgbell/serialize.hpp"

#include <cmath>
#include <stdexcept>

namespace kgbell {

std::string init_scheme_name(InitScheme scheme) {
    switch (scheme) {
        case InitScheme::paper_angles: return "paper";
        case InitScheme::indexed_angles: return "indexed";
        case InitScheme::seeded_random: return "random";
    }
    return "?";
}

InitScheme init_scheme_from_name(const std::string& name) {
    if (name == "paper") return InitScheme::paper_angles;
    if (name == "indexed") return InitScheme::indexed_angles;
    if (name == "random") return InitScheme::seeded_random;
    throw std::invalid_argument("unknown init scheme: " + name);
}

nlohmann::json config_to_json(const SeesawConfig& config) {
    return {{"d", config.d},
            {"max_iters", config.max_iters},
            {"value_tolerance", config.value_tolerance},
            {"init", init_scheme_name(config.init)},
            {"seed", config.seed},
            {"restarts", config.restarts},
            {"on_degenerate",
             config.on_degenerate == DegeneratePolicy::hold ? "hold" : "abort"}};
}

nlohmann::json seesaw_report_to_json(const BellInequality& ineq, const SeesawReport& report,
                                     bool include_assignment) {
    nlohmann::json j;
    j["label"] = ineq.label;
    j["config"] = config_to_json(report.config_used);
    j["value"] = report.value;
    auto lb = reference_local_bound(ineq);
    j["local_bound"] = lb ? nlohmann::json(*lb) : nlohmann::json(nullptr);
    j["ratio"] = std::isnan(report.ratio) ? nlohmann::json(nullptr) : nlohmann::json(report.ratio);
    j["kg_lower_bound"] = j["ratio"];
    j["visibility"] = !std::isnan(report.ratio) && report.ratio > 1.0
                          ? nlohmann::json(1.0 / report.ratio)
                          : nlohmann::json(nullptr);
    j["iterations_used"] = report.iterations_used;
    j["converged"] = report.converged;
    j["min_denominator"] = report.min_denominator;
    j["degenerate_rows"] = report.degenerate_rows;
    j["best_restart"] = report.best_restart;
    j["max_norm_error"] = report.assignment.max_norm_error();
    j["history"] = report.history;
    if (include_assignment) {
        auto fam = [](const std::vector<Eigen::VectorXd>& vs) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& v : vs) {
                nlohmann::json row = nlohmann::json::array();
                for (int k = 0; k < v.size(); ++k) row.push_back(v[k]);
                arr.push_back(std::move(row));
            }
            return arr;
        };
        j["assignment"] = {{"d", report.assignment.d},
                           {"alice", fam(report.assignment.alice)},
                           {"bob", fam(report.assignment.bob)}};
    }
    return j;
}

nlohmann::json certificate_to_json(const DualCertificate& cert) {
    nlohmann::json j;
    j["label"] = cert.label;
    j["lambda"] = std::vector<double>(cert.lambda.data(), cert.lambda.data() + cert.lambda.size());
    j["raw_min_eigenvalue"] = cert.raw_min_eigenvalue;
    j["shift"] = cert.shift;
    j["bound"] = cert.bound;
    j["residual_min_eigenvalue"] = cert.residual_min_eigenvalue;
    j["value_at_point"] = cert.value_at_point;
    j["gap"] = cert.gap;
    j["verified"] = cert.verified;
    return j;
}

nlohmann::json tightness_report_to_json(const TightnessReport& report) {
    return {{"label", report.label},
            {"local_bound", report.local_bound},
            {"saturating_count", report.saturating_count},
            {"ambient_dimension", report.ambient_dimension},
            {"rank", report.rank},
            {"tight", report.tight}};
}

nlohmann::json inclusion_evidence_to_json(const InclusionEvidence& evidence) {
    return {{"n", evidence.n},
            {"source_label", "I'(" + std::to_string(evidence.n) + "," +
                                 std::to_string(evidence.n) + ")"},
            {"residual_label", evidence.residual.label},
            {"target_label", evidence.target.label},
            {"constant_offset", evidence.constant_offset},
            {"coefficients_match", evidence.coefficients_match},
            {"source_bound", evidence.source_bound},
            {"target_bound", evidence.target_bound},
            {"bounds_consistent", evidence.bounds_consistent}};
}

} // namespace kgbell
