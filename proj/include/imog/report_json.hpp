#ifndef IMOG_REPORT_JSON_HPP
#define IMOG_REPORT_JSON_HPP

// JSON shapes of the analysis results shared by the CLI (--format json) and
// the HTTP service. Decoders accept exactly what the encoders write.

#include <set>
#include <string>
#include <vector>

#include "imog/codec.hpp"
#include "imog/diagnostic.hpp"
#include "imog/fp_engine.hpp"
#include "imog/sp_engine.hpp"
#include "imog/trace_engine.hpp"

namespace imog::codec {

json encode(const Diagnostic& diagnostic);
Diagnostic decode_diagnostic(const json& value, const std::string& path);
json encode(const std::vector<Diagnostic>& diagnostics);
std::vector<Diagnostic> decode_diagnostics(const json& value, const std::string& path);

json encode_ids(const std::set<ElementId>& ids);
std::set<ElementId> decode_id_set(const json& value, const std::string& path);

json encode(const fp::Configuration& configuration);
fp::Configuration decode_configuration(const json& value, const std::string& path);
json encode(const fp::EnumerationResult& result);
fp::EnumerationResult decode_enumeration(const json& value, const std::string& path);
json encode(const fp::CountResult& result);
fp::CountResult decode_count(const json& value, const std::string& path);

/// {"Simple": "In", ...}
json encode(const fp::Decisions& decisions);
fp::Decisions decode_decisions(const json& value, const std::string& path);
json encode(const fp::PropagationResult& result);
fp::PropagationResult decode_propagation(const json& value, const std::string& path);

/// {"variantChoices": {"B": "V" | null}, "refinementChoices": {"G": "R"}}; both keys optional.
json encode(const sp::SelectionState& selection);
sp::SelectionState decode_selection(const json& value, const std::string& path);
json encode(const sp::EffectiveBlock& block);
sp::EffectiveBlock decode_effective_block(const json& value, const std::string& path);

json encode(const trace::TraceReport& report);
trace::TraceReport decode_trace_report(const json& value, const std::string& path);
json encode(const trace::Predicate& predicate);
trace::Predicate decode_predicate(const json& value, const std::string& path);

}  // namespace imog::codec

#endif  // IMOG_REPORT_JSON_HPP
