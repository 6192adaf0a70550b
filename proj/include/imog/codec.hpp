#ifndef IMOG_CODEC_HPP
#define IMOG_CODEC_HPP

// JSON encoding of the domain types. Encoders never fail; decoders throw
// SchemaError carrying the path of the offending value and reject unknown
// object keys.

#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "imog/model.hpp"

namespace imog::codec {

using json = nlohmann::json;

/// Reads one JSON object, tracking which keys were consumed.
class ObjectReader {
public:
    ObjectReader(const json& value, std::string path);

    const std::string& path() const { return path_; }
    std::string path_of(std::string_view key) const;

    bool has(std::string_view key) const;
    const json& required(std::string_view key);
    const json* optional(std::string_view key);

    std::string string(std::string_view key);
    std::optional<std::string> optional_string(std::string_view key);
    std::vector<std::string> strings(std::string_view key);  // absent -> empty
    ElementId id(std::string_view key);
    std::optional<ElementId> optional_id(std::string_view key);
    std::vector<ElementId> ids(std::string_view key);  // absent -> empty
    std::int64_t integer(std::string_view key);
    std::optional<std::int64_t> optional_integer(std::string_view key);
    double number(std::string_view key);
    bool boolean(std::string_view key);
    /// Array under `key` (absent -> empty); returns (element, element path) pairs.
    std::vector<std::pair<const json*, std::string>> array(std::string_view key, bool required_key = false);

    /// Throws SchemaError for the first key that was never read.
    void finish() const;

private:
    const json& object_;
    std::string path_;
    std::set<std::string, std::less<>> used_;
};

[[noreturn]] void schema_fail(const std::string& path, const std::string& expected, const json& got);
std::string type_name(const json& value);

std::string as_string(const json& value, const std::string& path);
ElementId as_id(const json& value, const std::string& path);

json encode(const Scalar& value);
Scalar decode_scalar(const json& value, const std::string& path);

json encode(const AbstractionLevel& level);
AbstractionLevel decode_level(const json& value, const std::string& path);

json encode(const Property& property);
Property decode_property(const json& value, const std::string& path);
json encode_properties(const std::vector<Property>& properties);
std::vector<Property> decode_properties(ObjectReader& reader, std::string_view key);

json encode(const IdentifiableElement& element);
json encode(const StrategyDiv& div);
json encode(const FpBlock& block);
json encode(const FpRelation& relation);
json encode(const FpGroup& group);
json encode(const Requirement& requirement);
Requirement decode_requirement(const json& value, const std::string& path);
json encode(const SolutionSpaceDescription& sse);
SolutionSpaceDescription decode_sse(const json& value, const std::string& path);
json encode(const RefinementGroup& group);
RefinementGroup decode_refinement_group(const json& value, const std::string& path);
json encode(const SpBlockStereotype& stereotype);
SpBlockStereotype decode_sp_stereotype(const json& value, const std::string& path);
json encode(const SpRelation& relation);
json encode(const SpBlock& block);
SpBlock decode_sp_block(const json& value, const std::string& path, const std::optional<ElementId>& owner);
json encode(const DecompositionModel& model);
DecompositionModel decode_decomposition(const json& value, const std::string& path);
json encode(const KnowledgeEntry& entry);
json encode(const TraceLink& link);
TraceLink decode_trace_link(const json& value, const std::string& path, bool allow_constrains);

/// Whole-model encoding. Constrains links are not written; they are derived
/// from requirement targets on decode.
json encode(const Model& model);
Model decode_model(const json& value);

}  // namespace imog::codec

#endif  // IMOG_CODEC_HPP
