#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rebac_miner/model.hpp"
#include "rebac_miner/policy.hpp"
#include "rebac_miner/tvl.hpp"

namespace rebac_miner {

using nlohmann::json;

/// Reserved key marking an unknown field value.
inline constexpr std::string_view kUnknownKey = "$unknown";

// Every *_from_json throws SchemaError on malformed or inconsistent input.

json class_model_to_json(const ClassModel& cm);
std::shared_ptr<ClassModel> class_model_from_json(const json& j);

json object_model_to_json(const ObjectModel& om);
std::shared_ptr<ObjectModel> object_model_from_json(const json& j,
                                                    std::shared_ptr<const ClassModel> cm);

json policy_to_json(const Policy& p);
/// Rules are type-checked against the model's class model.
Policy policy_from_json(const json& j, std::shared_ptr<const ObjectModel> om);

/// Array of [subject, resource, action] triples.
json authorizations_to_json(const AclPolicy& acl);
/// Actions are those occurring in the triples plus `extra_actions`.
/// One triple per line.
std::string dump_authorizations(const AclPolicy& acl);
AclPolicy acl_from_json(const json& j, std::shared_ptr<const ObjectModel> om,
                        const std::set<std::string>& extra_actions = {});

/// Two-space indented with a trailing newline.
std::string dump(const json& j);
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::uint64_t h);

/// Header of feature labels plus "label"; cells are T, F or U. Fields
/// holding commas or quotes are quoted.
void write_dataset_csv(std::ostream& out, const LabeledDataset& ds);
/// Feature costs are read as 0. Throws SchemaError.
LabeledDataset read_dataset_csv(std::istream& in);

}  // namespace rebac_miner
