#pragma once

#include <string>

#include "attrinfer/policy.h"

// Policy file (JSON):
//
//   {
//     "schema":    [{"name": "position", "kind": "single", "appliesTo": "user"}, ...],
//     "users":     [{"id": "csFac1", "attrs": {"position": "faculty",
//                                               "coursesTaught": {"missing": true},
//                                               "coursesTaken": null}}, ...],
//     "resources": [...],
//     "actions":   ["modify"],
//     "rules":     [{"uc": [["position", "in", ["faculty"]]],
//                    "rc": [["type", "in", ["gradebook"]]],
//                    "c":  [["coursesTaught", "contains", "course"]],
//                    "actions": ["modify"]}]
//   }
//
// Attribute values: string = atomic, array of strings = set, null = not
// applicable, {"missing": true} = unknown. Schema attributes omitted from
// `attrs` read as null. A declared `id` attribute defaults to the object id.
//
// Entitlement file (CSV): header `user,resource,action`, one triple per line.

namespace attrinfer {

Policy ParsePolicyJson(const std::string& text);
std::string PolicyToJson(const Policy& policy);

// When `model` is non-null every user/resource id must resolve in it.
EntitlementSet ParseEntitlementsCsv(const std::string& text, const ObjectModel* model = nullptr);
std::string EntitlementsToCsv(const EntitlementSet& entitlements);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace attrinfer
