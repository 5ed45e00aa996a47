#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "attrinfer/policy.h"

namespace attrinfer {

enum class Template { kUniversity, kProjMgmt };
const char* ToString(Template t);
// Accepts "university" and "projmgmt" (case-insensitive). Throws ConfigError.
Template ParseTemplate(const std::string& name);

// Per-department counts for the university template.
struct UniversityParams {
  int faculty = 16;
  int students = 75;
  int min_courses_taught = 1;
  int max_courses_taught = 2;
  int min_courses_taken = 1;
  int max_courses_taken = 3;
};

// Per-department counts for the project-management template.
struct ProjMgmtParams {
  int projects = 6;
  int employees = 50;
  int contractors = 20;
  int tasks_per_project = 16;
  int min_projects_per_employee = 1;
  int max_projects_per_employee = 2;
  // Size of the global skill pool and of each contractor's skill set.
  int skills = 8;
  int min_contractor_skills = 2;
  int max_contractor_skills = 3;
};

struct GenSpec {
  Template tmpl = Template::kUniversity;
  // Number of departments.
  int scale = 1;
  uint64_t seed = 1;
  UniversityParams university;
  ProjMgmtParams projmgmt;

  // Throws ConfigError on non-positive counts or inverted ranges.
  void Validate() const;
};

struct GenNotes {
  size_t users = 0;
  size_t resources = 0;
  // Non-Null cells other than `id`: the cells eligible for removal.
  size_t attribute_cells = 0;
  size_t entitlements = 0;
  size_t rules = 0;
};

struct GeneratedPolicy {
  Policy policy;
  EntitlementSet entitlements;
  GenNotes notes;

  size_t objects() const { return notes.users + notes.resources; }
};

// Complete policy for `spec`, deterministic in the seed. Every rule grants at
// least one entitlement (InvariantFailure otherwise).
GeneratedPolicy Generate(const GenSpec& spec);

// Number of non-Null, non-`id` cells in the model.
size_t CountAttributeCells(const ObjectModel& om);

}  // namespace attrinfer
