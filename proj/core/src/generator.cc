#include "attrinfer/generator.h"

#include <algorithm>
#include <cctype>

#include "attrinfer/errors.h"
#include "attrinfer/random.h"

namespace attrinfer {

const char* ToString(Template t) {
  return t == Template::kUniversity ? "university" : "projmgmt";
}

Template ParseTemplate(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "university") return Template::kUniversity;
  if (lower == "projmgmt") return Template::kProjMgmt;
  throw ConfigError("unknown template '" + name + "' (expected university or projmgmt)");
}

namespace {

void RequirePositive(int v, const char* what) {
  if (v < 1) throw ConfigError(std::string(what) + " must be positive");
}

void RequireRange(int lo, int hi, const char* what) {
  if (lo < 1 || hi < lo) throw ConfigError(std::string(what) + " range must satisfy 1 <= min <= max");
}

const char* const kUniversityDepts[] = {"cs", "ee", "me", "ce", "ch", "ma", "ph", "bi"};
const char* const kProjMgmtDepts[] = {"rnd", "ops", "sales", "fin", "hr", "legal", "mkt", "it"};
const char* const kSkills[] = {"java", "sql", "ui", "ml", "qa", "devops", "docs", "security",
                               "cloud", "mobile", "data", "network"};

std::string DeptName(const char* const* names, size_t count, int index) {
  if (static_cast<size_t>(index) < count) return names[index];
  return "d" + std::to_string(index + 1);
}

std::string SkillName(int index) {
  constexpr int kCount = sizeof(kSkills) / sizeof(kSkills[0]);
  if (index < kCount) return kSkills[index];
  return "skill" + std::to_string(index + 1);
}

// Declares a schema attribute and adds it to `schema`.
void Declare(Schema& schema, Side side, const char* name, AttrKind kind) {
  schema.Add(AttrSchema{name, kind, side});
}

// Every generated object also carries one organization-wide attribute.
struct Org {
  const char* attr;
  const char* value;
};
constexpr Org kUniversityOrg{"university", "stateU"};
constexpr Org kProjMgmtOrg{"workspace", "acme"};

Object MakeObject(const std::string& id, const Org& org) {
  Object o;
  o.id = id;
  o.attrs["id"] = AttrValue::Atomic(id);
  o.attrs[org.attr] = AttrValue::Atomic(org.value);
  return o;
}

// University resources carry neither `id` nor the organization attribute.
Object MakeRecord(const std::string& id) {
  Object o;
  o.id = id;
  return o;
}

// Fills every declared attribute the object does not set with Null.
void FillNulls(const Schema& schema, Side side, std::vector<Object>& objects) {
  for (auto& o : objects) {
    for (const auto& a : schema.Attributes(side)) o.attrs.try_emplace(a.name, AttrValue::Null());
  }
}

ValueSet PickSubset(Rng& rng, const std::vector<std::string>& pool, int lo, int hi) {
  const int want = std::min<int>(rng.UniformInt(lo, hi), static_cast<int>(pool.size()));
  ValueSet out;
  for (size_t i : rng.Sample(pool.size(), static_cast<size_t>(want))) out.insert(pool[i]);
  return out;
}

Rule MakeRule(std::vector<AtomicCondition> uc, std::vector<AtomicCondition> rc,
              std::vector<AtomicConstraint> c, std::set<std::string> actions) {
  return Rule{std::move(uc), std::move(rc), std::move(c), std::move(actions)};
}

Policy University(const GenSpec& spec, Rng& rng) {
  const UniversityParams& p = spec.university;
  Schema schema;
  Declare(schema, Side::kUser, "id", AttrKind::kSingle);
  Declare(schema, Side::kUser, "position", AttrKind::kSingle);
  Declare(schema, Side::kUser, "department", AttrKind::kSingle);
  Declare(schema, Side::kUser, "coursesTaught", AttrKind::kMulti);
  Declare(schema, Side::kUser, "coursesTaken", AttrKind::kMulti);
  Declare(schema, Side::kUser, kUniversityOrg.attr, AttrKind::kSingle);
  Declare(schema, Side::kResource, "department", AttrKind::kSingle);
  Declare(schema, Side::kResource, "course", AttrKind::kSingle);
  Declare(schema, Side::kResource, "student", AttrKind::kSingle);
  Declare(schema, Side::kResource, "type", AttrKind::kSingle);

  std::vector<Object> users;
  std::vector<Object> resources;
  constexpr size_t kDeptCount = sizeof(kUniversityDepts) / sizeof(kUniversityDepts[0]);
  for (int d = 0; d < spec.scale; ++d) {
    const std::string dept = DeptName(kUniversityDepts, kDeptCount, d);
    std::vector<std::string> courses;
    int next_course = 101;
    for (int i = 1; i <= p.faculty; ++i) {
      Object f = MakeObject(dept + "Fac" + std::to_string(i), kUniversityOrg);
      f.attrs["position"] = AttrValue::Atomic("faculty");
      f.attrs["department"] = AttrValue::Atomic(dept);
      ValueSet taught;
      const int n = rng.UniformInt(p.min_courses_taught, p.max_courses_taught);
      for (int k = 0; k < n; ++k) {
        courses.push_back(dept + std::to_string(next_course++));
        taught.insert(courses.back());
      }
      f.attrs["coursesTaught"] = AttrValue::Set(std::move(taught));
      users.push_back(std::move(f));
    }
    for (const auto& course : courses) {
      Object gb = MakeRecord(course + "gb");
      gb.attrs["department"] = AttrValue::Atomic(dept);
      gb.attrs["course"] = AttrValue::Atomic(course);
      gb.attrs["type"] = AttrValue::Atomic("gradebook");
      resources.push_back(std::move(gb));
    }
    for (int i = 1; i <= p.students; ++i) {
      const std::string sid = dept + "Stu" + std::to_string(i);
      Object s = MakeObject(sid, kUniversityOrg);
      s.attrs["position"] = AttrValue::Atomic("student");
      s.attrs["department"] = AttrValue::Atomic(dept);
      s.attrs["coursesTaken"] =
          AttrValue::Set(PickSubset(rng, courses, p.min_courses_taken, p.max_courses_taken));
      users.push_back(std::move(s));

      Object t = MakeRecord(sid + "trans");
      t.attrs["department"] = AttrValue::Atomic(dept);
      t.attrs["student"] = AttrValue::Atomic(sid);
      t.attrs["type"] = AttrValue::Atomic("transcript");
      resources.push_back(std::move(t));
    }
  }
  FillNulls(schema, Side::kUser, users);
  FillNulls(schema, Side::kResource, resources);

  Policy policy;
  policy.model = ObjectModel(std::move(schema), std::move(users), std::move(resources));
  const auto faculty = AtomicCondition::In("position", {"faculty"});
  const auto student = AtomicCondition::In("position", {"student"});
  const auto gradebook = AtomicCondition::In("type", {"gradebook"});
  const auto transcript = AtomicCondition::In("type", {"transcript"});
  const AtomicConstraint same_dept{"department", ConsOp::kEqual, "department"};
  policy.rules = {
      MakeRule({faculty}, {gradebook}, {{"coursesTaught", ConsOp::kContains, "course"}},
               {"modify"}),
      MakeRule({faculty}, {gradebook}, {same_dept}, {"read"}),
      MakeRule({student}, {gradebook}, {{"coursesTaken", ConsOp::kContains, "course"}},
               {"readScore"}),
      MakeRule({student}, {gradebook}, {same_dept}, {"view"}),
      MakeRule({student}, {transcript}, {{"id", ConsOp::kEqual, "student"}}, {"read"}),
      MakeRule({faculty}, {transcript}, {same_dept}, {"read"}),
  };
  return policy;
}

Policy ProjMgmt(const GenSpec& spec, Rng& rng) {
  const ProjMgmtParams& p = spec.projmgmt;
  Schema schema;
  Declare(schema, Side::kUser, "id", AttrKind::kSingle);
  Declare(schema, Side::kUser, "position", AttrKind::kSingle);
  Declare(schema, Side::kUser, "department", AttrKind::kSingle);
  Declare(schema, Side::kUser, "projectsLed", AttrKind::kMulti);
  Declare(schema, Side::kUser, "projects", AttrKind::kMulti);
  Declare(schema, Side::kUser, "expertise", AttrKind::kMulti);
  Declare(schema, Side::kUser, kProjMgmtOrg.attr, AttrKind::kSingle);
  Declare(schema, Side::kResource, "id", AttrKind::kSingle);
  Declare(schema, Side::kResource, "department", AttrKind::kSingle);
  Declare(schema, Side::kResource, "project", AttrKind::kSingle);
  Declare(schema, Side::kResource, "expertise", AttrKind::kSingle);
  Declare(schema, Side::kResource, "type", AttrKind::kSingle);

  std::vector<std::string> skills;
  for (int i = 0; i < p.skills; ++i) skills.push_back(SkillName(i));

  Declare(schema, Side::kResource, kProjMgmtOrg.attr, AttrKind::kSingle);

  std::vector<Object> users;
  std::vector<Object> resources;
  constexpr size_t kDeptCount = sizeof(kProjMgmtDepts) / sizeof(kProjMgmtDepts[0]);
  for (int d = 0; d < spec.scale; ++d) {
    const std::string dept = DeptName(kProjMgmtDepts, kDeptCount, d);
    std::vector<std::string> projects;
    std::vector<std::vector<std::string>> task_skills(p.projects);
    for (int j = 1; j <= p.projects; ++j) {
      const std::string proj = dept + "P" + std::to_string(j);
      projects.push_back(proj);

      Object lead = MakeObject(dept + "Lead" + std::to_string(j), kProjMgmtOrg);
      lead.attrs["position"] = AttrValue::Atomic("leader");
      lead.attrs["department"] = AttrValue::Atomic(dept);
      lead.attrs["projectsLed"] = AttrValue::Set({proj});
      users.push_back(std::move(lead));

      for (const char* kind : {"budget", "schedule"}) {
        Object r = MakeObject(proj + kind, kProjMgmtOrg);
        r.attrs["department"] = AttrValue::Atomic(dept);
        r.attrs["project"] = AttrValue::Atomic(proj);
        r.attrs["type"] = AttrValue::Atomic(kind);
        resources.push_back(std::move(r));
      }
      for (int t = 1; t <= p.tasks_per_project; ++t) {
        Object task = MakeObject(proj + "task" + std::to_string(t), kProjMgmtOrg);
        const std::string& skill = skills[rng.UniformIndex(skills.size())];
        task.attrs["project"] = AttrValue::Atomic(proj);
        task.attrs["expertise"] = AttrValue::Atomic(skill);
        task.attrs["type"] = AttrValue::Atomic("task");
        task_skills[j - 1].push_back(skill);
        resources.push_back(std::move(task));
      }
    }
    for (int i = 1; i <= p.employees; ++i) {
      Object e = MakeObject(dept + "Emp" + std::to_string(i), kProjMgmtOrg);
      e.attrs["position"] = AttrValue::Atomic("employee");
      e.attrs["department"] = AttrValue::Atomic(dept);
      e.attrs["projects"] = AttrValue::Set(
          PickSubset(rng, projects, p.min_projects_per_employee, p.max_projects_per_employee));
      users.push_back(std::move(e));
    }
    for (int i = 1; i <= p.contractors; ++i) {
      // Seed each contractor with the skill of one task so that it works on
      // at least one, then pad from the global pool.
      const auto& pool = task_skills[rng.UniformIndex(task_skills.size())];
      ValueSet expertise{pool[rng.UniformIndex(pool.size())]};
      const int want = rng.UniformInt(p.min_contractor_skills, p.max_contractor_skills);
      while (static_cast<int>(expertise.size()) < std::min(want, p.skills))  {
        expertise.insert(skills[rng.UniformIndex(skills.size())]);
      }
      Object c = MakeObject(dept + "Ctr" + std::to_string(i), kProjMgmtOrg);
      c.attrs["position"] = AttrValue::Atomic("contractor");
      c.attrs["expertise"] = AttrValue::Set(std::move(expertise));
      users.push_back(std::move(c));
    }
  }
  FillNulls(schema, Side::kUser, users);
  FillNulls(schema, Side::kResource, resources);

  Policy policy;
  policy.model = ObjectModel(std::move(schema), std::move(users), std::move(resources));
  const auto leader = AtomicCondition::In("position", {"leader"});
  const auto employee = AtomicCondition::In("position", {"employee"});
  const auto contractor = AtomicCondition::In("position", {"contractor"});
  const auto plan = AtomicCondition::In("type", {"budget", "schedule"});
  const auto task = AtomicCondition::In("type", {"task"});
  policy.rules = {
      MakeRule({leader}, {plan}, {{"projectsLed", ConsOp::kContains, "project"}}, {"modify"}),
      MakeRule({employee}, {plan}, {{"projects", ConsOp::kContains, "project"}}, {"read"}),
      MakeRule({employee}, {task}, {{"projects", ConsOp::kContains, "project"}}, {"update"}),
      MakeRule({contractor}, {task}, {{"expertise", ConsOp::kContains, "expertise"}}, {"update"}),
      MakeRule({AtomicCondition::In("position", {"employee", "leader"})}, {plan},
               {{"department", ConsOp::kEqual, "department"}}, {"view"}),
  };
  return policy;
}

}  // namespace

void GenSpec::Validate() const {
  RequirePositive(scale, "scale");
  const auto& u = university;
  RequirePositive(u.faculty, "faculty per department");
  RequirePositive(u.students, "students per department");
  RequireRange(u.min_courses_taught, u.max_courses_taught, "courses taught");
  RequireRange(u.min_courses_taken, u.max_courses_taken, "courses taken");
  const auto& m = projmgmt;
  RequirePositive(m.projects, "projects per department");
  RequirePositive(m.employees, "employees per department");
  RequirePositive(m.contractors, "contractors per department");
  RequirePositive(m.tasks_per_project, "tasks per project");
  RequirePositive(m.skills, "skill pool size");
  RequireRange(m.min_projects_per_employee, m.max_projects_per_employee, "projects per employee");
  RequireRange(m.min_contractor_skills, m.max_contractor_skills, "contractor skills");
}

size_t CountAttributeCells(const ObjectModel& om) {
  size_t n = 0;
  for (Side side : {Side::kUser, Side::kResource}) {
    for (const auto& o : om.objects(side)) {
      for (const auto& [name, value] : o.attrs) {
        if (name != "id" && !value.is_null()) ++n;
      }
    }
  }
  return n;
}

GeneratedPolicy Generate(const GenSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  GeneratedPolicy out;
  out.policy = spec.tmpl == Template::kUniversity ? University(spec, rng) : ProjMgmt(spec, rng);
  for (const auto& rule : out.policy.rules) {
    out.policy.actions.insert(rule.actions.begin(), rule.actions.end());
  }
  out.policy.Validate();
  if (out.policy.model.MissingCount() != 0) {
    throw InvariantFailure("generated model contains Missing cells");
  }
  for (size_t i = 0; i < out.policy.rules.size(); ++i) {
    auto meaning = ComputeRuleMeaning(out.policy.rules[i], out.policy.model);
    if (meaning.granted.empty()) {
      throw InvariantFailure("generated rule " + std::to_string(i + 1) + " grants nothing");
    }
    out.entitlements.merge(meaning.granted);
  }
  const ObjectModel& om = out.policy.model;
  out.notes.users = om.users().size();
  out.notes.resources = om.resources().size();
  out.notes.attribute_cells = CountAttributeCells(om);
  out.notes.entitlements = out.entitlements.size();
  out.notes.rules = out.policy.rules.size();
  return out;
}

}  // namespace attrinfer
