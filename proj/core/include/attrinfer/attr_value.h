#pragma once

#include <set>
#include <string>
#include <variant>

namespace attrinfer {

using ValueSet = std::set<std::string>;

// Three-valued truth used when evaluating against models with missing cells.
enum class Tri { kFalse, kTrue, kUnknown };

// Kleene conjunction: False dominates Unknown, Unknown dominates True.
Tri TriAnd(Tri a, Tri b);
Tri FromBool(bool b);
const char* ToString(Tri t);

// One cell of the object model.
//
// Null means the attribute does not apply to the object (definite information).
// Missing means the attribute applies but its value is unknown. The two never
// compare equal to each other or to any data value.
class AttrValue {
 public:
  enum class Kind { kAtomic, kSet, kNull, kMissing };

  AttrValue() : AttrValue(Null()) {}

  static AttrValue Atomic(std::string value);
  static AttrValue Set(ValueSet values);
  static AttrValue Null();
  static AttrValue Missing();

  Kind kind() const;
  bool is_atomic() const { return kind() == Kind::kAtomic; }
  bool is_set() const { return kind() == Kind::kSet; }
  bool is_null() const { return kind() == Kind::kNull; }
  bool is_missing() const { return kind() == Kind::kMissing; }
  // Atomic or Set.
  bool is_known() const { return is_atomic() || is_set(); }

  // Precondition: is_atomic().
  const std::string& atomic() const;
  // Precondition: is_set().
  const ValueSet& set() const;
  // Known values lifted to a set (atomic becomes a singleton).
  ValueSet AsSet() const;

  std::string DebugString() const;

  friend bool operator==(const AttrValue& a, const AttrValue& b) = default;

 private:
  struct NullTag {
    friend bool operator==(NullTag, NullTag) = default;
  };
  struct MissingTag {
    friend bool operator==(MissingTag, MissingTag) = default;
  };

  explicit AttrValue(std::variant<std::string, ValueSet, NullTag, MissingTag> v)
      : v_(std::move(v)) {}

  std::variant<std::string, ValueSet, NullTag, MissingTag> v_;
};

}  // namespace attrinfer
