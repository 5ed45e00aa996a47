#include "attrinfer/attr_value.h"

#include "attrinfer/errors.h"

namespace attrinfer {

Tri TriAnd(Tri a, Tri b) {
  if (a == Tri::kFalse || b == Tri::kFalse) return Tri::kFalse;
  if (a == Tri::kUnknown || b == Tri::kUnknown) return Tri::kUnknown;
  return Tri::kTrue;
}

Tri FromBool(bool b) { return b ? Tri::kTrue : Tri::kFalse; }

const char* ToString(Tri t) {
  switch (t) {
    case Tri::kTrue:
      return "true";
    case Tri::kFalse:
      return "false";
    case Tri::kUnknown:
      return "unknown";
  }
  return "?";
}

AttrValue AttrValue::Atomic(std::string value) {
  if (value.empty()) throw InputError("atomic attribute value must be a non-empty string");
  return AttrValue(std::move(value));
}

AttrValue AttrValue::Set(ValueSet values) { return AttrValue(std::move(values)); }

AttrValue AttrValue::Null() { return AttrValue(NullTag{}); }

AttrValue AttrValue::Missing() { return AttrValue(MissingTag{}); }

AttrValue::Kind AttrValue::kind() const { return static_cast<Kind>(v_.index()); }

const std::string& AttrValue::atomic() const {
  if (!is_atomic()) throw ContractViolation("AttrValue::atomic() on " + DebugString());
  return std::get<std::string>(v_);
}

const ValueSet& AttrValue::set() const {
  if (!is_set()) throw ContractViolation("AttrValue::set() on " + DebugString());
  return std::get<ValueSet>(v_);
}

ValueSet AttrValue::AsSet() const {
  if (is_atomic()) return {atomic()};
  if (is_set()) return set();
  throw ContractViolation("AttrValue::AsSet() on " + DebugString());
}

std::string AttrValue::DebugString() const {
  switch (kind()) {
    case Kind::kAtomic:
      return atomic();
    case Kind::kSet: {
      std::string out = "{";
      bool first = true;
      for (const auto& v : set()) {
        if (!first) out += ", ";
        out += v;
        first = false;
      }
      return out + "}";
    }
    case Kind::kNull:
      return "NULL";
    case Kind::kMissing:
      return "?";
  }
  return "";
}

}  // namespace attrinfer
