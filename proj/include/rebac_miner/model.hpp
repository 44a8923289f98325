#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace rebac_miner {

enum class Multiplicity : std::uint8_t { One, Optional, Many };

inline constexpr std::string_view kBooleanType = "Boolean";
/// Implicit identifier field of every class.
inline constexpr std::string_view kIdField = "id";

std::string_view to_string(Multiplicity m) noexcept;
std::optional<Multiplicity> multiplicity_from_string(std::string_view s) noexcept;

struct FieldDecl {
  std::string type;  // a class name or "Boolean"
  Multiplicity multiplicity = Multiplicity::One;

  friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

class ClassModel {
 public:
  void add_class(const std::string& name);
  /// Throws UsageError for undeclared owners, duplicate or reserved names.
  void add_field(const std::string& cls, const std::string& field, FieldDecl decl);

  bool has_class(std::string_view name) const;
  /// Declared fields of `cls` (without the implicit id). Throws UsageError.
  const std::map<std::string, FieldDecl>& fields(const std::string& cls) const;
  std::optional<FieldDecl> field(const std::string& cls, const std::string& name) const;
  std::vector<std::string> class_names() const;
  std::size_t field_count() const;

  /// Field types name declared classes or Boolean; Boolean fields are One.
  void validate() const;

  friend bool operator==(const ClassModel&, const ClassModel&) = default;

 private:
  std::map<std::string, std::map<std::string, FieldDecl>, std::less<>> classes_;
};

/// Field names joined by '.', stored in sugared form: a trailing "id" after
/// an object-valued field is implicit and omitted.
using Path = std::vector<std::string>;

std::string path_text(const Path& p);
Path parse_path(std::string_view text);

struct PathType {
  std::string type;  // class name, or "Boolean"
  Multiplicity multiplicity = Multiplicity::One;
};

/// Many if any hop is Many, One if all hops are One, else Optional. The
/// empty path and "id" denote the start object itself. Throws UsageError.
PathType type_path(const ClassModel& cm, const std::string& start, const Path& p);

using ObjectRef = std::uint32_t;

/// An object reference or a boolean.
struct Atom {
  enum class Kind : std::uint8_t { Boolean, Object };
  Kind kind = Kind::Object;
  std::uint32_t value = 0;

  static Atom object(ObjectRef ref) noexcept { return {Kind::Object, ref}; }
  static Atom boolean(bool b) noexcept { return {Kind::Boolean, b ? 1u : 0u}; }

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct NoneValue {
  friend bool operator==(const NoneValue&, const NoneValue&) = default;
};
struct UnknownValue {
  friend bool operator==(const UnknownValue&, const UnknownValue&) = default;
};

/// Stored field value. Sets are sorted and never contain unknown.
using FieldValue = std::variant<NoneValue, UnknownValue, Atom, std::vector<Atom>>;

/// A constant in a policy: a boolean or an object id.
using Constant = std::variant<bool, std::string>;

std::string constant_text(const Constant& c);

struct Object {
  std::string id;
  std::string type;
  std::map<std::string, FieldValue> fields;

  friend bool operator==(const Object&, const Object&) = default;
};

class ObjectModel {
 public:
  explicit ObjectModel(std::shared_ptr<const ClassModel> cm);

  const ClassModel& class_model() const noexcept { return *cm_; }
  const std::shared_ptr<const ClassModel>& class_model_ptr() const noexcept { return cm_; }

  /// Declared fields start as: One/Optional -> None, Many -> empty set.
  /// Throws UsageError for duplicate ids or undeclared classes.
  ObjectRef add_object(std::string id, std::string type);
  /// Checks the value against the declared type and multiplicity.
  void set_field(ObjectRef ref, const std::string& field, FieldValue value);

  std::optional<ObjectRef> find(std::string_view id) const;
  const Object& object(ObjectRef ref) const { return objects_.at(ref); }
  const FieldValue& field(ObjectRef ref, const std::string& name) const;
  std::size_t size() const noexcept { return objects_.size(); }
  const std::vector<ObjectRef>& instances(std::string_view cls) const;

  std::string atom_text(Atom a) const;
  /// Object ids that are absent from the model resolve to nothing.
  std::optional<Atom> resolve(const Constant& c) const;
  Constant to_constant(Atom a) const;

  /// One-multiplicity fields must not hold None.
  void validate() const;

  friend bool operator==(const ObjectModel& a, const ObjectModel& b) {
    return *a.cm_ == *b.cm_ && a.objects_ == b.objects_;
  }

 private:
  std::shared_ptr<const ClassModel> cm_;
  std::vector<Object> objects_;
  std::unordered_map<std::string, ObjectRef> by_id_;
  std::map<std::string, std::vector<ObjectRef>, std::less<>> by_type_;
};

/// Navigation result for a many-valued path; may contain unknown.
struct NavSet {
  std::vector<Atom> elements;  // sorted, unique
  bool has_unknown = false;

  friend bool operator==(const NavSet&, const NavSet&) = default;
};

using NavValue = std::variant<NoneValue, UnknownValue, Atom, NavSet>;

/// Follows `p` from `o`. Unknown short-circuits to UnknownValue on One or
/// Optional paths and marks the set on Many paths; None short-circuits on
/// One/Optional paths and contributes nothing on Many paths.
NavValue nav(const ObjectModel& om, ObjectRef o, const Path& p);
NavValue nav(const ObjectModel& om, ObjectRef o, const Path& p, Multiplicity path_multiplicity);

}  // namespace rebac_miner
