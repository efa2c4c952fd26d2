#include "acf/taxonomy.hpp"

#include "acf/error.hpp"

#include <algorithm>
#include <string>

namespace acf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::RoiOutOfImage: return "RoiOutOfImage";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::NoValidSeeds: return "NoValidSeeds";
    case ErrorCode::DegenerateAxis: return "DegenerateAxis";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::RansacFailure: return "RansacFailure";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

double MaskWeights::total() const noexcept {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void MaskWeights::validate() const {
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "mask weight outside [0, 1]: " + std::to_string(w));
    }
  }
}

OffsetField EndpointOffsetField::channel(std::size_t m) const {
  OffsetField out;
  out.offsets.reserve(offsets.size());
  for (const auto& pair : offsets) out.offsets.push_back(pair.at(m));
  return out;
}

std::string_view to_string(PartClass c) noexcept {
  switch (c) {
    case PartClass::Container: return "container";
    case PartClass::Handle: return "handle";
    case PartClass::Stir: return "stir";
    case PartClass::Scoop: return "scoop";
  }
  return "?";
}

std::string_view to_string(ObjectClass c) noexcept {
  switch (c) {
    case ObjectClass::Bottle: return "bottle";
    case ObjectClass::Mug: return "mug";
    case ObjectClass::Bowl: return "bowl";
    case ObjectClass::Spoon: return "spoon";
    case ObjectClass::Spatula: return "spatula";
    case ObjectClass::Hammer: return "hammer";
  }
  return "?";
}

std::string_view to_string(ActionClass c) noexcept {
  switch (c) {
    case ActionClass::Grasp: return "grasp";
    case ActionClass::Stir: return "stir";
    case ActionClass::Scoop: return "scoop";
    case ActionClass::Contain: return "contain";
    case ActionClass::Pour: return "pour";
  }
  return "?";
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::array<Enum, N>& all, const char* what) {
  for (Enum e : all) {
    if (to_string(e) == name) return e;
  }
  throw Error(ErrorCode::SchemaViolation, std::string("unknown ") + what + " '" +
                                              std::string(name) + "'");
}

}  // namespace

PartClass part_class_from_string(std::string_view name) {
  return parse_enum(name, kAllPartClasses, "part class");
}
ObjectClass object_class_from_string(std::string_view name) {
  return parse_enum(name, kAllObjectClasses, "object class");
}
ActionClass action_class_from_string(std::string_view name) {
  return parse_enum(name, kAllActionClasses, "action class");
}

Acf::Acf(const Vec3& keypoint, const Vec3& axis) : keypoint_(keypoint) {
  if (!all_finite(keypoint) || !all_finite(axis)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite ACF component");
  }
  const double norm = axis.norm();
  if (norm < 1e-12) throw Error(ErrorCode::ZeroVector, "ACF axis has zero length");
  axis_ = axis / norm;
}

Acf Acf::transformed(const RigidTransform& t) const {
  return Acf(t.apply(keypoint_), t.rotate(axis_));
}

std::set<PartClass> parts_of(ObjectClass object) {
  using P = PartClass;
  switch (object) {
    case ObjectClass::Bottle: return {P::Container};
    case ObjectClass::Mug: return {P::Container, P::Handle};
    case ObjectClass::Bowl: return {P::Container};
    case ObjectClass::Spoon: return {P::Stir, P::Scoop};
    case ObjectClass::Spatula: return {P::Stir, P::Scoop};
    case ObjectClass::Hammer: return {P::Stir};
  }
  return {};
}

std::set<ActionClass> actions_of(PartClass part) {
  using A = ActionClass;
  switch (part) {
    case PartClass::Container: return {A::Grasp, A::Contain, A::Pour};
    case PartClass::Handle: return {A::Grasp};
    case PartClass::Stir: return {A::Grasp, A::Stir, A::Scoop};
    case PartClass::Scoop: return {A::Scoop};
  }
  return {};
}

std::set<std::pair<PartClass, PartClass>> compatible_pairs() {
  return {{PartClass::Handle, PartClass::Container}, {PartClass::Stir, PartClass::Scoop}};
}

bool is_compatible(PartClass source, PartClass target) {
  return compatible_pairs().contains({source, target});
}

std::optional<ObjectClass> object_for_parts(const std::set<PartClass>& parts) {
  std::optional<ObjectClass> found;
  int matches = 0;
  for (ObjectClass o : kAllObjectClasses) {
    if (parts_of(o) == parts) {
      found = o;
      ++matches;
    }
  }
  if (matches == 1) return found;
  return std::nullopt;
}

}  // namespace acf
