#pragma once

#include "acf/fields.hpp"
#include "acf/geometry.hpp"

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <utility>

namespace acf {

enum class PartClass { Container, Handle, Stir, Scoop };
enum class ObjectClass { Bottle, Mug, Bowl, Spoon, Spatula, Hammer };
enum class ActionClass { Grasp, Stir, Scoop, Contain, Pour };

inline constexpr std::array kAllPartClasses{PartClass::Container, PartClass::Handle,
                                            PartClass::Stir, PartClass::Scoop};
inline constexpr std::array kAllObjectClasses{ObjectClass::Bottle, ObjectClass::Mug,
                                              ObjectClass::Bowl,   ObjectClass::Spoon,
                                              ObjectClass::Spatula, ObjectClass::Hammer};
inline constexpr std::array kAllActionClasses{ActionClass::Grasp, ActionClass::Stir,
                                              ActionClass::Scoop, ActionClass::Contain,
                                              ActionClass::Pour};

std::string_view to_string(PartClass c) noexcept;
std::string_view to_string(ObjectClass c) noexcept;
std::string_view to_string(ActionClass c) noexcept;

// Case-sensitive lower-case names ("container", "mug", "pour", ...).
// Throw SchemaViolation on unknown names.
PartClass part_class_from_string(std::string_view name);
ObjectClass object_class_from_string(std::string_view name);
ActionClass action_class_from_string(std::string_view name);

/// An affordance coordinate frame: a keypoint with a directed unit axis
/// anchored at it. Keypoints live in the camera frame unless stated
/// otherwise by the caller.
class Acf {
public:
  // Normalizes `axis`. Throws ZeroVector for a (near-)zero axis and
  // InvalidArgument for non-finite input.
  Acf(const Vec3& keypoint, const Vec3& axis);

  const Vec3& keypoint() const noexcept { return keypoint_; }
  const Vec3& axis() const noexcept { return axis_; }

  Acf transformed(const RigidTransform& t) const;

private:
  Vec3 keypoint_;
  Vec3 axis_;
};

struct PartInstance {
  PartClass part_class = PartClass::Container;
  Acf acf{Vec3::Zero(), Vec3::UnitZ()};
  std::shared_ptr<const MaskWeights> mask_weights;
  double score = 1.0;  // [0, 1]
};

/// Which parts an object is made of.
std::set<PartClass> parts_of(ObjectClass object);

/// Which actions a part supports.
std::set<ActionClass> actions_of(PartClass part);

/// Ordered (dependent, anchor) pairs that may be joined into one object.
/// The dependent part carries the affinity field pointing at the anchor.
std::set<std::pair<PartClass, PartClass>> compatible_pairs();

bool is_compatible(PartClass source, PartClass target);

/// The object whose part set equals `parts` exactly, if exactly one does.
std::optional<ObjectClass> object_for_parts(const std::set<PartClass>& parts);

}  // namespace acf
