#pragma once

#include <array>
#include <string>
#include <vector>

namespace audelta {
namespace synth {

enum class ClassId {
  Rain,
  CarPassingBy,
  Dog,
  ChirpingBirds,
  Thunder,
  Footsteps,
  CarHorn,
  ChurchBells,
};

inline constexpr std::array<ClassId, 8> kAllClasses = {
    ClassId::Rain,     ClassId::CarPassingBy, ClassId::Dog,     ClassId::ChirpingBirds,
    ClassId::Thunder,  ClassId::Footsteps,    ClassId::CarHorn, ClassId::ChurchBells,
};

const std::string& class_name(ClassId id);
ClassId class_from_name(const std::string& name);

// Phrase used in difference descriptions ("dog" -> "dog bark").
const std::string& class_phrase(ClassId id);

enum class SceneName { Rain, Traffic };

// A scene fixes the background class and the four admissible event classes.
struct SceneSpec {
  SceneName name;
  ClassId background_class;
  std::vector<ClassId> event_classes;  // length 4, duplicate-free

  // Label order: background first, then the events in listed order.
  std::vector<ClassId> label_classes() const;
  std::size_t n_classes() const { return 1 + event_classes.size(); }
  bool is_event(ClassId id) const;
  int label_index(ClassId id) const;  // -1 when the class is not in the scene
};

SceneSpec scene_spec(SceneName name);
SceneName scene_from_name(const std::string& name);
const std::string& scene_name_string(SceneName name);

}  // namespace synth
}  // namespace audelta
