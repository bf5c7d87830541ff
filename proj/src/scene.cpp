#include "audelta/scene.hpp"

#include <algorithm>
#include <stdexcept>

namespace audelta {
namespace synth {

namespace {
const std::array<std::string, 8> kClassNames = {
    "rain",    "car_passing_by", "dog",      "chirping_birds",
    "thunder", "footsteps",      "car_horn", "church_bells",
};
const std::array<std::string, 8> kClassPhrases = {
    "rain",    "car sound", "dog bark", "bird chirping",
    "thunder", "footsteps", "car horn", "church bells",
};
}  // namespace

const std::string& class_name(ClassId id) { return kClassNames[static_cast<int>(id)]; }

ClassId class_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i)
    if (kClassNames[i] == name) return static_cast<ClassId>(i);
  throw std::invalid_argument("unknown audio class: '" + name + "'");
}

const std::string& class_phrase(ClassId id) { return kClassPhrases[static_cast<int>(id)]; }

std::vector<ClassId> SceneSpec::label_classes() const {
  std::vector<ClassId> out;
  out.reserve(n_classes());
  out.push_back(background_class);
  out.insert(out.end(), event_classes.begin(), event_classes.end());
  return out;
}

bool SceneSpec::is_event(ClassId id) const {
  return std::find(event_classes.begin(), event_classes.end(), id) != event_classes.end();
}

int SceneSpec::label_index(ClassId id) const {
  if (id == background_class) return 0;
  for (std::size_t i = 0; i < event_classes.size(); ++i)
    if (event_classes[i] == id) return static_cast<int>(i) + 1;
  return -1;
}

SceneSpec scene_spec(SceneName name) {
  switch (name) {
    case SceneName::Rain:
      return {SceneName::Rain,
              ClassId::Rain,
              {ClassId::Dog, ClassId::ChirpingBirds, ClassId::Thunder, ClassId::Footsteps}};
    case SceneName::Traffic:
      return {SceneName::Traffic,
              ClassId::CarPassingBy,
              {ClassId::Dog, ClassId::ChirpingBirds, ClassId::CarHorn, ClassId::ChurchBells}};
  }
  throw std::invalid_argument("unknown scene");
}

SceneName scene_from_name(const std::string& name) {
  if (name == "rain") return SceneName::Rain;
  if (name == "traffic") return SceneName::Traffic;
  throw std::invalid_argument("unknown scene: '" + name + "' (expected rain or traffic)");
}

const std::string& scene_name_string(SceneName name) {
  static const std::string rain = "rain", traffic = "traffic";
  return name == SceneName::Rain ? rain : traffic;
}

}  // namespace synth
}  // namespace audelta
