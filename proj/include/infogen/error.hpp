#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infogen {

/// Pipeline stage an error originates from. Surfaces in CLI stderr and in
/// the service's error bodies.
enum class Stage { Geometry, Content, Layout, Vg, Connection, Composer, Dataset, Service };

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Geometry: return "geometry";
    case Stage::Content: return "content";
    case Stage::Layout: return "layout";
    case Stage::Vg: return "vg";
    case Stage::Connection: return "connection";
    case Stage::Composer: return "composer";
    case Stage::Dataset: return "dataset";
    case Stage::Service: return "service";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Stage stage, std::string code, const std::string& message)
      : std::runtime_error(message), stage_(stage), code_(std::move(code)) {}

  Stage stage() const noexcept { return stage_; }
  const std::string& code() const noexcept { return code_; }

 private:
  Stage stage_;
  std::string code_;
};

}  // namespace infogen
