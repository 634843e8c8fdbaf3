#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infogen {

enum class SlotKind { Title, Text, Label, Image };

inline constexpr std::array<SlotKind, 4> kAllSlots{SlotKind::Title, SlotKind::Text, SlotKind::Label,
                                                   SlotKind::Image};

std::string_view slot_name(SlotKind kind);
std::optional<SlotKind> parse_slot_kind(std::string_view name);

/// Small bitset over the four slot kinds.
class SlotSet {
 public:
  SlotSet() = default;
  SlotSet(std::initializer_list<SlotKind> kinds) {
    for (auto k : kinds) insert(k);
  }

  void insert(SlotKind k) { bits_ |= bit(k); }
  bool contains(SlotKind k) const { return (bits_ & bit(k)) != 0; }
  bool includes(const SlotSet& other) const { return (bits_ & other.bits_) == other.bits_; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  SlotSet operator|(const SlotSet& o) const {
    SlotSet s;
    s.bits_ = bits_ | o.bits_;
    return s;
  }
  bool operator==(const SlotSet&) const = default;

  std::vector<SlotKind> kinds() const;

 private:
  static unsigned bit(SlotKind k) { return 1u << static_cast<unsigned>(k); }
  unsigned bits_ = 0;
};

struct ContentItem {
  std::optional<std::string> title;
  std::optional<std::string> text;
  std::optional<std::string> label;
  std::optional<std::string> image;  // path or URL, never fetched

  const std::optional<std::string>& field(SlotKind k) const;
  std::optional<std::string>& field(SlotKind k);
  bool operator==(const ContentItem&) const = default;
};

struct ContentSpec {
  std::optional<std::string> heading;
  std::vector<ContentItem> items;

  bool operator==(const ContentSpec&) const = default;
};

inline constexpr std::size_t kMaxVisualGroups = 12;

SlotSet slot_signature(const ContentItem& item);

/// Union of every item's signature.
SlotSet required_slots(const ContentSpec& spec);

/// Parses the bullet-list content dialect:
///
///     # Optional heading
///     - title: First
///       text: body text that may continue
///         on indented lines
///     - bare bullet is shorthand for text
///
/// Throws infogen::Error (Stage::Content) with a line number on bad input.
ContentSpec parse_markdown(std::string_view source, std::size_t max_items = kMaxVisualGroups);

/// Canonical form accepted by parse_markdown; every field written explicitly.
std::string to_markdown(const ContentSpec& spec);

}  // namespace infogen
