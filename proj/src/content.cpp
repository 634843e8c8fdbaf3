#include "infogen/content.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

#include "infogen/error.hpp"

namespace infogen {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// "key: rest" where key is a single word of letters, digits or underscores.
struct KeyValue {
  std::string key;
  std::string_view value;
};

std::optional<KeyValue> split_key(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  const auto key = s.substr(0, colon);
  for (unsigned char c : key)
    if (!std::isalnum(c) && c != '_') return std::nullopt;
  return KeyValue{lower(key), trim(s.substr(colon + 1))};
}

[[noreturn]] void fail(std::string code, const std::string& msg) {
  throw Error(Stage::Content, std::move(code), msg);
}

}  // namespace

std::string_view slot_name(SlotKind kind) {
  switch (kind) {
    case SlotKind::Title: return "title";
    case SlotKind::Text: return "text";
    case SlotKind::Label: return "label";
    case SlotKind::Image: return "image";
  }
  return "";
}

std::optional<SlotKind> parse_slot_kind(std::string_view name) {
  for (auto k : kAllSlots)
    if (slot_name(k) == name) return k;
  return std::nullopt;
}

std::size_t SlotSet::size() const {
  std::size_t n = 0;
  for (auto k : kAllSlots) n += contains(k) ? 1 : 0;
  return n;
}

std::vector<SlotKind> SlotSet::kinds() const {
  std::vector<SlotKind> out;
  for (auto k : kAllSlots)
    if (contains(k)) out.push_back(k);
  return out;
}

const std::optional<std::string>& ContentItem::field(SlotKind k) const {
  switch (k) {
    case SlotKind::Title: return title;
    case SlotKind::Text: return text;
    case SlotKind::Label: return label;
    case SlotKind::Image: return image;
  }
  return text;
}

std::optional<std::string>& ContentItem::field(SlotKind k) {
  return const_cast<std::optional<std::string>&>(std::as_const(*this).field(k));
}

SlotSet slot_signature(const ContentItem& item) {
  SlotSet s;
  for (auto k : kAllSlots)
    if (item.field(k)) s.insert(k);
  return s;
}

SlotSet required_slots(const ContentSpec& spec) {
  SlotSet s;
  for (const auto& item : spec.items) s = s | slot_signature(item);
  return s;
}

ContentSpec parse_markdown(std::string_view source, std::size_t max_items) {
  ContentSpec spec;
  std::optional<std::size_t> item_line;  // line of the open item's bullet
  std::optional<SlotKind> last_field;

  auto close_item = [&] {
    if (!item_line) return;
    if (slot_signature(spec.items.back()).empty()) fail("empty_item", fmt::format("empty item at line {}", *item_line));
    item_line.reset();
    last_field.reset();
  };

  auto set_field = [&](SlotKind kind, std::string_view value, std::size_t line_no) {
    auto& slot = spec.items.back().field(kind);
    if (slot)
      fail("duplicate_field", fmt::format("duplicate field '{}' at line {}", slot_name(kind), line_no));
    slot = std::string(value);
    last_field = kind;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto end = source.find('\n', pos);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (trim(line).empty()) continue;

    if (line.starts_with("- ") || line == "-") {
      close_item();
      spec.items.emplace_back();
      item_line = line_no;
      const auto rest = trim(line.substr(1));
      if (rest.empty()) continue;
      const auto kv = split_key(rest);
      if (kv) {
        if (auto kind = parse_slot_kind(kv->key)) {
          set_field(*kind, kv->value, line_no);
          continue;
        }
      }
      set_field(SlotKind::Text, rest, line_no);
      continue;
    }

    const bool indented = std::isspace(static_cast<unsigned char>(line.front()));
    if (indented && item_line) {
      const auto body = trim(line);
      if (const auto kv = split_key(body)) {
        const auto kind = parse_slot_kind(kv->key);
        if (!kind) fail("unknown_field", fmt::format("unknown field '{}' at line {}", kv->key, line_no));
        set_field(*kind, kv->value, line_no);
        continue;
      }
      if (!last_field) fail("unexpected_line", fmt::format("continuation without a field at line {}", line_no));
      auto& slot = spec.items.back().field(*last_field);
      if (!slot->empty()) *slot += ' ';
      *slot += body;
      continue;
    }

    if (line.starts_with("# ") && !item_line && spec.items.empty() && !spec.heading) {
      spec.heading = std::string(trim(line.substr(2)));
      continue;
    }
    fail("unexpected_line", fmt::format("unexpected line {}: expected '- ' bullet or indented field", line_no));
  }
  close_item();

  if (spec.items.empty()) fail("no_items", "no content items");
  if (spec.items.size() > max_items)
    fail("too_many_items", fmt::format("too many visual groups (max {})", max_items));
  return spec;
}

std::string to_markdown(const ContentSpec& spec) {
  std::string out;
  if (spec.heading) out += fmt::format("# {}\n", *spec.heading);
  for (const auto& item : spec.items) {
    bool first = true;
    for (auto k : kAllSlots) {
      const auto& f = item.field(k);
      if (!f) continue;
      out += fmt::format("{}{}: {}\n", first ? "- " : "  ", slot_name(k), *f);
      first = false;
    }
  }
  return out;
}

}  // namespace infogen
