#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "tgminer/error.hpp"

namespace tgminer {

namespace detail {

// Process-wide intern table. Id 0 is reserved for the invalid (empty) label.
class LabelTable {
 public:
  static LabelTable& instance() {
    static LabelTable table;
    return table;
  }

  std::uint32_t intern(std::string_view text) {
    std::lock_guard lock(mutex_);
    auto it = ids_.find(std::string(text));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(texts_.size());
    texts_.emplace_back(text);
    ids_.emplace(texts_.back(), id);
    return id;
  }

  const std::string& text(std::uint32_t id) const {
    std::lock_guard lock(mutex_);
    return texts_.at(id);
  }

 private:
  LabelTable() { texts_.emplace_back(); }

  mutable std::mutex mutex_;
  std::deque<std::string> texts_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

}  // namespace detail

/// Interned node label. Equality and hashing are O(1) on the id; use
/// `text_less` when an order must be stable across processes.
class Label {
 public:
  Label() = default;

  static Label intern(std::string_view text) {
    if (text.empty()) throw Error(ErrorCode::EmptyLabel, "label text must be non-empty");
    return Label(detail::LabelTable::instance().intern(text));
  }

  std::uint32_t id() const noexcept { return id_; }
  bool valid() const noexcept { return id_ != 0; }
  const std::string& text() const { return detail::LabelTable::instance().text(id_); }

  friend bool operator==(Label, Label) = default;
  friend auto operator<=>(Label, Label) = default;

 private:
  explicit Label(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

inline bool text_less(Label a, Label b) {
  return a != b && a.text() < b.text();
}

inline int text_compare(Label a, Label b) {
  if (a == b) return 0;
  return a.text() < b.text() ? -1 : 1;
}

}  // namespace tgminer

template <>
struct std::hash<tgminer::Label> {
  std::size_t operator()(tgminer::Label l) const noexcept { return std::hash<std::uint32_t>{}(l.id()); }
};
