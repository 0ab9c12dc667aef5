#include "metamine/value.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace metamine {

namespace {

class SymbolTable {
 public:
  SymbolTable() { intern(""); }

  std::uint32_t intern(std::string_view token) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(token); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = index_.find(token); it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(tokens_.size());
    const std::string& stored = tokens_.emplace_back(token);
    index_.emplace(std::string_view(stored), id);
    return id;
  }

  // deque never relocates its elements, so the view stays valid after the
  // lock is released.
  std::string_view text(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return tokens_[id];
  }

 private:
  mutable std::shared_mutex mutex_;
  std::deque<std::string> tokens_;
  std::unordered_map<std::string_view, std::uint32_t> index_;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

}  // namespace

Value Value::of(std::string_view token) { return Value(symbols().intern(token)); }

std::string_view Value::text() const { return symbols().text(id_); }

}  // namespace metamine
