#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfst/types.hpp"

namespace pfst {

// Dense token <-> id mapping; ids are assigned 0..size()-1 in insertion order.
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::span<const std::string> tokens);

  // Returns the existing id for `token`, or appends it.
  SymbolId add(std::string_view token);
  std::optional<SymbolId> find(std::string_view token) const;
  const std::string& token(SymbolId id) const;

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  std::span<const std::string> tokens() const { return tokens_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, SymbolId, std::less<>> ids_;
};

}  // namespace pfst
