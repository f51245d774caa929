#include "pfst/symbol_table.hpp"

#include <stdexcept>

namespace pfst {

SymbolTable::SymbolTable(std::span<const std::string> tokens) {
  for (const auto& token : tokens) {
    if (find(token)) throw std::invalid_argument("duplicate symbol '" + token + "'");
    add(token);
  }
}

SymbolId SymbolTable::add(std::string_view token) {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  const auto id = static_cast<SymbolId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<SymbolId> SymbolTable::find(std::string_view token) const {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& SymbolTable::token(SymbolId id) const {
  if (id >= tokens_.size()) {
    throw std::out_of_range("symbol id " + std::to_string(id) + " out of range");
  }
  return tokens_[id];
}

}  // namespace pfst
