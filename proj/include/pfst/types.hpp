#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pfst {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;
using ArcId = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected model construction input (bad state index, weight, duplicate arc).
class ModelError : public Error {
 public:
  using Error::Error;
};

class UnknownToken : public Error {
 public:
  UnknownToken(std::string token, std::size_t position)
      : Error("unknown token '" + token + "' at position " + std::to_string(position)),
        token_(std::move(token)),
        position_(position) {}

  const std::string& token() const { return token_; }
  std::size_t position() const { return position_; }

 private:
  std::string token_;
  std::size_t position_;
};

// No complete start-to-final path consumes the input.
class NoPath : public Error {
 public:
  NoPath() : Error("no complete path") {}
};

// A back-pointer chain did not lead back to the start state.
class CorruptChart : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pfst
