#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperset {

enum class Errc {
  BadIndex,
  EdgeFromAtom,
  NotASet,
  SizeLimit,
  ParseError,
  MissingRoot,
  AmbiguousRoot,
  ColorCollision,
  NotAPair,
  NotARelation,
  NotANatural,
  NameClash,
  UnboundName,
  MissingEquation,
  DuplicateBinding,
  UnknownName,
  AliasCycle,
};

std::string_view errc_name(Errc code) noexcept;

// Source position for text-format errors; line and column are 1-based,
// zero means "not applicable".
struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, SourceLocation where = {});

  Errc code() const noexcept { return code_; }
  const SourceLocation& where() const noexcept { return where_; }
  bool is_resource_limit() const noexcept { return code_ == Errc::SizeLimit; }

 private:
  Errc code_;
  SourceLocation where_;
};

}  // namespace hyperset
