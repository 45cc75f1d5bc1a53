#include "hyperset/error.hpp"

namespace hyperset {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::BadIndex: return "BadIndex";
    case Errc::EdgeFromAtom: return "EdgeFromAtom";
    case Errc::NotASet: return "NotASet";
    case Errc::SizeLimit: return "SizeLimit";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingRoot: return "MissingRoot";
    case Errc::AmbiguousRoot: return "AmbiguousRoot";
    case Errc::ColorCollision: return "ColorCollision";
    case Errc::NotAPair: return "NotAPair";
    case Errc::NotARelation: return "NotARelation";
    case Errc::NotANatural: return "NotANatural";
    case Errc::NameClash: return "NameClash";
    case Errc::UnboundName: return "UnboundName";
    case Errc::MissingEquation: return "MissingEquation";
    case Errc::DuplicateBinding: return "DuplicateBinding";
    case Errc::UnknownName: return "UnknownName";
    case Errc::AliasCycle: return "AliasCycle";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, SourceLocation where)
    : std::runtime_error(message), code_(code), where_(where) {}

}  // namespace hyperset
