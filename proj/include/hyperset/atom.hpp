#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace hyperset {

// An ur-element. Identity is the uid; the name is for display and for
// cross-process exchange (DOT and DSL files re-intern by name).
class Atom {
 public:
  Atom() = default;

  std::uint64_t uid() const noexcept { return uid_; }
  const std::string& name() const;

  friend bool operator==(const Atom& a, const Atom& b) noexcept { return a.uid_ == b.uid_; }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) noexcept {
    return a.uid_ <=> b.uid_;
  }

 private:
  friend class AtomTable;
  explicit Atom(std::uint64_t uid) : uid_(uid) {}

  std::uint64_t uid_ = 0;
};

// Process-global interning table. Thread safe.
class AtomTable {
 public:
  // Returns the atom with this name, creating it on first use.
  static Atom intern(std::string_view name);

  // Returns a new atom that is not in `avoid` and differs from every atom
  // issued before. The name is derived from `hint` and is a valid DSL
  // identifier when `hint` is.
  static Atom fresh(std::string_view hint, std::span<const Atom> avoid = {});

  static std::size_t size();
};

inline Atom intern_atom(std::string_view name) { return AtomTable::intern(name); }

}  // namespace hyperset

template <>
struct std::hash<hyperset::Atom> {
  std::size_t operator()(const hyperset::Atom& a) const noexcept {
    return std::hash<std::uint64_t>{}(a.uid());
  }
};
