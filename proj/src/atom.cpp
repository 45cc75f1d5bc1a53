#include "hyperset/atom.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace hyperset {
namespace {

struct Registry {
  std::mutex mutex;
  // deque keeps name references stable while the table grows
  std::deque<std::string> names;
  std::unordered_map<std::string, std::uint64_t> by_name;
  std::uint64_t fresh_counter = 0;
};

Registry& registry() {
  static Registry r;
  return r;
}

std::uint64_t intern_locked(Registry& r, std::string_view name) {
  auto it = r.by_name.find(std::string(name));
  if (it != r.by_name.end()) return it->second;
  const std::uint64_t uid = r.names.size();
  r.names.emplace_back(name);
  r.by_name.emplace(r.names.back(), uid);
  return uid;
}

}  // namespace

const std::string& Atom::name() const {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  return r.names.at(uid_);
}

Atom AtomTable::intern(std::string_view name) {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  return Atom(intern_locked(r, name));
}

Atom AtomTable::fresh(std::string_view hint, std::span<const Atom> avoid) {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  // A name never seen before gives a uid never issued before, which is
  // also outside `avoid` since every atom in `avoid` already exists.
  for (;;) {
    std::string candidate = "_";
    candidate += hint;
    candidate += '_';
    candidate += std::to_string(r.fresh_counter++);
    if (r.by_name.contains(candidate)) continue;
    const std::uint64_t uid = intern_locked(r, candidate);
    if (std::ranges::any_of(avoid, [&](const Atom& a) { return a.uid() == uid; })) continue;
    return Atom(uid);
  }
}

std::size_t AtomTable::size() {
  Registry& r = registry();
  std::lock_guard lock(r.mutex);
  return r.names.size();
}

}  // namespace hyperset
