#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace accf {

/// A string identifier tagged with the namespace it belongs to, so a server
/// name cannot be passed where a tracking group is expected.
template <class Tag>
class NamedId {
 public:
  NamedId() = default;
  explicit NamedId(std::string name) : name_(std::move(name)) {}
  explicit NamedId(const char* name) : name_(name) {}

  const std::string& str() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  auto operator<=>(const NamedId&) const = default;
  bool operator==(const NamedId&) const = default;

 private:
  std::string name_;
};

template <class Tag>
std::ostream& operator<<(std::ostream& os, const NamedId<Tag>& id) {
  return os << id.str();
}

struct ServerTag {};
struct ClientTag {};
struct TrackingGroupTag {};
struct CheckingGroupTag {};

using ServerId = NamedId<ServerTag>;
using ClientId = NamedId<ClientTag>;
using TrackingGroupId = NamedId<TrackingGroupTag>;
using CheckingGroupId = NamedId<CheckingGroupTag>;

using Key = std::string;
using Value = std::string;

/// True when `name` can be written into a trace or config line unescaped.
bool is_valid_identifier(const std::string& name);

}  // namespace accf

template <class Tag>
struct std::hash<accf::NamedId<Tag>> {
  std::size_t operator()(const accf::NamedId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
