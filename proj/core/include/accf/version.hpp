#pragma once

#include <compare>
#include <stdexcept>
#include <string>

#include "accf/dependency_set.hpp"
#include "accf/ids.hpp"

namespace accf {

class MalformedVersion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An immutable write record. `origin_group` is T(origin), captured at write
/// time so a version can be ordered without consulting the grouping.
struct Version {
  Key key;
  Value value;
  DependencySet ds;
  ServerId origin;
  TrackingGroupId origin_group;

  /// wt(d) = ds[T(origin)]. Throws MalformedVersion when the entry is missing.
  HlcTimestamp write_time() const;

  bool operator==(const Version&) const = default;
};

/// Last-writer-wins total order: write time, then origin group, then origin
/// server. Throws MalformedVersion for versions lacking their origin entry and
/// std::invalid_argument when keys differ.
std::strong_ordering version_order(const Version& a, const Version& b);

/// Same identity as far as replication is concerned.
bool same_write(const Version& a, const Version& b);

}  // namespace accf
