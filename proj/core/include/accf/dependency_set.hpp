#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "accf/ids.hpp"
#include "accf/timestamp.hpp"

namespace accf {

using TimestampEntries = std::map<TrackingGroupId, HlcTimestamp>;

/// Canonical "tg=l.c,tg=l.c" rendering, sorted by group id. Empty map renders
/// as the empty string.
std::string format_entries(const TimestampEntries& entries);

/// Inverse of format_entries. Throws std::invalid_argument.
TimestampEntries parse_entries(std::string_view text);

/// Per-tracking-group record of the highest timestamps causally observed.
/// Holds at most one entry per group and never the infinity sentinel.
class DependencySet {
 public:
  DependencySet() = default;
  DependencySet(std::initializer_list<TimestampEntries::value_type> init);
  explicit DependencySet(const TimestampEntries& entries);

  std::optional<HlcTimestamp> get(const TrackingGroupId& group) const;

  /// Entry-wise max with a single pair.
  void raise(const TrackingGroupId& group, HlcTimestamp ts);

  const TimestampEntries& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  bool operator==(const DependencySet&) const = default;

 private:
  TimestampEntries entries_;
};

/// Semilattice join: union of groups, entry-wise maximum on overlap.
DependencySet ds_merge(const DependencySet& a, const DependencySet& b);

/// Largest timestamp across entries, (0,0) for the empty set.
HlcTimestamp ds_max_timestamp(const DependencySet& ds);

/// True when `a` ⊑ `b`: every entry of `a` is present in `b` and not larger.
bool ds_covered_by(const DependencySet& a, const DependencySet& b);

std::string to_string(const DependencySet& ds);
DependencySet parse_dependency_set(std::string_view text);

/// One entry per tracking group, allowing the infinity sentinel. Missing
/// entries read as (0,0).
class VersionVector {
 public:
  VersionVector() = default;
  VersionVector(std::initializer_list<TimestampEntries::value_type> init);
  explicit VersionVector(TimestampEntries entries);

  HlcTimestamp at(const TrackingGroupId& group) const;
  void set(const TrackingGroupId& group, HlcTimestamp ts);

  const TimestampEntries& entries() const noexcept { return entries_; }

  bool operator==(const VersionVector&) const = default;

 private:
  TimestampEntries entries_;
};

/// Entry-wise minimum over the union of groups; absent entries count as (0,0).
VersionVector entrywise_min(const VersionVector& a, const VersionVector& b);
VersionVector entrywise_max(const VersionVector& a, const VersionVector& b);

/// a[t] <= b[t] for every group named in either vector.
bool entrywise_leq(const VersionVector& a, const VersionVector& b);

/// ∀⟨t,h⟩ ∈ ds: h <= vv[t].
bool dominated_by(const DependencySet& ds, const VersionVector& vv);

/// Join of a stable vector with a dependency set, used as a visibility bound.
VersionVector join(const VersionVector& vv, const DependencySet& ds);

std::string to_string(const VersionVector& vv);

}  // namespace accf
