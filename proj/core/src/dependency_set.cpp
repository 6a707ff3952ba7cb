#include "accf/dependency_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace accf {

std::string format_entries(const TimestampEntries& entries) {
  std::string out;
  for (const auto& [group, ts] : entries) {
    if (!out.empty()) out += ',';
    out += group.str();
    out += '=';
    out += to_string(ts);
  }
  return out;
}

TimestampEntries parse_entries(std::string_view text) {
  TimestampEntries entries;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = text.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw std::invalid_argument("malformed entry '" + std::string(item) + "'");
    }
    TrackingGroupId group{std::string(item.substr(0, eq))};
    if (!entries.emplace(group, parse_timestamp(item.substr(eq + 1))).second) {
      throw std::invalid_argument("duplicate entry for group " + group.str());
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw std::invalid_argument("trailing ',' in entry list");
  }
  return entries;
}

DependencySet::DependencySet(std::initializer_list<TimestampEntries::value_type> init) {
  for (const auto& [group, ts] : init) raise(group, ts);
}

DependencySet::DependencySet(const TimestampEntries& entries) {
  for (const auto& [group, ts] : entries) raise(group, ts);
}

std::optional<HlcTimestamp> DependencySet::get(const TrackingGroupId& group) const {
  auto it = entries_.find(group);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void DependencySet::raise(const TrackingGroupId& group, HlcTimestamp ts) {
  if (ts.is_infinite()) {
    throw std::invalid_argument("dependency set cannot hold the infinity sentinel");
  }
  auto [it, inserted] = entries_.emplace(group, ts);
  if (!inserted && it->second < ts) it->second = ts;
}

DependencySet ds_merge(const DependencySet& a, const DependencySet& b) {
  DependencySet out = a;
  for (const auto& [group, ts] : b.entries()) out.raise(group, ts);
  return out;
}

HlcTimestamp ds_max_timestamp(const DependencySet& ds) {
  HlcTimestamp best{};
  for (const auto& [group, ts] : ds.entries()) best = std::max(best, ts);
  return best;
}

bool ds_covered_by(const DependencySet& a, const DependencySet& b) {
  return std::all_of(a.entries().begin(), a.entries().end(), [&](const auto& entry) {
    auto other = b.get(entry.first);
    return other && entry.second <= *other;
  });
}

std::string to_string(const DependencySet& ds) { return format_entries(ds.entries()); }

DependencySet parse_dependency_set(std::string_view text) {
  return DependencySet(parse_entries(text));
}

VersionVector::VersionVector(std::initializer_list<TimestampEntries::value_type> init)
    : entries_(init) {}

VersionVector::VersionVector(TimestampEntries entries) : entries_(std::move(entries)) {}

HlcTimestamp VersionVector::at(const TrackingGroupId& group) const {
  auto it = entries_.find(group);
  return it == entries_.end() ? HlcTimestamp{} : it->second;
}

void VersionVector::set(const TrackingGroupId& group, HlcTimestamp ts) { entries_[group] = ts; }

namespace {

template <class Pick>
VersionVector combine(const VersionVector& a, const VersionVector& b, Pick pick) {
  TimestampEntries out;
  for (const auto& [group, ts] : a.entries()) out[group] = pick(ts, b.at(group));
  for (const auto& [group, ts] : b.entries()) {
    if (!out.contains(group)) out[group] = pick(a.at(group), ts);
  }
  return VersionVector(std::move(out));
}

}  // namespace

VersionVector entrywise_min(const VersionVector& a, const VersionVector& b) {
  return combine(a, b, [](HlcTimestamp x, HlcTimestamp y) { return std::min(x, y); });
}

VersionVector entrywise_max(const VersionVector& a, const VersionVector& b) {
  return combine(a, b, [](HlcTimestamp x, HlcTimestamp y) { return std::max(x, y); });
}

bool entrywise_leq(const VersionVector& a, const VersionVector& b) {
  for (const auto& [group, ts] : a.entries()) {
    if (ts > b.at(group)) return false;
  }
  for (const auto& [group, ts] : b.entries()) {
    if (a.at(group) > ts) return false;
  }
  return true;
}

bool dominated_by(const DependencySet& ds, const VersionVector& vv) {
  return std::all_of(ds.entries().begin(), ds.entries().end(),
                     [&](const auto& entry) { return entry.second <= vv.at(entry.first); });
}

VersionVector join(const VersionVector& vv, const DependencySet& ds) {
  VersionVector out = vv;
  for (const auto& [group, ts] : ds.entries()) {
    if (out.at(group) < ts) out.set(group, ts);
  }
  return out;
}

std::string to_string(const VersionVector& vv) { return format_entries(vv.entries()); }

}  // namespace accf
