#include "accf/version.hpp"

namespace accf {

HlcTimestamp Version::write_time() const {
  auto wt = ds.get(origin_group);
  if (!wt) {
    throw MalformedVersion("version of '" + key + "' from " + origin.str() +
                           " has no entry for its origin group " + origin_group.str());
  }
  return *wt;
}

std::strong_ordering version_order(const Version& a, const Version& b) {
  if (a.key != b.key) {
    throw std::invalid_argument("version_order on different keys '" + a.key + "' and '" +
                                b.key + "'");
  }
  if (auto cmp = a.write_time() <=> b.write_time(); cmp != 0) return cmp;
  if (auto cmp = a.origin_group <=> b.origin_group; cmp != 0) return cmp;
  return a.origin <=> b.origin;
}

bool same_write(const Version& a, const Version& b) {
  return a.key == b.key && a.origin == b.origin && a.write_time() == b.write_time();
}

}  // namespace accf
