#include <gtest/gtest.h>

#include <random>

#include "accf/grouping.hpp"

namespace accf {
namespace {

const ServerId A1{"A1"}, A2{"A2"}, B1{"B1"}, B2{"B2"};

GroupConfig two_by_two() { return preset("two-by-two", four_server_topology()); }

bool has_violation(const GroupConfig& config, ViolationKind kind) {
  for (const auto& v : validate(config)) {
    if (v.kind == kind) return true;
  }
  return false;
}

TEST(Preset, TwoByTwoMatchesFigureLayout) {
  const auto config = two_by_two();
  EXPECT_TRUE(validate(config).empty());
  EXPECT_EQ(config.tracking_group(A1), config.tracking_group(B1));
  EXPECT_EQ(config.tracking_group(A2), config.tracking_group(B2));
  EXPECT_NE(config.tracking_group(A1), config.tracking_group(A2));
  EXPECT_EQ(config.checking.size(), 2u);
  EXPECT_EQ(config.checking.at(CheckingGroupId{"cg1"}), (std::set<ServerId>{A1, B1}));
  EXPECT_EQ(config.checking.at(CheckingGroupId{"cg2"}), (std::set<ServerId>{A2, B2}));
  EXPECT_EQ(config.hosts("A/x"), (std::set<ServerId>{A1, A2}));
  EXPECT_EQ(config.hosts("B/x"), (std::set<ServerId>{B1, B2}));
}

TEST(Preset, FourByOneIsolatesEveryServer) {
  const auto config = preset("four-by-one", four_server_topology());
  EXPECT_TRUE(validate(config).empty());
  EXPECT_EQ(config.tracking.size(), 4u);
  EXPECT_EQ(config.checking.size(), 4u);
  for (const auto& [id, info] : config.servers) {
    EXPECT_EQ(config.tracking.at(config.tracking_group(id)), std::set<ServerId>{id});
    const auto groups = config.checking_groups(id);
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(config.checking.at(*groups.begin()), std::set<ServerId>{id});
  }
}

TEST(Preset, PlacementIndependentOfGrouping) {
  for (const auto& name : preset_names()) {
    const auto config = preset(name, four_server_topology());
    EXPECT_EQ(config.placement, two_by_two().placement) << name;
    EXPECT_TRUE(validate(config).empty()) << name;
  }
}

TEST(Preset, TableStyles) {
  const auto topo = four_server_topology();
  EXPECT_EQ(preset("gentlerain", topo).tracking.size(), 1u);
  EXPECT_EQ(preset("per-system-tracking/per-replica-checking", topo).tracking.size(), 1u);
  const auto spartan = preset("causalspartan", topo);
  EXPECT_EQ(spartan.tracking_group(A1), spartan.tracking_group(B1));
  EXPECT_EQ(preset("orbe", topo).tracking.size(), 4u);
  EXPECT_EQ(preset("okapi", topo).checking.size(), 1u);
  EXPECT_EQ(preset("2x2", topo), two_by_two());
  EXPECT_THROW(preset("three-by-three", topo), GroupingError);
}

TEST(Validate, EmptyCheckingSet) {
  auto config = two_by_two();
  config.checking.at(CheckingGroupId{"cg1"}).erase(A1);
  ASSERT_TRUE(has_violation(config, ViolationKind::kEmptyCheckingSet));
  bool mentioned = false;
  for (const auto& v : validate(config)) {
    mentioned |= v.message.find("empty checking set") != std::string::npos && v.message.find("A1") != std::string::npos;
  }
  EXPECT_TRUE(mentioned);
}

TEST(Validate, UnknownServerInCheckingGroup) {
  auto config = two_by_two();
  config.checking.at(CheckingGroupId{"cg1"}).insert(ServerId{"X"});
  EXPECT_TRUE(has_violation(config, ViolationKind::kUnknownServer));
}

TEST(Validate, TrackingAndPlacementProblems) {
  auto missing = two_by_two();
  missing.tracking.at(missing.tracking_group(A1)).erase(A1);
  EXPECT_TRUE(has_violation(missing, ViolationKind::kMissingTrackingGroup));

  auto doubled = two_by_two();
  doubled.tracking[TrackingGroupId{"extra"}].insert(A1);
  EXPECT_TRUE(has_violation(doubled, ViolationKind::kMultipleTrackingGroups));
  EXPECT_THROW(doubled.tracking_group(A1), GroupingError);

  auto empty_hosts = two_by_two();
  empty_hosts.placement["C"] = {};
  EXPECT_TRUE(has_violation(empty_hosts, ViolationKind::kEmptyHostSet));

  auto empty_group = two_by_two();
  empty_group.checking[CheckingGroupId{"cg9"}] = {};
  EXPECT_TRUE(has_violation(empty_group, ViolationKind::kEmptyCheckingGroup));

  EXPECT_TRUE(has_violation(GroupConfig{}, ViolationKind::kNoServers));
}

TEST(Validate, ReportsEveryViolation) {
  auto config = two_by_two();
  config.checking.at(CheckingGroupId{"cg1"}) = {ServerId{"X"}};
  config.placement["C"] = {};
  const auto violations = validate(config);
  EXPECT_GE(violations.size(), 4u);  // A1, B1 empty C; X unknown; C no hosts
}

TEST(AddCheckingGroup, RegistersGroupAndDirective) {
  const auto base = two_by_two();
  const auto result = add_checking_group(base, CheckingGroupId{"cg3"}, {A1, B2});
  EXPECT_EQ(result.config.checking.size(), 3u);
  EXPECT_EQ(result.config.epoch, base.epoch + 1);
  EXPECT_EQ(result.directive.group, CheckingGroupId{"cg3"});
  EXPECT_EQ(result.directive.members, (std::set<ServerId>{A1, B2}));
  EXPECT_EQ(result.directive.epoch, result.config.epoch);
  EXPECT_TRUE(validate(result.config).empty());
  EXPECT_EQ(result.config.checking_groups(A1).size(), 2u);
}

TEST(AddCheckingGroup, Errors) {
  const auto base = two_by_two();
  EXPECT_THROW(add_checking_group(base, CheckingGroupId{"cg1"}, {A1}), GroupingError);
  EXPECT_THROW(add_checking_group(base, CheckingGroupId{"cg3"}, {}), GroupingError);
  EXPECT_THROW(add_checking_group(base, CheckingGroupId{"cg3"}, {ServerId{"X"}}), GroupingError);
  EXPECT_THROW(add_checking_group(base, CheckingGroupId{"bad id"}, {A1}), GroupingError);
}

TEST(RemoveCheckingGroup, InverseOfAdd) {
  const auto base = two_by_two();
  const auto added = add_checking_group(base, CheckingGroupId{"cg3"}, {A1, B2}).config;
  auto removed = remove_checking_group(added, CheckingGroupId{"cg3"});
  EXPECT_EQ(removed.checking, base.checking);
  EXPECT_EQ(removed.epoch, base.epoch + 2);
}

TEST(RemoveCheckingGroup, GuardsNonEmptyCheckingSets) {
  const auto base = two_by_two();
  EXPECT_THROW(remove_checking_group(base, CheckingGroupId{"cg1"}), GroupingError);
  EXPECT_THROW(remove_checking_group(base, CheckingGroupId{"nope"}), GroupingError);
}

TEST(AddRemove, RandomSequencesStayValid) {
  std::mt19937_64 rng(11);
  const std::vector<ServerId> all{A1, A2, B1, B2};
  for (int run = 0; run < 50; ++run) {
    auto config = two_by_two();
    int next = 3;
    for (int step = 0; step < 30; ++step) {
      if (rng() % 2) {
        std::set<ServerId> members;
        for (const auto& s : all) {
          if (rng() % 2) members.insert(s);
        }
        if (members.empty()) members.insert(all[rng() % 4]);
        config = add_checking_group(config, CheckingGroupId{"cg" + std::to_string(next++)}, members).config;
      } else {
        auto it = std::next(config.checking.begin(), static_cast<long>(rng() % config.checking.size()));
        try {
          config = remove_checking_group(config, it->first);
        } catch (const GroupingError&) {
        }
      }
      ASSERT_TRUE(validate(config).empty());
    }
  }
}

TEST(SharesKey, Examples) {
  const auto config = two_by_two();
  EXPECT_TRUE(shares_key(config, A1, A2));
  EXPECT_FALSE(shares_key(config, A1, B2));
  EXPECT_TRUE(shares_key(config, A1, A1));
  EXPECT_EQ(config.key_sharing_peers(A1), std::set<ServerId>{A2});
  EXPECT_EQ(config.checking_peers(A1), std::set<ServerId>{B1});
}

TEST(Placement, KeyClasses) {
  EXPECT_EQ(key_class_of("A/counter"), "A");
  EXPECT_EQ(key_class_of("plain"), "plain");
  EXPECT_EQ(key_class_of("A/b/c"), "A");
  const auto config = two_by_two();
  EXPECT_TRUE(config.hosts_key(A1, "A/counter"));
  EXPECT_FALSE(config.hosts_key(B1, "A/counter"));
  EXPECT_THROW(config.hosts("Z/1"), GroupingError);
  EXPECT_EQ(default_checking_group(config, A1), CheckingGroupId{"cg1"});
}

}  // namespace
}  // namespace accf
