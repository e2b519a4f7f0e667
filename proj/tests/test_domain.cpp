#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>

#include "atk/domain.hpp"
#include "atk/snifattack.hpp"
#include "test_support.hpp"

using namespace atk;

namespace {

// Written out from the relation vocabulary table, independently of
// signature_of().
const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> kExpectedSignatures = {
    {"pluggedIn", {{"Device"}, {"Device"}}},
    {"logicallyConnectedTo", {{"Device"}, {"RuntimeHost"}}},
    {"installedOn", {{"Software"}, {"RuntimeHost", "Device"}}},
    {"isExecutionOf", {{"RuntimeHost"}, {"Software"}}},
    {"hostedOn", {{"RuntimeHost"}, {"Device"}}},
    {"connectedToNetwork", {{"RuntimeHost"}, {"Network"}}},
    {"providesService", {{"RuntimeHost"}, {"Service"}}},
    {"givesAccessTo", {{"Interface"}, {"Service"}}},
    {"offersFunctionality", {{"Service"}, {"Functionality"}}},
    {"actsOn", {{"Functionality"}, {"DataAsset"}}},
    {"operates", {{"Agent"}, {"RuntimeHost"}}},
    {"owns",
     {{"Owner"}, {"Network", "Device", "Software", "RuntimeHost", "Service", "Interface", "Functionality"}}},
    {"stores", {{"RuntimeHost", "Service"}, {"DataAsset"}}},
    {"contains", {{"DataAsset"}, {"DataAsset"}}},
    {"knows", {{"Agent"}, {"DataAsset"}}},
};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an atk::Error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("SnifAttack context has 4 hosts over 3 networks", "[domain]") {
  const auto ctx = fixtures::snifattack_context();
  const auto hosts = ctx.resources_of_kind(ResourceKind::RuntimeHost);
  CHECK(hosts == std::vector<std::string>{"AttackerHost", "PC", "Router", "Shop"});
  CHECK(ctx.resources_of_kind(ResourceKind::Network).size() == 3);
  CHECK(ctx.resources_of_kind(ResourceKind::Device).size() == 4);
  CHECK(ctx.relations_with(RelationLabel::connectedToNetwork).size() == 6);

  // Every host reaches every other one through some chain of shared networks.
  std::map<std::string, std::set<std::string>> adjacency;
  for (const auto& r : ctx.relations_with(RelationLabel::connectedToNetwork)) {
    adjacency[r.source].insert(r.target);
    adjacency[r.target].insert(r.source);
  }
  std::set<std::string> seen{"AttackerHost"};
  std::vector<std::string> frontier{"AttackerHost"};
  while (!frontier.empty()) {
    auto node = frontier.back();
    frontier.pop_back();
    for (const auto& next : adjacency[node]) {
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  for (const auto& h : hosts) CHECK(seen.contains(h));
}

TEST_CASE("build_context accepts an empty declaration list", "[domain]") {
  const auto ctx = build_context({});
  CHECK(ctx.empty());
}

TEST_CASE("build_context errors name the offending declaration", "[domain]") {
  std::vector<Declaration> decls = {
      ResourceDeclaration{"PortScanner", ResourceKind::Software},
      ResourceDeclaration{"LocalLAN", ResourceKind::Network},
      RelationDeclaration{"PortScanner", RelationLabel::connectedToNetwork, "LocalLAN"},
  };
  try {
    build_context(decls);
    FAIL("expected SignatureViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SignatureViolation);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("declaration #3"));
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("PortScanner connectedToNetwork LocalLAN"));
  }

  std::vector<Declaration> dup = {ResourceDeclaration{"A", ResourceKind::Agent},
                                  ResourceDeclaration{"A", ResourceKind::Owner}};
  CHECK(code_of([&] { build_context(dup); }) == ErrorCode::DuplicateResource);

  std::vector<Declaration> dangling = {ResourceDeclaration{"A", ResourceKind::Agent},
                                       RelationDeclaration{"A", RelationLabel::operates, "Ghost"}};
  CHECK(code_of([&] { build_context(dangling); }) == ErrorCode::UnknownEndpoint);
}

TEST_CASE("resource names reject separators and whitespace", "[domain]") {
  for (std::string bad : {"", "two words", "a:b", "a,b", "say\"", "tab\t"}) {
    CHECK(code_of([&] { ContextBuilder().add_resource(bad, ResourceKind::Agent); }) == ErrorCode::InvalidName);
  }
  CHECK_NOTHROW(ContextBuilder().add_resource("Router-1.eth0_a", ResourceKind::RuntimeHost));
}

TEST_CASE("runtime-host cardinality: one hostedOn, one isExecutionOf", "[domain]") {
  ContextBuilder b;
  b.add_resource("H", ResourceKind::RuntimeHost)
      .add_resource("D1", ResourceKind::Device)
      .add_resource("D2", ResourceKind::Device)
      .add_resource("S1", ResourceKind::Software)
      .add_resource("S2", ResourceKind::Software);
  b.add_relation("H", RelationLabel::hostedOn, "D1").add_relation("H", RelationLabel::isExecutionOf, "S1");
  CHECK(code_of([&] { b.add_relation("H", RelationLabel::hostedOn, "D2"); }) == ErrorCode::CardinalityViolation);
  CHECK(code_of([&] { b.add_relation("H", RelationLabel::isExecutionOf, "S2"); }) == ErrorCode::CardinalityViolation);
  CHECK(code_of([&] { b.add_relation("H", RelationLabel::hostedOn, "D1"); }) == ErrorCode::DuplicateRelation);
}

TEST_CASE("relation signatures are enforced over the full label x kind x kind space", "[domain][property]") {
  REQUIRE(kExpectedSignatures.size() == kAllRelationLabels.size());
  int accepted = 0;
  for (RelationLabel label : kAllRelationLabels) {
    const auto& [sources, targets] = kExpectedSignatures.at(std::string(to_string(label)));
    for (ResourceKind src : kAllResourceKinds) {
      for (ResourceKind dst : kAllResourceKinds) {
        const bool expected = sources.contains(std::string(to_string(src))) &&
                              targets.contains(std::string(to_string(dst)));
        ContextBuilder b;
        b.add_resource("Src", src).add_resource("Dst", dst);
        bool built = true;
        try {
          b.add_relation("Src", label, "Dst");
        } catch (const Error& e) {
          built = false;
          CHECK(e.code() == ErrorCode::SignatureViolation);
        }
        INFO(to_string(label) << " " << to_string(src) << " -> " << to_string(dst));
        CHECK(built == expected);
        accepted += built;
      }
    }
  }
  // 1+1+2+1+1+1+1+1+1+1+1+7+2+1+1
  CHECK(accepted == 23);
}

TEST_CASE("self-loops are rejected for every label", "[domain]") {
  for (RelationLabel label : {RelationLabel::pluggedIn, RelationLabel::contains}) {
    ContextBuilder b;
    b.add_resource("X", label == RelationLabel::pluggedIn ? ResourceKind::Device : ResourceKind::DataAsset);
    CHECK(code_of([&] { b.add_relation("X", label, "X"); }) == ErrorCode::SignatureViolation);
  }
}

TEST_CASE("every relation endpoint of a random context resolves", "[domain][property]") {
  testing::ModelGenerator gen(7);
  for (int i = 0; i < 100; ++i) {
    const auto ctx = gen.context({});
    for (const auto& r : ctx.relations()) {
      REQUIRE(ctx.lookup(r.source));
      REQUIRE(ctx.lookup(r.target));
      CHECK(signature_allows(r.label, ctx.lookup(r.source)->kind, ctx.lookup(r.target)->kind));
    }
  }
}

TEST_CASE("make_property accepts the interface-state and nested-fact shapes", "[domain]") {
  const auto ctx = fixtures::snifattack_context();
  CHECK(make_property(ctx, in_state("SSHPort", InterfaceState::Active)) == in_state("SSHPort", InterfaceState::Active));
  const auto fact4 =
      reasoning("Attacker", ReasoningOperator::Assumes, between("SSHPort", RelationLabel::givesAccessTo, "SSHService"));
  CHECK_NOTHROW(make_property(ctx, fact4));
  CHECK(to_string(fact4) == "assumes(Attacker) = givesAccessTo(SSHPort, SSHService)");
  CHECK(to_string(make_unit_property(ctx, "SSHPort", "isInState", "inactive")) == "isInState(SSHPort) = inactive");
}

TEST_CASE("make_property rejects bad values and kinds", "[domain]") {
  const auto ctx = fixtures::snifattack_context();
  CHECK(code_of([&] { make_unit_property(ctx, "SSHPort", "isInState", "open"); }) == ErrorCode::InvalidStateValue);
  // isInState only on Interfaces
  CHECK(code_of([&] { make_property(ctx, in_state("Router", InterfaceState::Active)); }) ==
        ErrorCode::SignatureViolation);
  // IsGranted only Functionalities, only on Agents
  CHECK(code_of([&] { make_property(ctx, granted("Attacker", "SSHService")); }) == ErrorCode::SignatureViolation);
  CHECK(code_of([&] { make_property(ctx, granted("Router", "Administer")); }) == ErrorCode::SignatureViolation);
  // reasoning only on Agents, and nested facts are checked too
  CHECK(code_of([&] {
          make_property(ctx, reasoning("Router", ReasoningOperator::Concludes,
                                       between("SSHPort", RelationLabel::givesAccessTo, "SSHService")));
        }) == ErrorCode::SignatureViolation);
  CHECK(code_of([&] {
          make_property(ctx, reasoning("Attacker", ReasoningOperator::Assumes,
                                       between("SSHService", RelationLabel::givesAccessTo, "SSHPort")));
        }) == ErrorCode::SignatureViolation);
  CHECK(code_of([&] { make_property(ctx, granted("Attacker", "Nowhere")); }) == ErrorCode::DanglingResource);
  // reserved labels cannot carry scalar values
  CHECK(code_of([&] { make_property(ctx, scalar("Attacker", "IsGranted", "Administer")); }) ==
        ErrorCode::SignatureViolation);
}

TEST_CASE("lookup_resource is exact and case-sensitive", "[domain]") {
  const auto ctx = fixtures::snifattack_context();
  const auto router = lookup_resource(ctx, "Router");
  REQUIRE(router);
  CHECK(router->kind == ResourceKind::RuntimeHost);
  CHECK_FALSE(lookup_resource(ctx, "router"));
  CHECK_FALSE(lookup_resource(ContextGraph{}, "Router"));
}

TEST_CASE("SnifAttack path has six steps indexed 1..6", "[domain]") {
  const auto s = fixtures::snifattack();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < s.path.steps.size(); ++i) {
    CHECK(s.path.steps[i].sequence_index == static_cast<int>(i + 1));
    names.push_back(s.path.steps[i].transition.name);
  }
  CHECK(names == std::vector<std::string>{"Scan", "UseOfDefaults", "Sniffing", "Disclosure", "Discovery", "Checkmate"});
  CHECK(s.path.steps[3].transition.trigger.action == ActionName{"sends", true});
}

TEST_CASE("build_attack_path rejects gaps, duplicates, dangling references and empty objectives", "[domain]") {
  const auto ctx = fixtures::snifattack_context();

  auto gap = fixtures::snifattack_path_spec();
  gap.steps.resize(2);
  gap.steps[1].sequence_index = 3;
  CHECK(code_of([&] { build_attack_path(gap, ctx); }) == ErrorCode::NonContiguousIndices);

  auto dup = fixtures::snifattack_path_spec();
  dup.steps[1].sequence_index = 1;
  CHECK(code_of([&] { build_attack_path(dup, ctx); }) == ErrorCode::NonContiguousIndices);

  auto same_name = fixtures::snifattack_path_spec();
  same_name.steps[2].transition.name = "Scan";
  CHECK(code_of([&] { build_attack_path(same_name, ctx); }) == ErrorCode::DuplicateStepName);

  ContextBuilder b;
  b.add_resource("Attacker", ResourceKind::Agent);
  PathSpec dangling;
  dangling.name = "P";
  dangling.objectives = {granted("Attacker", "Authenticate")};
  CHECK(code_of([&] { build_attack_path(dangling, b.peek()); }) == ErrorCode::DanglingResource);

  auto empty = fixtures::snifattack_path_spec();
  empty.objectives.clear();
  CHECK(code_of([&] { build_attack_path(empty, ctx); }) == ErrorCode::EmptyObjectives);
  CHECK_NOTHROW(build_attack_path(empty, ctx, PathBuildOptions{.allow_empty_objectives = true}));

  auto not_agent = fixtures::snifattack_path_spec();
  not_agent.steps[0].transition.agent = "Router";
  CHECK(code_of([&] { build_attack_path(not_agent, ctx); }) == ErrorCode::SignatureViolation);
}

TEST_CASE("shuffled step indices come back in index order", "[domain][property]") {
  const auto ctx = fixtures::snifattack_context();
  testing::ModelGenerator gen(11);
  for (int round = 0; round < 50; ++round) {
    auto spec = fixtures::snifattack_path_spec();
    for (std::size_t i = spec.steps.size(); i > 1; --i) {
      std::swap(spec.steps[i - 1], spec.steps[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(i) - 1))]);
    }
    const auto path = build_attack_path(spec, ctx);
    for (std::size_t i = 0; i < path.steps.size(); ++i) CHECK(path.steps[i].sequence_index == static_cast<int>(i + 1));
    CHECK(path == fixtures::snifattack().path);
  }
}

TEST_CASE("action vocabulary: built-in defaults and document overrides", "[domain]") {
  ActionVocabulary v;
  CHECK(v.find("scans") == ActionName{"scans", false});
  CHECK(v.find("stores") == ActionName{"stores", true});
  CHECK_FALSE(v.find("pivots"));
  v.declare("pivots", true);
  v.declare("scans", true);
  CHECK(v.find("pivots") == ActionName{"pivots", true});
  CHECK(v.find("scans") == ActionName{"scans", true});
}

TEST_CASE("properties order and compare structurally, nested facts included", "[domain]") {
  const auto a = reasoning("Ag", ReasoningOperator::Assumes, between("I", RelationLabel::givesAccessTo, "S"));
  const auto b = reasoning("Ag", ReasoningOperator::Assumes, between("I", RelationLabel::givesAccessTo, "S"));
  const auto c = reasoning("Ag", ReasoningOperator::Assumes, between("I", RelationLabel::givesAccessTo, "T"));
  CHECK(a == b);
  CHECK(a != c);
  CHECK((a < c) != (c < a));
  PropertySet set{a, b, c};
  CHECK(set.size() == 2);
}
