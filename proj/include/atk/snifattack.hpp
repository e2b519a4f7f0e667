#pragma once

// SnifAttack: an attacker takes over the LAN router through default SSH
// credentials, sniffs the victim's login to a web shop and reuses it.
// Four runtime-hosts (AttackerHost, Router, PC, Shop) on three networks.

#include "atk/domain.hpp"
#include "atk/interchange.hpp"

namespace atk::fixtures {

inline ContextGraph snifattack_context() {
  using K = ResourceKind;
  using L = RelationLabel;
  ContextBuilder b;
  b.add_resource("Attacker", K::Agent).add_resource("ActingVictim", K::Agent);
  for (auto host : {"AttackerHost", "Router", "PC", "Shop"}) b.add_resource(host, K::RuntimeHost);
  for (auto device : {"AttackerDevice", "RouterDevice", "PCDevice", "ShopDevice"}) b.add_resource(device, K::Device);
  for (auto network : {"LocalLAN", "AdjacentLAN", "Internet"}) b.add_resource(network, K::Network);
  b.add_resource("PortScanner", K::Software).add_resource("VyOS", K::Software);
  for (auto service : {"SSHService", "RoutingService", "WebShopService"}) b.add_resource(service, K::Service);
  b.add_resource("SSHPort", K::Interface).add_resource("ShopLoginPage", K::Interface);
  b.add_resource("Administer", K::Functionality).add_resource("Authenticate", K::Functionality);
  b.add_resource("VictimCredentials", K::DataAsset).add_resource("CollectedTraffic", K::DataAsset);

  b.add_relation("Attacker", L::operates, "AttackerHost").add_relation("ActingVictim", L::operates, "PC");
  b.add_relation("AttackerHost", L::hostedOn, "AttackerDevice")
      .add_relation("Router", L::hostedOn, "RouterDevice")
      .add_relation("PC", L::hostedOn, "PCDevice")
      .add_relation("Shop", L::hostedOn, "ShopDevice");
  b.add_relation("AttackerHost", L::connectedToNetwork, "LocalLAN")
      .add_relation("Router", L::connectedToNetwork, "LocalLAN")
      .add_relation("Router", L::connectedToNetwork, "AdjacentLAN")
      .add_relation("Router", L::connectedToNetwork, "Internet")
      .add_relation("PC", L::connectedToNetwork, "AdjacentLAN")
      .add_relation("Shop", L::connectedToNetwork, "Internet");
  b.add_relation("PortScanner", L::installedOn, "AttackerHost").add_relation("Router", L::isExecutionOf, "VyOS");
  b.add_relation("Router", L::providesService, "SSHService")
      .add_relation("Router", L::providesService, "RoutingService")
      .add_relation("Shop", L::providesService, "WebShopService");
  b.add_relation("SSHPort", L::givesAccessTo, "SSHService").add_relation("ShopLoginPage", L::givesAccessTo, "WebShopService");
  b.add_relation("SSHService", L::offersFunctionality, "Administer")
      .add_relation("WebShopService", L::offersFunctionality, "Authenticate")
      .add_relation("Authenticate", L::actsOn, "VictimCredentials");
  return std::move(b).build();
}

inline PathSpec snifattack_path_spec() {
  using L = RelationLabel;
  PathSpec spec;
  spec.name = "SnifAttack";
  spec.description =
      "An attacker steals the credentials that a victim uses to connect to a shopping website in order to access "
      "his/her account.";
  spec.prerequisites = {in_state("SSHPort", InterfaceState::Active),
                        scalar("SSHService", "usesDefaultCredentials", "true")};
  spec.objectives = {granted("Attacker", "Authenticate")};

  auto step = [&spec](std::string name, std::string description, std::string agent, std::string verb,
                      PropertySet pre, PropertySet post, std::vector<std::string> internal = {}) {
    spec.steps.push_back(StepSpec{static_cast<int>(spec.steps.size() + 1),
                                  TransitionSpec{std::move(name), std::move(description), std::move(agent),
                                                 std::move(verb), std::move(pre), std::move(post),
                                                 std::move(internal)}});
  };
  step("Scan", "The attacker scans its local network gateway, then finds a listening SSH service.", "Attacker",
       "scans", {in_state("SSHPort", InterfaceState::Active)},
       {reasoning("Attacker", ReasoningOperator::Assumes, between("SSHPort", L::givesAccessTo, "SSHService"))});
  step("UseOfDefaults", "The attacker uses default cedentials to take control of the router.", "Attacker", "claims",
       {scalar("SSHService", "usesDefaultCredentials", "true")}, {granted("Attacker", "Administer")});
  step("Sniffing", "The attacker has the router do the collecting of all traffic passing through.", "Attacker",
       "stores", {granted("Attacker", "Administer")}, {between("Router", L::stores, "CollectedTraffic")});
  step("Disclosure", "The victim sends his/her credentials to log on the website.", "ActingVictim", "sends",
       {between("PC", L::connectedToNetwork, "AdjacentLAN")},
       {between("CollectedTraffic", L::contains, "VictimCredentials")});
  step("Discovery", "The attacker finds out the victim`s credentials from reading the collected traffic.",
       "Attacker", "reads",
       {between("Router", L::stores, "CollectedTraffic"), between("CollectedTraffic", L::contains, "VictimCredentials")},
       {between("Attacker", L::knows, "VictimCredentials")},
       {"retrieves a local copy of the collected trafic's dump file"});
  step("Checkmate", "The attacker authenticates with the victim`s credentials on the website.", "Attacker",
       "authenticates", {between("Attacker", L::knows, "VictimCredentials")}, {granted("Attacker", "Authenticate")});
  return spec;
}

inline Scenario snifattack() {
  auto context = snifattack_context();
  auto path = build_attack_path(snifattack_path_spec(), context);
  return Scenario{std::move(context), std::move(path)};
}

/// The six SnifAttack actions as a linear state-enumeration graph.
inline constexpr std::string_view kSnifAttackStateGraph = R"(# SnifAttack as a state-enumeration attack graph
attackgraph "SnifAttack"
states: s0 s1 s2 s3 s4 s5 s6
initial: s0
goal: s6
trans s0 -> s1 : scans
trans s1 -> s2 : claims
trans s2 -> s3 : stores
trans s3 -> s4 : sends
trans s4 -> s5 : reads
trans s5 -> s6 : authenticates
)";

}  // namespace atk::fixtures
