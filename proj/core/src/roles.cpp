#include "parmax/roles.hpp"

#include "parmax/errors.hpp"

namespace parmax {

std::string_view role_name(AgentRole role) {
  switch (role) {
    case AgentRole::Video: return "video";
    case AgentRole::Code: return "code";
    case AgentRole::Guidance: return "guidance";
    case AgentRole::Synthesizer: return "synthesizer";
  }
  throw ValidationError("unknown agent role value");
}

AgentRole role_from_name(std::string_view name) {
  for (AgentRole r : kAllRoles) {
    if (role_name(r) == name) return r;
  }
  throw ValidationError("unknown agent role '" + std::string(name) +
                        "' (expected video|code|guidance|synthesizer)");
}

std::string_view tier_name(TierKind tier) {
  switch (tier) {
    case TierKind::StandardShared: return "standard";
    case TierKind::PriorityQueue: return "priority";
    case TierKind::ReservedCapacity: return "provisioned";
  }
  throw ValidationError("unknown tier value");
}

TierKind tier_from_name(std::string_view name) {
  for (TierKind t : kAllTiers) {
    if (tier_name(t) == name) return t;
  }
  throw ValidationError("unknown tier '" + std::string(name) +
                        "' (expected standard|priority|provisioned)");
}

}  // namespace parmax
