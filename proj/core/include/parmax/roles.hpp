#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace parmax {

// The four agents of the tutoring pipeline. Video, Code, and Guidance run
// fanned out in parallel; the Synthesizer runs after all three return.
enum class AgentRole : std::uint8_t { Video = 0, Code = 1, Guidance = 2, Synthesizer = 3 };

inline constexpr std::array<AgentRole, 4> kAllRoles = {
    AgentRole::Video, AgentRole::Code, AgentRole::Guidance, AgentRole::Synthesizer};
inline constexpr std::array<AgentRole, 3> kParallelRoles = {
    AgentRole::Video, AgentRole::Code, AgentRole::Guidance};

std::string_view role_name(AgentRole role);
AgentRole role_from_name(std::string_view name);  // throws ValidationError

// Inference serving tiers under comparison.
enum class TierKind : std::uint8_t { StandardShared = 0, PriorityQueue = 1, ReservedCapacity = 2 };

inline constexpr std::array<TierKind, 3> kAllTiers = {
    TierKind::StandardShared, TierKind::PriorityQueue, TierKind::ReservedCapacity};

// Short names used in file names, CSV cells, and CLI flags.
std::string_view tier_name(TierKind tier);
TierKind tier_from_name(std::string_view name);  // throws ValidationError

// Small value map keyed by role; cheaper and more predictable than std::map
// for a four-entry domain.
template <typename T>
class RoleMap {
 public:
  T& operator[](AgentRole r) { return values_[static_cast<std::size_t>(r)]; }
  const T& operator[](AgentRole r) const { return values_[static_cast<std::size_t>(r)]; }
  bool operator==(const RoleMap&) const = default;

 private:
  std::array<T, 4> values_{};
};

}  // namespace parmax
