#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stackres/expansion.hpp"
#include "stackres/gametext.hpp"
#include "stackres/resilience.hpp"

namespace stackres {

struct GeneratorConfig {
  std::size_t players = 2;
  std::size_t max_depth = 3;  // edges from the root to the deepest leaf
  std::size_t min_branching = 2;
  std::size_t max_branching = 2;
  std::size_t max_leaves = 64;
  // Chance that a node above max_depth gets children. The root always does.
  double internal_probability = 0.75;
  std::uint64_t seed = 1;
  // Each player's leaf payoffs are a permutation of 1..L.
  bool strict_generic = true;

  // Throws std::invalid_argument.
  void check() const;
};

// Seed of the index-th game of a campaign; independent of thread layout.
std::uint64_t game_seed(std::uint64_t master, std::uint64_t index);

// Players are named a, b, c, ...; leaves u1 .. uL left to right.
GameDocument generate(const GeneratorConfig& config);
GameDocument generate(const GeneratorConfig& config, std::uint64_t index);

enum class Property { kTransitivity, kAlgorithm1, kIdempotence };

std::string_view to_string(Property p);
// Throws std::invalid_argument.
Property parse_property(std::string_view name);

struct CampaignOptions {
  std::size_t games = 100;
  std::size_t k_max = 0;  // transitivity only; 0 means every k up to n
  ExpansionBudget budget = ExpansionBudget::from_env();
  EvalMethod method = EvalMethod::kAuto;
  unsigned threads = 0;
};

// Result of checking one game.
struct GameCheck {
  std::size_t checks = 0;        // conclusive comparisons
  std::size_t inconclusive = 0;  // comparisons skipped for the budget
  std::optional<std::string> failure;
  // Transitivity: the verdict for k = 1, 2, ...
  std::vector<Verdict> pattern;
};

GameCheck check_transitivity(const GameTree& tree, std::size_t k_max,
                             const CampaignOptions& options = {});
// Both leader roles of a two-player game: the leading equilibrium against
// the SPE of the contract game for (leader, follower).
GameCheck check_algorithm1(const GameTree& tree, const CampaignOptions& options = {});
// Every player: a second contract for the same player changes nothing.
GameCheck check_idempotence(const GameTree& tree, const CampaignOptions& options = {});

GameCheck check_game(Property property, const GameTree& tree, const CampaignOptions& options = {});

struct Counterexample {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string game_text;
  std::string detail;
};

struct CampaignResult {
  Property property = Property::kTransitivity;
  GeneratorConfig config;
  std::size_t games = 0;
  std::size_t checks = 0;
  std::size_t inconclusive = 0;
  std::vector<Counterexample> counterexamples;
  double millis = 0;
  double max_game_millis = 0;

  bool passed() const { return counterexamples.empty(); }
  double inconclusive_rate() const;
};

CampaignResult run_campaign(Property property, const GeneratorConfig& config,
                            const CampaignOptions& options = {});

CampaignResult check_downward_transitivity(const GeneratorConfig& config, std::size_t k_max,
                                           const CampaignOptions& options = {});
// Requires two players and binary branching; throws std::invalid_argument.
CampaignResult check_algorithm1_agreement(const GeneratorConfig& config,
                                          const CampaignOptions& options = {});
CampaignResult check_idempotence(const GeneratorConfig& config,
                                 const CampaignOptions& options = {});

nlohmann::json to_json(const CampaignResult& result, bool timing = false);
// A header and one summary row.
std::string to_csv(const CampaignResult& result);
// Writes <property>-<index>.game per counterexample; returns the paths.
std::vector<std::filesystem::path> write_counterexamples(const CampaignResult& result,
                                                         const std::filesystem::path& dir);

}  // namespace stackres
