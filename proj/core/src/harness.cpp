#include "stackres/harness.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "internal.hpp"
#include "stackres/errors.hpp"
#include "stackres/inducible.hpp"

namespace stackres {

void GeneratorConfig::check() const {
  if (players < 2 || players > 26) throw std::invalid_argument("players must be between 2 and 26");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
  if (min_branching < 2 || max_branching < min_branching) {
    throw std::invalid_argument("branching must satisfy 2 <= min <= max");
  }
  if (max_leaves < min_branching) throw std::invalid_argument("max_leaves is below the branching");
  if (!(internal_probability >= 0 && internal_probability <= 1)) {
    throw std::invalid_argument("internal_probability must lie in [0, 1]");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Draws are done by hand so that games do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct Shape {
  PlayerId owner{};
  std::vector<Shape> children;
};

class ShapeBuilder {
 public:
  ShapeBuilder(const GeneratorConfig& config, Rng& rng) : config_(config), rng_(rng) {}

  Shape build(std::size_t depth) {
    Shape s;
    const bool wants_children =
        depth < config_.max_depth && (depth == 0 || rng_.unit() < config_.internal_probability);
    if (!wants_children) return s;
    std::size_t b = config_.min_branching +
                    rng_.below(config_.max_branching - config_.min_branching + 1);
    b = std::min(b, config_.max_leaves - open_ + 1);
    if (b < config_.min_branching) return s;
    open_ += b - 1;
    s.owner = PlayerId(static_cast<std::uint32_t>(rng_.below(config_.players)));
    for (std::size_t i = 0; i < b; ++i) s.children.push_back(build(depth + 1));
    return s;
  }

 private:
  const GeneratorConfig& config_;
  Rng& rng_;
  std::size_t open_ = 1;  // leaves of the shape built so far
};

std::size_t count_leaves(const Shape& s) {
  if (s.children.empty()) return 1;
  std::size_t n = 0;
  for (const auto& c : s.children) n += count_leaves(c);
  return n;
}

Draft to_draft(const Shape& s, const std::vector<std::vector<std::int64_t>>& payoffs,
               std::size_t& next_leaf) {
  if (s.children.empty()) {
    const std::size_t leaf = next_leaf++;
    UtilityVector u;
    for (const auto& column : payoffs) u.emplace_back(Rational(column[leaf]));
    return Draft::leaf(std::move(u), "u" + std::to_string(leaf + 1));
  }
  std::vector<Draft> children;
  for (const auto& c : s.children) children.push_back(to_draft(c, payoffs, next_leaf));
  return Draft::node(s.owner, std::move(children));
}

GameDocument generate_with_seed(const GeneratorConfig& config, std::uint64_t seed,
                                std::string name) {
  config.check();
  Rng rng(seed);
  const Shape shape = ShapeBuilder(config, rng).build(0);
  const std::size_t leaves = count_leaves(shape);

  std::vector<std::vector<std::int64_t>> payoffs(config.players);
  for (auto& column : payoffs) {
    column.resize(leaves);
    if (config.strict_generic) {
      for (std::size_t i = 0; i < leaves; ++i) column[i] = static_cast<std::int64_t>(i + 1);
      for (std::size_t i = leaves; i > 1; --i) std::swap(column[i - 1], column[rng.below(i)]);
    } else {
      for (auto& v : column) v = static_cast<std::int64_t>(rng.below(leaves));
    }
  }

  std::vector<std::string> names;
  for (std::size_t p = 0; p < config.players; ++p) names.emplace_back(1, static_cast<char>('a' + p));
  std::size_t next_leaf = 0;
  GameDocument doc;
  doc.name = std::move(name);
  doc.tree = build_tree(std::move(names), to_draft(shape, payoffs, next_leaf));
  return doc;
}

}  // namespace

std::uint64_t game_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

GameDocument generate(const GeneratorConfig& config) {
  return generate_with_seed(config, config.seed, "generated");
}

GameDocument generate(const GeneratorConfig& config, std::uint64_t index) {
  return generate_with_seed(config, game_seed(config.seed, index),
                            "generated-" + std::to_string(index));
}

std::string_view to_string(Property p) {
  switch (p) {
    case Property::kTransitivity:
      return "transitivity";
    case Property::kAlgorithm1:
      return "algorithm1";
    case Property::kIdempotence:
      return "idempotence";
  }
  return "transitivity";
}

Property parse_property(std::string_view name) {
  for (Property p : {Property::kTransitivity, Property::kAlgorithm1, Property::kIdempotence}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown property " + std::string(name) +
                              " (expected transitivity, algorithm1 or idempotence)");
}

GameCheck check_transitivity(const GameTree& tree, std::size_t k_max,
                             const CampaignOptions& options) {
  const std::size_t n = tree.player_count();
  if (k_max == 0 || k_max > n) k_max = n;
  ResilienceOptions ro;
  ro.budget = options.budget;
  ro.method = options.method;
  ro.threads = 1;
  ro.fast_path = false;

  GameCheck out;
  std::vector<const OrderResult*> failing(k_max + 1, nullptr);
  std::vector<ResilienceReport> reports;
  reports.reserve(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    reports.push_back(k_resilient(tree, k, ro));
    for (const auto& o : reports.back().orders) {
      if (o.verdict == Verdict::kInconclusive) {
        ++out.inconclusive;
      } else {
        ++out.checks;
      }
    }
    out.pattern.push_back(reports.back().verdict);
    failing[k] = reports.back().first_counterexample();
  }
  const auto& table = tree.outcomes();
  for (std::size_t k = 2; k <= k_max && !out.failure; ++k) {
    if (out.pattern[k - 1] != Verdict::kResilient) continue;
    for (std::size_t l = 1; l < k; ++l) {
      if (failing[l]) {
        out.failure = std::to_string(k) + "-resilient but order " +
                      failing[l]->order.to_string(table) + " is not resilient";
        break;
      }
    }
  }
  return out;
}

GameCheck check_algorithm1(const GameTree& tree, const CampaignOptions& options) {
  GameCheck out;
  const auto& table = tree.outcomes();
  for (const auto& order : injective_orders(tree.player_count(), 2)) {
    const LeadingEquilibrium lead = leading_equilibrium(tree, order.leader());
    try {
      const OrderEvaluation ev = evaluate_order(tree, order, options.method, options.budget);
      ++out.checks;
      if (ev.payoffs != lead.payoffs && !out.failure) {
        out.failure = "order " + order.to_string(table) + ": leading equilibrium " +
                      to_string(lead.payoffs) + " but contract game SPE " + to_string(ev.payoffs);
      }
    } catch (const BudgetExceeded&) {
      ++out.inconclusive;
    }
  }
  return out;
}

GameCheck check_idempotence(const GameTree& tree, const CampaignOptions& options) {
  GameCheck out;
  const auto& table = tree.outcomes();
  for (std::uint32_t p = 0; p < tree.player_count(); ++p) {
    const PlayerId player(p);
    try {
      const GameTree once = expand_one(tree, player, options.budget);
      const UtilityVector first = spe(once).payoffs;
      // The lazy route stands in for expanding `once` a second time.
      const UtilityVector second =
          evaluate_order(once, ContractOrder({player}), options.method, options.budget).payoffs;
      ++out.checks;
      if (first != second && !out.failure) {
        out.failure = "player " + table.player_name(player) + ": one contract gives " +
                      to_string(first) + ", two give " + to_string(second);
      }
    } catch (const BudgetExceeded&) {
      ++out.inconclusive;
    }
  }
  return out;
}

GameCheck check_game(Property property, const GameTree& tree, const CampaignOptions& options) {
  switch (property) {
    case Property::kTransitivity:
      return check_transitivity(tree, options.k_max, options);
    case Property::kAlgorithm1:
      return check_algorithm1(tree, options);
    case Property::kIdempotence:
      return check_idempotence(tree, options);
  }
  throw std::logic_error("unknown property");
}

double CampaignResult::inconclusive_rate() const {
  const std::size_t total = checks + inconclusive;
  return total == 0 ? 0.0 : static_cast<double>(inconclusive) / static_cast<double>(total);
}

CampaignResult run_campaign(Property property, const GeneratorConfig& config,
                            const CampaignOptions& options) {
  config.check();
  if (property == Property::kAlgorithm1 && (config.players != 2 || config.max_branching != 2)) {
    throw std::invalid_argument("the algorithm1 check needs two players and binary branching");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  struct Slot {
    GameCheck check;
    std::string text;
    double millis = 0;
  };
  std::vector<Slot> slots(options.games);
  detail::parallel_for(options.games, options.threads, [&](std::size_t i) {
    const auto game_start = Clock::now();
    const GameDocument doc = generate(config, i);
    slots[i].check = check_game(property, doc.tree, options);
    if (slots[i].check.failure) slots[i].text = serialize(doc);
    slots[i].millis = std::chrono::duration<double, std::milli>(Clock::now() - game_start).count();
  });

  CampaignResult r;
  r.property = property;
  r.config = config;
  r.games = options.games;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot& s = slots[i];
    r.checks += s.check.checks;
    r.inconclusive += s.check.inconclusive;
    r.max_game_millis = std::max(r.max_game_millis, s.millis);
    if (s.check.failure) {
      r.counterexamples.push_back({i, game_seed(config.seed, i), s.text, *s.check.failure});
    }
  }
  r.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

CampaignResult check_downward_transitivity(const GeneratorConfig& config, std::size_t k_max,
                                           const CampaignOptions& options) {
  if (k_max > config.players) throw std::invalid_argument("k_max exceeds the number of players");
  CampaignOptions o = options;
  o.k_max = k_max;
  return run_campaign(Property::kTransitivity, config, o);
}

CampaignResult check_algorithm1_agreement(const GeneratorConfig& config,
                                          const CampaignOptions& options) {
  return run_campaign(Property::kAlgorithm1, config, options);
}

CampaignResult check_idempotence(const GeneratorConfig& config, const CampaignOptions& options) {
  return run_campaign(Property::kIdempotence, config, options);
}

nlohmann::json to_json(const CampaignResult& r, bool timing) {
  const GeneratorConfig& c = r.config;
  nlohmann::json counterexamples = nlohmann::json::array();
  for (const auto& x : r.counterexamples) {
    counterexamples.push_back(
        {{"index", x.index}, {"seed", x.seed}, {"detail", x.detail}, {"game", x.game_text}});
  }
  nlohmann::json out = {
      {"property", to_string(r.property)},
      {"config",
       {{"players", c.players},
        {"max_depth", c.max_depth},
        {"min_branching", c.min_branching},
        {"max_branching", c.max_branching},
        {"max_leaves", c.max_leaves},
        {"internal_probability", c.internal_probability},
        {"seed", c.seed},
        {"strict_generic", c.strict_generic}}},
      {"games", r.games},
      {"checks", r.checks},
      {"inconclusive", r.inconclusive},
      {"counterexamples", counterexamples},
      {"passed", r.passed()},
  };
  if (timing) {
    out["millis"] = r.millis;
    out["max_game_millis"] = r.max_game_millis;
  }
  return out;
}

std::string to_csv(const CampaignResult& r) {
  std::ostringstream out;
  out << "property,players,max_depth,max_leaves,seed,games,checks,inconclusive,counterexamples\n"
      << to_string(r.property) << ',' << r.config.players << ',' << r.config.max_depth << ','
      << r.config.max_leaves << ',' << r.config.seed << ',' << r.games << ',' << r.checks << ','
      << r.inconclusive << ',' << r.counterexamples.size() << '\n';
  return out.str();
}

std::vector<std::filesystem::path> write_counterexamples(const CampaignResult& r,
                                                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& x : r.counterexamples) {
    auto path = dir / (std::string(to_string(r.property)) + "-" + std::to_string(x.index) + ".game");
    std::ofstream f(path);
    f << "; seed " << x.seed << ": " << x.detail << '\n' << x.game_text;
    if (!f) throw std::runtime_error("cannot write " + path.string());
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace stackres
