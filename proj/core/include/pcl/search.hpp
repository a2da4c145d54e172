#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcl/calculus.hpp"

namespace pcl {

struct Budget {
  std::size_t max_nodes = 200000;
  std::size_t max_labels = 5000;
  std::optional<std::chrono::milliseconds> wall_clock;
};

enum class Verdict { Provable, Refutable, Unknown };

std::string_view verdict_name(Verdict v);

struct TraceEvent {
  std::size_t step = 0;
  std::size_t depth = 0;
  std::size_t node = 0;
  RuleId rule = RuleId::Init;
  bool dynamic = false;
  std::vector<LabelledFormula> principal;
  std::vector<Label> fresh;
};

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t max_labels = 0;
  std::size_t steps = 0;
  std::chrono::microseconds elapsed{0};
};

struct SearchOutcome {
  Verdict verdict = Verdict::Unknown;
  // Set when Provable.
  std::optional<Derivation> derivation;
  // Set when Refutable.  On Unknown it may hold a saturated branch whose
  // countermodel could not be confirmed.
  std::optional<Branch> leaf;
  std::string reason;
  std::vector<TraceEvent> trace;
  SearchStats stats;
};

struct SearchOptions {
  bool record_trace = false;
  // Called before each rule firing with the branch and the chosen instance.
  // The instance carries deltas only; its premises list is empty.
  std::function<void(const Branch&, const RuleInstance&)> observer;
  // Branches deeper than this wait for shallower ones; the limit doubles
  // each round.
  std::size_t initial_depth_limit = 256;
};

SearchOutcome prove(Formula f, const Logic& logic, const Budget& budget = {},
                    const SearchOptions& options = {});

struct SaturationReport {
  bool saturated = false;
  bool closed = false;
  // First rule (in strategy order) whose saturation condition is unmet.
  std::optional<RuleId> unmet;
  std::string detail;
};

SaturationReport is_saturated(const Branch& branch, const Logic& logic);

const std::vector<TraceEvent>& search_trace(const SearchOutcome& outcome);

}  // namespace pcl
