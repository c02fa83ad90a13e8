// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chcert {

/// Empirical ratio range for one parameter value of a suite, next to the bracket it must respect.
struct SuiteBucket {
  std::string label;  ///< e.g. "beta=2"
  std::size_t cases = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double bracket_lower = 0.0;  ///< tightest lower end seen in the bucket
  double bracket_upper = 0.0;  ///< loosest upper end seen in the bucket
  /// max over cases of ratio / upper and min of ratio / lower: how much of the bracket is used.
  double max_upper_use = 0.0;
  double min_lower_use = 0.0;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_rel_diff = 0.0;  ///< identities: worst relative difference of the two sides
  std::vector<SuiteBucket> buckets;
  std::vector<std::string> failure_examples;  ///< at most five
};

/// abel, sup-sup, tail-power, sum-sum, sum-sup, sup-sum, int-equiv, vp-split.
const std::vector<std::string>& lemma_suite_names();

/// Randomized suite; deterministic in (name, cases, seed). DomainError for an unknown name.
SuiteResult run_lemma_suite(const std::string& name, std::size_t cases, std::uint64_t seed);

}  // namespace chcert
