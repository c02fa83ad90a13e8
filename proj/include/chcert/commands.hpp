// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "chcert/config.hpp"

namespace chcert {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

/// Each command returns the finished report text (JSON, or CSV for sweeps).
/// Reports depend only on the config; `timings` adds a wall-clock block and is
/// the one field that varies between runs.
std::string cmd_certify(const RunConfig& cfg, bool timings = false);
std::string cmd_discretize(const RunConfig& cfg, bool timings = false);
std::string cmd_oracle(const RunConfig& cfg, bool timings = false);
std::string cmd_lemma_test(const RunConfig& cfg, bool timings = false);
std::string cmd_sweep(const RunConfig& cfg);

/// Fixed column order of the sweep CSV.
const std::vector<std::string>& sweep_columns();

}  // namespace chcert
