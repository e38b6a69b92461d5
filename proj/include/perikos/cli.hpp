#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "serialize.hpp"

namespace perikos::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kInternal = 1, kDomain = 2, kPrecision = 3, kSchema = 4 };

struct Outcome {
  Json document;
  int exit_code = kOk;
};

/// Fallback precision block: prime, absolute precision, truncation order.
struct PrecBlock {
  std::int64_t p = 2;
  std::int64_t precision = 20;
  std::int64_t order = 20;
};

/// Reads a strict {"p", "precision", "order"} object over `base`.
PrecBlock prec_block(const Json& j, PrecBlock base = {});

/// PERIKOS_DEFAULT_PREC holds a JSON object such as {"p":5,"precision":30}.
PrecBlock default_prec_block();

Json prec_json(const PrecBlock& b);

std::vector<std::string> command_names();

/// Runs one job {"schema_version", "command", "params", "seed", "prec"}.
Outcome run(const Json& job, const PrecBlock& defaults = {});

}  // namespace perikos::cli
