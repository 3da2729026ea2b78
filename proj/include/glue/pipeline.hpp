#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "glue/io.hpp"

namespace glue {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct PipelineOptions {
  std::optional<std::string> variant;  // overrides the document's variant
  std::uint64_t seed = kDefaultSeed;
  int cones = 16;  // random cones for the sampled universal-property check (top kind)
};

struct PipelineResult {
  io::json report;     // sorted keys, no timings
  io::json glued;      // dump of the constructed object
  std::string dot;     // specialization diagram of the glued (or base) space
  bool verdict = false;
  double seconds = 0;
};

// Seed from GLUE_SEED when set, else kDefaultSeed.
std::uint64_t seed_from_env();

// Applies the variant override; "sch" throws Unsupported.
io::GluingDocument apply_variant(const io::json& doc, const std::optional<std::string>& variant);

// Builds the standard representative for the document and runs the matching
// verifier.  Invalid gluing data throws GluingDataError; executed conclusions
// that fail throw Falsification.
PipelineResult run_pipeline(const io::GluingDocument& doc, const PipelineOptions& opt);

// Structured payload for an exception escaping the pipeline, and its exit code.
io::json error_payload(const std::exception& e);
int exit_code_for(const std::exception& e);

}  // namespace glue
