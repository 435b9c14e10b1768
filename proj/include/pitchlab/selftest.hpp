#pragma once

#include <string>

#include "pitchlab/config.hpp"

namespace pitchlab {

struct SelftestResult {
  double low_steps_per_second = 0.0;  // 4-robot LOW-profile stepping, one thread
  bool determinism_ok = false;        // bit-identical reruns, LOW and HIGH
  bool frame_roundtrip_ok = false;
  bool passed = false;
  std::string summary_json;
};

// Quick self-checks plus the single-core throughput benchmark.
SelftestResult run_selftest(const Config& cfg, int bench_steps = 200000);

}  // namespace pitchlab
