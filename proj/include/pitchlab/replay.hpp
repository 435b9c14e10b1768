#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pitchlab/behavior.hpp"
#include "pitchlab/simulator.hpp"

namespace pitchlab {

// JSON-lines replay trace, one record per tick:
//   {"tick":N,"robots":[{"id","team","x","y","theta","upright"}],
//    "ball":{"x","y","vx","vy"},"events":[...],"selector":[...]}
// Serialization is bit-exact across runs with equal seeds on one build.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}

  void write_tick(const WorldState& world, const std::vector<SimEvent>& events,
                  const std::vector<TeamRuntime::RobotDecision>& decisions = {});

 private:
  std::ostream& out_;
};

struct TraceRecord {
  std::int64_t tick = 0;
  std::vector<std::string> event_kinds;
  std::string raw;  // full JSON line
};

std::vector<TraceRecord> read_trace(const std::string& path);

}  // namespace pitchlab
