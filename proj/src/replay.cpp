#include "pitchlab/replay.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

namespace pitchlab {

using nlohmann::json;

void TraceWriter::write_tick(const WorldState& world, const std::vector<SimEvent>& events,
                             const std::vector<TeamRuntime::RobotDecision>& decisions) {
  json j;
  j["tick"] = world.tick;
  j["robots"] = json::array();
  for (const auto& r : world.robots) {
    j["robots"].push_back({{"id", r.id},
                           {"team", r.team == Team::HOME ? "HOME" : "AWAY"},
                           {"x", r.pose.x},
                           {"y", r.pose.y},
                           {"theta", r.pose.theta},
                           {"upright", r.upright}});
  }
  j["ball"] = {{"x", world.ball.position.x},
               {"y", world.ball.position.y},
               {"vx", world.ball.velocity.x},
               {"vy", world.ball.velocity.y}};
  j["events"] = json::array();
  for (const auto& e : events) {
    json je{{"kind", to_string(e.kind)}};
    if (e.robot_id >= 0) je["robot_id"] = e.robot_id;
    for (const auto& [k, v] : e.detail) je[k] = v;
    j["events"].push_back(je);
  }
  if (!decisions.empty()) {
    j["selector"] = json::array();
    for (const auto& d : decisions) {
      j["selector"].push_back(
          {{"id", d.robot_id},
           {"policy", d.decision.chosen ? to_string(*d.decision.chosen) : "NONE"},
           {"rule", to_string(d.decision.rule_fired)}});
    }
  }
  out_ << j.dump() << "\n";
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  std::vector<TraceRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    TraceRecord rec;
    rec.tick = j.at("tick").get<std::int64_t>();
    for (const auto& e : j.value("events", json::array()))
      rec.event_kinds.push_back(e.at("kind").get<std::string>());
    rec.raw = line;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace pitchlab
