#include "qtrack/event_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "qtrack/errors.hpp"

namespace qtrack {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void validate_event(const Event& event) {
  std::set<int> hit_ids;
  for (const Hit& h : event.hits) {
    if (!hit_ids.insert(h.id).second)
      throw DataError("duplicate hit id " + std::to_string(h.id));
  }

  // Hits on one module must share a z plane; module order must follow z.
  std::map<int, double> module_z;
  for (const Hit& h : event.hits) {
    auto [it, inserted] = module_z.emplace(h.module, h.z);
    if (!inserted && std::abs(h.z - it->second) > 1e-6)
      throw DataError("module " + std::to_string(h.module) +
                      " spans inconsistent z positions");
  }
  double prev_z = 0.0;
  bool first = true;
  for (const auto& [mod, z] : module_z) {
    if (!first && z <= prev_z)
      throw DataError("module " + std::to_string(mod) +
                      " breaks increasing-z ordering");
    prev_z = z;
    first = false;
  }

  std::set<int> particle_ids;
  for (const TruthParticle& p : event.particles) {
    if (!particle_ids.insert(p.id).second)
      throw DataError("duplicate particle id " + std::to_string(p.id));
    double norm2 = p.direction[0] * p.direction[0] +
                   p.direction[1] * p.direction[1] +
                   p.direction[2] * p.direction[2];
    if (std::abs(norm2 - 1.0) > 1e-9)
      throw DataError("particle " + std::to_string(p.id) +
                      " direction is not unit length");
    for (int hid : p.hit_ids) {
      if (!hit_ids.count(hid))
        throw DataError("particle " + std::to_string(p.id) +
                        " references missing hit " + std::to_string(hid));
    }
  }
}

void finalize_event(Event& event) {
  std::set<int> seen;
  for (const Hit& h : event.hits) {
    if (!seen.insert(h.id).second)
      throw DataError("duplicate hit id " + std::to_string(h.id));
  }

  bool dense = true;
  for (std::size_t i = 0; i < event.hits.size(); ++i) {
    if (event.hits[i].id != static_cast<int>(i)) {
      dense = false;
      break;
    }
  }
  if (!dense) {
    std::unordered_map<int, int> remap;
    event.original_hit_ids.resize(event.hits.size());
    for (std::size_t i = 0; i < event.hits.size(); ++i) {
      event.original_hit_ids[i] = event.hits[i].id;
      remap[event.hits[i].id] = static_cast<int>(i);
      event.hits[i].id = static_cast<int>(i);
    }
    for (TruthParticle& p : event.particles)
      for (int& hid : p.hit_ids) {
        auto it = remap.find(hid);
        if (it == remap.end())
          throw DataError("particle " + std::to_string(p.id) +
                          " references missing hit " + std::to_string(hid));
        hid = it->second;
      }
  }

  validate_event(event);
}

std::string event_to_json(const Event& event) {
  json j;
  j["geometry_id"] = event.geometry_id;
  j["hits"] = json::array();
  for (const Hit& h : event.hits) {
    json jh;
    jh["id"] = h.id;
    jh["x"] = h.x;
    jh["y"] = h.y;
    jh["z"] = h.z;
    jh["module"] = h.module;
    if (h.truth_id)
      jh["truth_id"] = *h.truth_id;
    else
      jh["truth_id"] = nullptr;
    j["hits"].push_back(std::move(jh));
  }
  j["particles"] = json::array();
  for (const TruthParticle& p : event.particles) {
    json jp;
    jp["id"] = p.id;
    jp["origin"] = p.origin;
    jp["direction"] = p.direction;
    jp["hit_ids"] = p.hit_ids;
    j["particles"].push_back(std::move(jp));
  }
  if (!event.original_hit_ids.empty())
    j["original_hit_ids"] = event.original_hit_ids;
  return j.dump(2) + "\n";
}

Event event_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("event json: ") + e.what());
  }
  Event event;
  try {
    event.geometry_id = j.value("geometry_id", std::string());
    for (const json& jh : j.at("hits")) {
      Hit h;
      h.id = jh.at("id").get<int>();
      h.x = jh.at("x").get<double>();
      h.y = jh.at("y").get<double>();
      h.z = jh.at("z").get<double>();
      h.module = jh.at("module").get<int>();
      if (jh.contains("truth_id") && !jh.at("truth_id").is_null())
        h.truth_id = jh.at("truth_id").get<int>();
      event.hits.push_back(h);
    }
    if (j.contains("particles"))
      for (const json& jp : j.at("particles")) {
        TruthParticle p;
        p.id = jp.at("id").get<int>();
        p.origin = jp.at("origin").get<std::array<double, 3>>();
        p.direction = jp.at("direction").get<std::array<double, 3>>();
        p.hit_ids = jp.value("hit_ids", std::vector<int>());
        event.particles.push_back(std::move(p));
      }
  } catch (const json::exception& e) {
    throw DataError(std::string("event json: ") + e.what());
  }
  return event;
}

std::string event_to_csv(const Event& event) {
  std::string out = "id,x,y,z,module,truth_id\n";
  for (const Hit& h : event.hits) {
    out += std::to_string(h.id);
    out += ',';
    out += format_double(h.x);
    out += ',';
    out += format_double(h.y);
    out += ',';
    out += format_double(h.z);
    out += ',';
    out += std::to_string(h.module);
    out += ',';
    if (h.truth_id) out += std::to_string(*h.truth_id);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

int parse_int(const std::string& s, int line_no, const char* field) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("event csv line " + std::to_string(line_no) + ": bad " +
                    field + " value '" + s + "'");
  return value;
}

double parse_real(const std::string& s, int line_no, const char* field) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("event csv line " + std::to_string(line_no) + ": bad " +
                    field + " value '" + s + "'");
  return value;
}

}  // namespace

Event event_from_csv(const std::string& text) {
  Event event;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "id,x,y,z,module,truth_id")
        throw DataError("event csv line 1: unexpected header '" + line + "'");
      saw_header = true;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != 6)
      throw DataError("event csv line " + std::to_string(line_no) +
                      ": expected 6 fields, got " +
                      std::to_string(fields.size()));
    Hit h;
    h.id = parse_int(fields[0], line_no, "id");
    h.x = parse_real(fields[1], line_no, "x");
    h.y = parse_real(fields[2], line_no, "y");
    h.z = parse_real(fields[3], line_no, "z");
    h.module = parse_int(fields[4], line_no, "module");
    if (!fields[5].empty()) h.truth_id = parse_int(fields[5], line_no, "truth_id");
    event.hits.push_back(h);
  }
  if (!saw_header) throw DataError("event csv: missing header");
  return event;
}

Event read_event(const std::filesystem::path& path, EventFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open event file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Event event = format == EventFormat::json ? event_from_json(buf.str())
                                            : event_from_csv(buf.str());
  finalize_event(event);
  return event;
}

void write_event(const Event& event, const std::filesystem::path& path,
                 EventFormat format) {
  validate_event(event);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file " + path.string());
  out << (format == EventFormat::json ? event_to_json(event)
                                      : event_to_csv(event));
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace qtrack
