#include "rideshare/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"

namespace rideshare {

using detail::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

void read_user(const json& j, const std::string& path, const std::unordered_map<std::string, int>& loc_index,
               User& u) {
  u.id = detail::text(j, "id", path);
  const auto resolve = [&](const char* key) {
    const auto name = detail::text(j, key, path);
    const auto it = loc_index.find(name);
    if (it == loc_index.end()) throw ParseError(path + "." + key + ": unknown location '" + name + "'");
    return it->second;
  };
  u.origin = resolve("origin");
  u.destination = resolve("destination");
  const auto& w = detail::field(j, "window", path);
  if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
    throw ParseError(path + ".window: expected [earliest, latest]");
  }
  u.window = {w[0].get<double>(), w[1].get<double>()};
  u.preferred = detail::number(j, "preferred", path);
  u.max_detour = detail::number(j, "max_detour", path);
  u.value = detail::number(j, "value", path);
  u.c_dev = detail::number(j, "c_dev", path);
  u.c_trl = detail::number(j, "c_trl", path);
}

json write_user(const Instance& inst, const User& u) {
  return json{{"id", u.id},
              {"origin", inst.locations[u.origin].id},
              {"destination", inst.locations[u.destination].id},
              {"window", {u.window.earliest, u.window.latest}},
              {"preferred", u.preferred},
              {"max_detour", u.max_detour},
              {"value", u.value},
              {"c_dev", u.c_dev},
              {"c_trl", u.c_trl}};
}

}  // namespace

Instance parse_instance(const std::string& source, std::vector<std::string>* warnings) {
  const json doc = detail::parse_document(source);
  Instance inst;
  inst.horizon = detail::number(doc, "horizon", "$");
  const auto metric = detail::text(doc, "metric", "$");
  if (metric == "euclidean") {
    inst.metric = Metric::kEuclidean;
  } else if (metric == "matrix") {
    inst.metric = Metric::kMatrix;
  } else {
    throw ParseError("$.metric: expected \"euclidean\" or \"matrix\", got \"" + metric + "\"");
  }
  if (doc.contains("scale")) inst.scale = detail::number(doc, "scale", "$");

  std::unordered_map<std::string, int> loc_index;
  const auto& locs = detail::array(doc, "locations", "$");
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const std::string path = "$.locations[" + std::to_string(i) + "]";
    Location loc;
    loc.id = detail::text(locs[i], "id", path);
    if (inst.metric == Metric::kEuclidean) {
      loc.x = detail::number(locs[i], "x", path);
      loc.y = detail::number(locs[i], "y", path);
    } else if (locs[i].contains("x") || locs[i].contains("y")) {
      throw ParseError(path + ": coordinates are not allowed with the matrix metric");
    }
    if (!loc_index.emplace(loc.id, static_cast<int>(i)).second) {
      throw ParseError(path + ".id: duplicate location '" + loc.id + "'");
    }
    inst.locations.push_back(std::move(loc));
  }
  if (inst.metric == Metric::kMatrix) {
    const auto& m = detail::array(doc, "matrix", "$");
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i].is_array()) throw ParseError("$.matrix[" + std::to_string(i) + "]: expected an array");
      std::vector<double> row;
      for (std::size_t k = 0; k < m[i].size(); ++k) {
        if (!m[i][k].is_number()) {
          throw ParseError("$.matrix[" + std::to_string(i) + "][" + std::to_string(k) + "]: expected a number");
        }
        row.push_back(m[i][k].get<double>());
      }
      inst.matrix.push_back(std::move(row));
    }
  } else if (doc.contains("matrix")) {
    throw ParseError("$.matrix: not allowed with the euclidean metric");
  }

  const auto& riders = detail::array(doc, "riders", "$");
  for (std::size_t i = 0; i < riders.size(); ++i) {
    const std::string path = "$.riders[" + std::to_string(i) + "]";
    Rider r;
    read_user(riders[i], path, loc_index, r);
    r.lambda = detail::number(riders[i], "lambda", path);
    if (r.lambda > r.value) {
      if (warnings != nullptr) {
        warnings->push_back("rider " + r.id + ": alternative cost " + std::to_string(r.lambda) +
                            " exceeds trip value; using " + std::to_string(r.value));
      }
      r.lambda = r.value;
    }
    inst.riders.push_back(std::move(r));
  }
  const auto& drivers = detail::array(doc, "drivers", "$");
  for (std::size_t i = 0; i < drivers.size(); ++i) {
    const std::string path = "$.drivers[" + std::to_string(i) + "]";
    Driver d;
    read_user(drivers[i], path, loc_index, d);
    d.capacity = detail::integer(drivers[i], "capacity", path);
    d.rho = detail::number(drivers[i], "rho", path);
    inst.drivers.push_back(std::move(d));
  }
  return inst;
}

Instance load_instance(const std::string& path, std::vector<std::string>* warnings) {
  try {
    return parse_instance(read_text_file(path), warnings);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string dump_instance(const Instance& inst) {
  json doc;
  doc["horizon"] = inst.horizon;
  doc["metric"] = inst.metric == Metric::kEuclidean ? "euclidean" : "matrix";
  if (inst.metric == Metric::kEuclidean) doc["scale"] = inst.scale;
  json locs = json::array();
  for (const auto& loc : inst.locations) {
    if (inst.metric == Metric::kEuclidean) {
      locs.push_back({{"id", loc.id}, {"x", loc.x}, {"y", loc.y}});
    } else {
      locs.push_back({{"id", loc.id}});
    }
  }
  doc["locations"] = std::move(locs);
  if (inst.metric == Metric::kMatrix) doc["matrix"] = inst.matrix;
  json riders = json::array();
  for (const auto& r : inst.riders) {
    auto j = write_user(inst, r);
    j["lambda"] = r.lambda;
    riders.push_back(std::move(j));
  }
  doc["riders"] = std::move(riders);
  json drivers = json::array();
  for (const auto& d : inst.drivers) {
    auto j = write_user(inst, d);
    j["capacity"] = d.capacity;
    j["rho"] = d.rho;
    drivers.push_back(std::move(j));
  }
  doc["drivers"] = std::move(drivers);
  return doc.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::string& path) {
  write_text_file(path, dump_instance(instance));
}

}  // namespace rideshare
