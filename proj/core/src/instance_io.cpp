#include "sparsepack/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sparsepack {

using nlohmann::json;

namespace {

std::string kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::Kp:
      return "kp";
    case InstanceKind::Mkp:
      return "mkp";
    case InstanceKind::Gap:
      return "gap";
  }
  return "gap";
}

InstanceKind kind_from_name(const std::string& s) {
  if (s == "kp") return InstanceKind::Kp;
  if (s == "mkp") return InstanceKind::Mkp;
  if (s == "gap") return InstanceKind::Gap;
  throw std::invalid_argument("unknown instance kind: " + s);
}

}  // namespace

std::string instance_to_json(const GapInstance& inst) {
  json out;
  out["kind"] = kind_name(inst.kind());
  out["n"] = inst.n();
  out["m"] = inst.m();
  if (inst.integer_weights()) out["integer_weights"] = true;
  out["capacities"] = inst.capacities();
  json items = json::array();
  const bool scalar = inst.kind() != InstanceKind::Gap;
  for (int i = 0; i < inst.n(); ++i) {
    json item;
    if (scalar) {
      item["value"] = inst.value(i, 0);
      item["weight"] = inst.weight(i, 0);
    } else {
      std::vector<double> vs(inst.m()), ws(inst.m());
      for (int j = 0; j < inst.m(); ++j) {
        vs[j] = inst.value(i, j);
        ws[j] = inst.weight(i, j);
      }
      item["values"] = vs;
      item["weights"] = ws;
    }
    items.push_back(std::move(item));
  }
  out["items"] = std::move(items);
  return out.dump();
}

GapInstance instance_from_json(const std::string& text) {
  json in = json::parse(text);
  const InstanceKind kind = kind_from_name(in.at("kind").get<std::string>());
  const int n = in.at("n").get<int>();
  const int m = in.at("m").get<int>();
  auto capacities = in.at("capacities").get<std::vector<double>>();
  const bool integer_weights = in.value("integer_weights", false);
  std::vector<double> values, weights;
  values.reserve(static_cast<std::size_t>(n) * m);
  weights.reserve(static_cast<std::size_t>(n) * m);
  const json& items = in.at("items");
  if (static_cast<int>(items.size()) != n)
    throw std::invalid_argument("items array length does not match n");
  for (const json& item : items) {
    if (item.contains("value") || item.contains("weight")) {
      if (kind == InstanceKind::Gap)
        throw std::invalid_argument("scalar item form requires kind kp/mkp");
      const double v = item.at("value").get<double>();
      const double w = item.at("weight").get<double>();
      for (int j = 0; j < m; ++j) {
        values.push_back(v);
        weights.push_back(w);
      }
    } else {
      auto vs = item.at("values").get<std::vector<double>>();
      auto ws = item.at("weights").get<std::vector<double>>();
      if (static_cast<int>(vs.size()) != m || static_cast<int>(ws.size()) != m)
        throw std::invalid_argument("item arrays must have length m");
      values.insert(values.end(), vs.begin(), vs.end());
      weights.insert(weights.end(), ws.begin(), ws.end());
    }
  }
  return GapInstance(kind, n, m, std::move(values), std::move(weights),
                     std::move(capacities), integer_weights);
}

GapInstance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open instance file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return instance_from_json(ss.str());
}

void save_instance(const GapInstance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write instance file: " + path);
  f << instance_to_json(inst) << "\n";
}

}  // namespace sparsepack
