#include "gallai/io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

namespace gallai {

std::string format_real(double value) {
  if (!std::isfinite(value)) throw IoError("cannot serialize non-finite real");
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  std::string text(buffer);
  if (text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

namespace {

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

void dump_into(const Json& v, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, item] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(key).dump() + ": ";
      dump_into(item, indent + 2, out);
    }
    out += "\n" + pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(v.begin(), v.end(), is_scalar);
    out += flat ? "[" : "[\n";
    bool first = true;
    for (const auto& item : v) {
      if (!first) out += flat ? ", " : ",\n";
      first = false;
      if (!flat) out += inner;
      dump_into(item, indent + 2, out);
    }
    if (!flat) out += "\n" + pad;
    out += "]";
  } else if (v.is_number_float()) {
    out += format_real(v.get<double>());
  } else {
    out += v.dump();
  }
}

bool integral_param(const std::string& name) {
  return name == "n" || name == "t" || name == "left_size" ||
         name == "right_size";
}

Json pairs_to_json(const DesignatedPairs& side) {
  Json pairs = Json::array();
  for (const PointPair& pair : side.pairs) pairs.push_back({pair.p, pair.q});
  return Json{{"length", side.length}, {"pairs", std::move(pairs)}};
}

DesignatedPairs pairs_from_json(const Json& j) {
  DesignatedPairs side;
  side.length = j.at("length").get<double>();
  for (const auto& pair : j.at("pairs")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw IoError("designated pairs must be [i, j] arrays");
    }
    side.pairs.push_back({pair[0].get<PointId>(), pair[1].get<PointId>()});
  }
  return side;
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(value, 0, out);
  out += "\n";
  return out;
}

Json provenance_to_json(const Provenance& prov) {
  Json j{{"kind", kind_name(prov.kind)}};
  for (const auto& [name, value] : prov.params) {
    if (integral_param(name)) {
      j[name] = static_cast<std::int64_t>(std::llround(value));
    } else {
      j[name] = value;
    }
  }
  if (!prov.factors.empty()) {
    Json factors = Json::array();
    for (const Provenance& f : prov.factors) factors.push_back(provenance_to_json(f));
    j["factors"] = std::move(factors);
  }
  return j;
}

Provenance provenance_from_json(const Json& j) {
  Provenance prov;
  prov.kind = kind_from_name(j.at("kind").get<std::string>());
  for (const auto& [name, value] : j.items()) {
    if (name == "kind") continue;
    if (name == "factors") {
      for (const auto& f : value) prov.factors.push_back(provenance_from_json(f));
      continue;
    }
    if (!value.is_number()) throw IoError("provenance parameter '" + name + "' is not a number");
    prov.params.emplace_back(name, value.get<double>());
  }
  return prov;
}

Json configuration_to_json(const Configuration& cfg) {
  Json points = Json::array();
  for (PointId i = 0; i < cfg.size(); ++i) {
    const auto p = cfg.point(i);
    points.push_back(Json(std::vector<double>(p.begin(), p.end())));
  }
  return Json{{"dim", cfg.dim()},
              {"points", std::move(points)},
              {"side_a", pairs_to_json(cfg.side_a())},
              {"side_b", pairs_to_json(cfg.side_b())},
              {"provenance", provenance_to_json(cfg.provenance())}};
}

Configuration configuration_from_json(const Json& j, double eps) {
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<double> coords;
    for (const auto& point : j.at("points")) {
      if (!point.is_array() || point.size() != static_cast<std::size_t>(dim)) {
        throw IoError("every point must have exactly dim coordinates");
      }
      for (const auto& c : point) coords.push_back(c.get<double>());
    }
    Provenance prov;
    if (j.contains("provenance")) prov = provenance_from_json(j.at("provenance"));
    return Configuration(dim, std::move(coords), pairs_from_json(j.at("side_a")),
                         pairs_from_json(j.at("side_b")), std::move(prov), eps);
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed configuration JSON: ") + e.what());
  }
}

Json coloring_to_json(const Coloring& coloring) {
  return Json{{"r", coloring.r}, {"colors", coloring.colors}};
}

Coloring coloring_from_json(const Json& j) {
  try {
    Coloring coloring;
    coloring.r = j.at("r").get<int>();
    coloring.colors = j.at("colors").get<std::vector<Color>>();
    coloring.check(static_cast<PointId>(coloring.colors.size()));
    return coloring;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed coloring JSON: ") + e.what());
  } catch (const SearchError& e) {
    throw IoError(std::string("invalid coloring: ") + e.what());
  }
}

Json witness_to_json(const Witness& witness, const Configuration& cfg) {
  Json coordinates = Json::array();
  for (PointId p : witness.points) {
    const auto point = cfg.point(p);
    coordinates.push_back(Json(std::vector<double>(point.begin(), point.end())));
  }
  return Json{{"kind", witness_kind_name(witness.kind)},
              {"points", witness.points},
              {"colors", witness.colors},
              {"coordinates", std::move(coordinates)}};
}

Witness witness_from_json(const Json& j) {
  try {
    Witness w;
    w.kind = witness_kind_from_name(j.at("kind").get<std::string>());
    w.points = j.at("points").get<std::vector<PointId>>();
    w.colors = j.at("colors").get<std::vector<Color>>();
    return w;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed witness JSON: ") + e.what());
  }
}

Json verdict_to_json(const PipelineVerdict& verdict, const Configuration& world) {
  Json j{{"outcome", outcome_name(verdict.outcome)}};
  j["witness"] = verdict.witness ? witness_to_json(*verdict.witness, world) : Json();
  j["labels"] = verdict.labels;
  std::vector<int> distinct = verdict.labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  j["distinct_labels"] = distinct;
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
  write_file(path, dump_json(value));
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw IoError("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

}  // namespace gallai
