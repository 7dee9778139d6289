#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "chaindev/chain_distance.hpp"
#include "chaindev/cluster_tree.hpp"
#include "chaindev/development.hpp"
#include "chaindev/error.hpp"
#include "chaindev/metric_space.hpp"
#include "chaindev/selfsim.hpp"
#include "chaindev/width.hpp"

namespace chaindev::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Input documents
// ---------------------------------------------------------------------------

inline Metric require_metric_name(const std::string& name)
{
  auto m = parse_metric(name);
  if (!m) throw ValidationError("unknown metric '" + name + "' (expected euclidean, chebyshev or manhattan)");
  return *m;
}

inline double parse_number(const std::string& field, std::size_t line)
{
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(v)) {
    throw ValidationError("line " + std::to_string(line) + ": '" + field + "' is not a finite number");
  }
  return v;
}

/// CSV with header `label,x1,...,xm`, one point per record.
inline FiniteMetricSpace read_csv(std::istream& in, Metric metric)
{
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto b = field.find_first_not_of(" \t\r");
      const auto e = field.find_last_not_of(" \t\r");
      fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
  };

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) header = split(line);
  }
  if (header.size() < 2 || header.front() != "label") {
    throw ValidationError("CSV header must be 'label,x1,...,xm'");
  }
  const std::size_t dim = header.size() - 1;

  std::vector<std::string> labels;
  std::vector<double> coords;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
    }
    labels.push_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) coords.push_back(parse_number(fields[k], line_no));
  }
  return FiniteMetricSpace::from_points(std::move(labels), std::move(coords), dim, metric);
}

/// Either {"metric": name, "points": [{"label", "coords": [...]}, ...]} or
/// {"labels": [...], "matrix": [[...], ...]}. `metric_override` replaces the
/// document's metric for the points form.
inline FiniteMetricSpace read_json(const json& doc, std::optional<Metric> metric_override = std::nullopt)
{
  if (!doc.is_object()) throw ValidationError("input document must be a JSON object");
  try {
    if (doc.contains("points")) {
      Metric metric = metric_override.value_or(require_metric_name(doc.value("metric", std::string("euclidean"))));
      const auto& pts = doc.at("points");
      if (!pts.is_array()) throw ValidationError("'points' must be an array");
      std::vector<std::string> labels;
      std::vector<double> coords;
      std::size_t dim = 0;
      for (const auto& p : pts) {
        labels.push_back(p.at("label").get<std::string>());
        const auto& xs = p.at("coords");
        if (!xs.is_array() || xs.empty()) throw ValidationError("point coords must be a non-empty array");
        if (dim == 0) dim = xs.size();
        if (xs.size() != dim) throw ValidationError("point '" + labels.back() + "' has the wrong dimension");
        for (const auto& x : xs) coords.push_back(x.get<double>());
      }
      if (labels.empty()) throw ValidationError("input has no points");
      return FiniteMetricSpace::from_points(std::move(labels), std::move(coords), dim, metric);
    }
    if (doc.contains("matrix")) {
      const auto rows = doc.at("matrix").get<std::vector<std::vector<double>>>();
      for (const auto& row : rows) {
        if (row.size() != rows.size()) throw ValidationError("distance matrix must be square");
      }
      auto labels = doc.contains("labels") ? doc.at("labels").get<std::vector<std::string>>()
                                           : FiniteMetricSpace::index_labels(rows.size());
      return FiniteMetricSpace::from_matrix(std::move(labels), Matrix::from_rows(rows));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("schema violation: ") + e.what());
  }
  throw ValidationError("input document needs either 'points' or 'matrix'");
}

inline json parse_json_text(std::istream& in)
{
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct GeneratorParams {
  std::size_t count = 100;  // random-points, harmonic
  std::size_t dim = 2;      // random-points
  std::size_t depth = 3;    // cantor, cantor-square
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultLeafCap;
};

/// Left endpoints of the 2^N depth-N intervals of the middle-thirds Cantor
/// set, ascending.
inline std::vector<double> cantor_endpoints(std::size_t depth, std::size_t cap)
{
  const std::size_t n = leaf_count(cantor_spec(), depth, cap);
  std::uint64_t denom = 1;
  for (std::size_t k = 0; k < depth; ++k) denom *= 3;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    // Binary digits of `leaf`, most significant first, become ternary 0/2.
    std::uint64_t numer = 0;
    for (std::size_t k = 0; k < depth; ++k) {
      const std::uint64_t bit = (leaf >> (depth - 1 - k)) & 1u;
      numer = numer * 3 + 2 * bit;
    }
    out.push_back(static_cast<double>(numer) / static_cast<double>(denom));
  }
  return out;
}

inline FiniteMetricSpace generate(const std::string& kind, const GeneratorParams& p)
{
  std::vector<std::string> labels;
  std::vector<double> coords;
  if (kind == "random-points") {
    if (p.count == 0 || p.dim == 0) throw ValidationError("random-points needs count >= 1 and dim >= 1");
    if (p.count > p.cap) throw CapExceeded("count exceeds the cap of " + std::to_string(p.cap));
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < p.count; ++i) {
      labels.push_back("p" + std::to_string(i));
      for (std::size_t k = 0; k < p.dim; ++k) coords.push_back(unit(rng));
    }
    return FiniteMetricSpace::from_points(std::move(labels), std::move(coords), p.dim, Metric::euclidean);
  }
  if (kind == "cantor") {
    coords = cantor_endpoints(p.depth, p.cap);
    for (std::size_t i = 0; i < coords.size(); ++i) labels.push_back("c" + std::to_string(i));
    return FiniteMetricSpace::from_points(std::move(labels), std::move(coords), 1, Metric::euclidean);
  }
  if (kind == "cantor-square") {
    leaf_count(cantor_square_spec(), p.depth, p.cap);
    const auto line = cantor_endpoints(p.depth, p.cap);
    for (std::size_t a = 0; a < line.size(); ++a) {
      for (std::size_t b = 0; b < line.size(); ++b) {
        labels.push_back("c" + std::to_string(a) + "_" + std::to_string(b));
        coords.push_back(line[a]);
        coords.push_back(line[b]);
      }
    }
    return FiniteMetricSpace::from_points(std::move(labels), std::move(coords), 2, Metric::chebyshev);
  }
  if (kind == "harmonic") {
    if (p.count == 0) throw ValidationError("harmonic needs count >= 1");
    if (p.count > p.cap) throw CapExceeded("count exceeds the cap of " + std::to_string(p.cap));
    for (std::size_t k = 1; k <= p.count; ++k) {
      labels.push_back("1/" + std::to_string(k));
      coords.push_back(1.0 / static_cast<double>(k));
    }
    return FiniteMetricSpace::from_points(std::move(labels), std::move(coords), 1, Metric::euclidean);
  }
  throw ValidationError("unknown generator '" + kind + "' (expected random-points, cantor, cantor-square, harmonic)");
}

// ---------------------------------------------------------------------------
// Output documents
// ---------------------------------------------------------------------------

inline json space_to_json(const FiniteMetricSpace& space)
{
  json doc;
  if (space.has_points()) {
    doc["metric"] = std::string(to_string(*space.metric()));
    json pts = json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto p = space.point(i);
      pts.push_back({{"label", space.labels()[i]}, {"coords", std::vector<double>(p.begin(), p.end())}});
    }
    doc["points"] = std::move(pts);
    return doc;
  }
  const Matrix m = space.dense();
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["labels"] = space.labels();
  doc["matrix"] = std::move(rows);
  return doc;
}

inline std::string format_number(double v, int digits = 17)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Points form only; matrix spaces have no CSV representation.
inline std::string space_to_csv(const FiniteMetricSpace& space)
{
  if (!space.has_points()) throw ValidationError("CSV output needs a point cloud");
  std::string out = "label";
  for (std::size_t k = 1; k <= space.dimension(); ++k) out += ",x" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < space.size(); ++i) {
    out += space.labels()[i];
    for (double x : space.point(i)) out += "," + format_number(x);
    out += '\n';
  }
  return out;
}

inline json chain_matrix_to_json(const ChainMatrix& c, const std::vector<std::string>& labels)
{
  json rows = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto r = c.matrix().row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"labels", labels}, {"matrix", std::move(rows)}};
}

inline json tree_to_json(const ClusterTree& tree, const std::vector<std::string>& labels)
{
  json nodes = json::array();
  for (const auto& v : tree.nodes()) {
    json node{{"id", v.id}, {"level", v.level}, {"r", v.r}, {"children", v.children}, {"size", v.last - v.first}};
    node["parent"] = v.parent ? json(*v.parent) : json(nullptr);
    if (v.is_leaf()) node["label"] = labels.at(tree.members(v.id).front());
    nodes.push_back(std::move(node));
  }
  return {{"root", tree.root()}, {"nodes", std::move(nodes)}};
}

/// One node per cluster labeled "r=<value> |Q|=<size>", r with 12
/// significant digits.
inline std::string tree_to_dot(const ClusterTree& tree)
{
  std::string out = "digraph cluster_tree {\n";
  for (const auto& v : tree.nodes()) {
    out += "  n" + std::to_string(v.id) + " [label=\"r=" + format_number(v.r, 12) +
           " |Q|=" + std::to_string(v.last - v.first) + "\"];\n";
  }
  for (const auto& v : tree.nodes()) {
    for (NodeId c : v.children) out += "  n" + std::to_string(v.id) + " -> n" + std::to_string(c) + ";\n";
  }
  out += "}\n";
  return out;
}

inline json width_to_json(const WidthReport& report)
{
  json terms = json::array();
  for (const auto& t : report.per_node_terms) terms.push_back({{"node", t.node}, {"term", t.term}});
  return {{"width", report.width}, {"terms", std::move(terms)}};
}

inline json certificate_to_json(const DisCertificate& cert)
{
  json pairs = json::array();
  for (const auto& e : cert.pairs) pairs.push_back({{"i", e.i}, {"j", e.j}, {"d", e.weight}});
  return {{"total", cert.total}, {"pairs", std::move(pairs)}};
}

inline json development_to_json(const Development& dev, const std::vector<std::string>& labels)
{
  json points = json::array();
  for (std::size_t i = 0; i < dev.coords.size(); ++i) {
    points.push_back({{"label", labels.at(i)}, {"coord", dev.coords[i]}});
  }
  json gaps = json::array();
  for (const auto& g : dev.gaps) gaps.push_back({{"node", g.node}, {"len", g.length}});
  return {{"points", std::move(points)}, {"width", dev.width}, {"gaps", std::move(gaps)}};
}

/// Coordinates from a development document, in the space's point order.
inline std::vector<double> read_development_coords(const json& doc, const FiniteMetricSpace& space)
{
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < space.size(); ++i) index.emplace(space.labels()[i], i);
  std::vector<double> coords(space.size(), std::nan(""));
  std::vector<bool> seen(space.size(), false);
  try {
    for (const auto& p : doc.at("points")) {
      const auto label = p.at("label").get<std::string>();
      auto it = index.find(label);
      if (it == index.end()) throw ValidationError("development names unknown point '" + label + "'");
      if (seen[it->second]) throw ValidationError("development lists point '" + label + "' twice");
      seen[it->second] = true;
      coords[it->second] = p.at("coord").get<double>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("schema violation: ") + e.what());
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!seen[i]) throw ValidationError("development has no coordinate for '" + space.labels()[i] + "'");
  }
  return coords;
}

inline json verification_to_json(const DevelopmentCheck& dev, const OrderingCheck& order, const DiameterCheck& diam)
{
  json doc{{"pass", dev.pass && order.pass && diam.pass},
           {"chain_distance", {{"pass", dev.pass},
                               {"pairs_checked", dev.pairs_checked},
                               {"max_error", dev.max_error},
                               {"diameter", dev.diameter},
                               {"width", dev.width}}},
           {"ordering", {{"pass", order.pass}, {"triples_checked", order.triples_checked}}},
           {"diameter_identity", {{"pass", diam.pass}, {"diameter", diam.diameter}, {"width", diam.width}}}};
  if (dev.pass) doc["chain_distance"]["excess"] = dev.excess;
  if (!dev.message.empty()) doc["chain_distance"]["message"] = dev.message;
  if (dev.collision) doc["chain_distance"]["collision"] = {dev.collision->first, dev.collision->second};
  if (order.failing) doc["ordering"]["failing"] = *order.failing;
  if (!order.message.empty()) doc["ordering"]["message"] = order.message;
  if (!diam.message.empty()) doc["diameter_identity"]["message"] = diam.message;
  return doc;
}

inline SelfSimilarSpec read_spec(const json& doc)
{
  SelfSimilarSpec spec;
  try {
    spec.branching = doc.at("branching").get<std::size_t>();
    spec.root_diameter = doc.at("root_diameter").get<double>();
    spec.ratio = doc.at("ratio").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("schema violation: ") + e.what());
  }
  spec.validate();
  return spec;
}

inline json series_to_json(const SelfSimilarSpec& spec, const WidthSeries& series, const ExistenceVerdict& verdict)
{
  json doc{{"spec", {{"branching", spec.branching}, {"root_diameter", spec.root_diameter}, {"ratio", spec.ratio}}},
           {"exists", verdict.exists},
           {"ratio", verdict.growth},
           {"convergent", series.convergent},
           {"terms", series.terms},
           {"partial_sum", series.partial_sum()},
           {"witness", verdict.witness}};
  doc["total"] = series.convergent ? json(series.total) : json("inf");
  doc["minimal_diameter"] = verdict.minimal_diameter ? json(*verdict.minimal_diameter) : json(nullptr);
  return doc;
}

inline json symbolic_development_to_json(const SymbolicDevelopment& dev)
{
  json leaves = json::array();
  for (const auto& l : dev.leaves) leaves.push_back({{"leaf", l.leaf}, {"left", l.left}, {"len", l.length}});
  json gaps = json::array();
  for (const auto& g : dev.gaps) gaps.push_back({{"level", g.level}, {"left", g.left}, {"len", g.length}});
  return {{"depth", dev.depth},
          {"excess", dev.excess},
          {"diameter", dev.diameter},
          {"leaf_length", dev.leaf_length},
          {"leaves", std::move(leaves)},
          {"gaps", std::move(gaps)}};
}

}  // namespace chaindev::io
