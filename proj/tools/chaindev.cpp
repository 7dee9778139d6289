// Command-line front end for the chaindev library.
//
// Exit codes: 0 ok, 2 validation failure (bad input, failed verification),
// 3 size cap exceeded. Error reports go to stderr as JSON.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "chaindev/chaindev.hpp"
#include "chaindev/io.hpp"

namespace {

using chaindev::io::json;

constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;

struct InputOptions {
  std::string input;
  std::string format;  // csv | json, inferred from the extension when empty
  std::string metric;  // empty: document default (euclidean for CSV)
};

struct OutputOptions {
  std::string out;
};

std::size_t leaf_cap()
{
  if (const char* env = std::getenv("CHAINDEV_LEAF_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw chaindev::ValidationError(std::string("CHAINDEV_LEAF_CAP is not an integer: ") + env);
    }
  }
  return chaindev::kDefaultLeafCap;
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  return in;
}

chaindev::FiniteMetricSpace load_space(const InputOptions& opt)
{
  if (opt.input.empty()) throw chaindev::ValidationError("--input is required");
  std::string format = opt.format;
  if (format.empty()) {
    format = opt.input.size() >= 4 && opt.input.substr(opt.input.size() - 4) == ".csv" ? "csv" : "json";
  }
  std::optional<chaindev::Metric> metric;
  if (!opt.metric.empty()) metric = chaindev::io::require_metric_name(opt.metric);

  auto in = open_input(opt.input);
  if (format == "csv") return chaindev::io::read_csv(in, metric.value_or(chaindev::Metric::euclidean));
  return chaindev::io::read_json(chaindev::io::parse_json_text(in), metric);
}

void emit(const OutputOptions& opt, const std::string& text)
{
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw IoError("cannot write '" + opt.out + "'");
  out << text;
}

void emit(const OutputOptions& opt, const json& doc) { emit(opt, doc.dump(2) + "\n"); }

void report_error(const std::string& kind, const std::string& message, json extra = json::object())
{
  json doc{{"error", kind}, {"message", message}};
  doc.update(extra);
  std::cerr << doc.dump() << "\n";
}

/// Invalid space with the full violation list attached.
struct SpaceRejected : chaindev::ValidationError {
  SpaceRejected(const std::string& first, json details)
      : chaindev::ValidationError(first), details(std::move(details))
  {
  }
  json details;
};

void require_valid_or_report(const chaindev::FiniteMetricSpace& space)
{
  const auto report = chaindev::validate_space(space);
  if (report.valid()) return;
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"kind", std::string(chaindev::to_string(v.kind))}, {"message", v.message}});
  }
  throw SpaceRejected(report.violations.front().message,
                      json{{"violations", violations}, {"total_violations", report.total_violations}});
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Chain distances, cluster trees and chain developments of finite metric spaces"};
  app.require_subcommand(1);

  InputOptions in_opt;
  OutputOptions out_opt;
  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", in_opt.input, "Input file (CSV points or JSON document)")->required();
    cmd->add_option("--format", in_opt.format, "Input format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--metric", in_opt.metric, "Metric for point inputs")
        ->check(CLI::IsMember({"euclidean", "chebyshev", "manhattan"}));
  };
  auto add_output = [&](CLI::App* cmd) { cmd->add_option("--out", out_opt.out, "Output file (default stdout)"); };

  auto* chaindist = app.add_subcommand("chaindist", "Chain distance matrix");
  auto* tree = app.add_subcommand("tree", "Cluster tree export");
  auto* width = app.add_subcommand("width", "Width of the cluster tree");
  auto* dis = app.add_subcommand("dis", "Measure of disconnectivity with MST certificate");
  auto* develop = app.add_subcommand("develop", "Build a minimal chain development");
  auto* verify = app.add_subcommand("verify", "Check a development against a space");
  for (auto* cmd : {chaindist, tree, width, dis, develop, verify}) {
    add_input(cmd);
    add_output(cmd);
  }

  std::string tree_export = "json";
  tree->add_option("--export", tree_export, "Tree export format")->check(CLI::IsMember({"json", "dot"}));

  std::string development_path;
  verify->add_option("--development", development_path, "Development JSON produced by 'develop'")->required();

  auto* selfsim = app.add_subcommand("selfsim", "Width series and existence verdict of a self-similar compact");
  add_output(selfsim);
  std::string spec_path;
  std::string preset;
  std::optional<std::size_t> branching;
  std::optional<double> root_diameter;
  std::optional<double> ratio;
  std::size_t depth = 0;
  std::optional<double> stretch_by;
  bool with_truncation = false;
  selfsim->add_option("--spec", spec_path, "Spec JSON {branching, root_diameter, ratio}");
  selfsim->add_option("--preset", preset, "Built-in spec")->check(CLI::IsMember({"cantor", "cantor-square"}));
  selfsim->add_option("--branching", branching, "Children per cluster");
  selfsim->add_option("--root-diameter", root_diameter, "Chain diameter of the whole space");
  selfsim->add_option("--ratio", ratio, "Diameter ratio between consecutive levels");
  selfsim->add_option("--depth", depth, "Number of series terms / truncation depth");
  selfsim->add_option("--stretch", stretch_by, "Add this much measure to a depth-N symbolic development");
  selfsim->add_flag("--truncation", with_truncation, "Also compute the width of the depth-N truncation");

  auto* gen = app.add_subcommand("generate", "Emit an example input document");
  add_output(gen);
  std::string kind;
  chaindev::io::GeneratorParams params;
  std::string gen_format = "json";
  gen->add_option("--kind", kind, "Generator")
      ->required()
      ->check(CLI::IsMember({"random-points", "cantor", "cantor-square", "harmonic"}));
  gen->add_option("--count", params.count, "Number of points (random-points, harmonic)");
  gen->add_option("--dim", params.dim, "Dimension (random-points)");
  gen->add_option("--depth", params.depth, "Depth (cantor, cantor-square)");
  gen->add_option("--seed", params.seed, "Random seed");
  gen->add_option("--format", gen_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kExitValidation;
  }

  try {
    if (*selfsim) {
      chaindev::SelfSimilarSpec spec;
      if (!spec_path.empty()) {
        auto in = open_input(spec_path);
        spec = chaindev::io::read_spec(chaindev::io::parse_json_text(in));
      } else if (preset == "cantor") {
        spec = chaindev::cantor_spec();
      } else if (preset == "cantor-square") {
        spec = chaindev::cantor_square_spec();
      } else if (branching && root_diameter && ratio) {
        spec = {*branching, *root_diameter, *ratio};
      } else {
        throw chaindev::ValidationError("give --spec, --preset, or all of --branching/--root-diameter/--ratio");
      }
      const auto series = chaindev::width_series(spec, depth);
      const auto verdict = chaindev::exists_development(spec);
      json doc = chaindev::io::series_to_json(spec, series, verdict);
      if (with_truncation) {
        const auto space = chaindev::truncate(spec, depth, leaf_cap());
        doc["truncation"] = {{"depth", depth},
                             {"points", space.size()},
                             {"width", chaindev::width(chaindev::build_tree(space)).width}};
      }
      if (stretch_by) {
        const auto base = chaindev::symbolic_development(spec, depth, leaf_cap());
        doc["stretch"] = chaindev::io::symbolic_development_to_json(chaindev::stretch(base, *stretch_by, leaf_cap()));
      }
      emit(out_opt, doc);
      return 0;
    }

    if (*gen) {
      params.cap = leaf_cap();
      const auto space = chaindev::io::generate(kind, params);
      if (gen_format == "csv") {
        emit(out_opt, chaindev::io::space_to_csv(space));
      } else {
        emit(out_opt, chaindev::io::space_to_json(space));
      }
      return 0;
    }

    const auto space = load_space(in_opt);
    require_valid_or_report(space);

    if (*chaindist) {
      emit(out_opt, chaindev::io::chain_matrix_to_json(chaindev::chain_distance(space), space.labels()));
    } else if (*tree) {
      const auto t = chaindev::build_tree(space);
      if (tree_export == "dot") {
        emit(out_opt, chaindev::io::tree_to_dot(t));
      } else {
        emit(out_opt, chaindev::io::tree_to_json(t, space.labels()));
      }
    } else if (*width) {
      emit(out_opt, chaindev::io::width_to_json(chaindev::width(chaindev::build_tree(space))));
    } else if (*dis) {
      emit(out_opt, chaindev::io::certificate_to_json(chaindev::mst_weight(space)));
    } else if (*develop) {
      const auto dev = chaindev::build_development(chaindev::build_tree(space));
      emit(out_opt, chaindev::io::development_to_json(dev, space.labels()));
    } else if (*verify) {
      auto in = open_input(development_path);
      const auto coords = chaindev::io::read_development_coords(chaindev::io::parse_json_text(in), space);
      const auto dev = chaindev::verify_development(space, coords);
      chaindev::OrderingCheck order;
      chaindev::DiameterCheck diam;
      if (dev.pass) {
        order = chaindev::tv_check(space, coords);
        diam = chaindev::diameter_identity(space, coords);
      } else {
        order.message = diam.message = "skipped: not a chain development";
      }
      const json doc = chaindev::io::verification_to_json(dev, order, diam);
      emit(out_opt, doc);
      return doc["pass"].get<bool>() ? 0 : kExitValidation;
    }
    return 0;
  } catch (const chaindev::CapExceeded& e) {
    report_error("cap_exceeded", e.what());
    return kExitCap;
  } catch (const SpaceRejected& e) {
    report_error("validation", e.what(), e.details);
    return kExitValidation;
  } catch (const chaindev::ValidationError& e) {
    report_error("validation", e.what());
    return kExitValidation;
  } catch (const IoError& e) {
    report_error("io", e.what());
    return kExitValidation;
  }
}
