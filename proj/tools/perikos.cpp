// Command-line front end: every subcommand builds a job document and hands it
// to perikos::cli::run.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perikos/cli.hpp"

namespace {

using perikos::Json;

// Flag names per command; values are read as JSON when they parse, else as strings.
const std::map<std::string, std::vector<std::string>>& flag_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"fgl-check", {"h", "p", "u", "order", "precision", "associativity", "samples", "height", "emit_law"}},
      {"period-eval", {"h", "p", "u", "prec", "input_precision", "n_start", "n_cap"}},
      {"global-eval", {"h", "p", "u", "prec", "input_precision", "n_start", "n_cap"}},
      {"newton", {"p", "m", "precision", "matrix"}},
      {"kottwitz", {"h", "d", "lo", "hi"}},
      {"bundles", {"h"}},
      {"kappa", {"p", "log_p", "log_w", "move"}},
      {"hecke-check", {"E", "F", "length", "locus"}},
      {"od-mul", {"p", "h", "precision", "a", "b"}},
      {"act", {"action", "p", "h", "precision", "point", "s", "g", "n", "inertia", "coords", "prec"}},
      {"commute-check", {"p", "h", "precision", "trials"}},
  };
  return table;
}

Json flag_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return text;
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw perikos::SchemaError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw perikos::SchemaError(path + ": " + e.what());
  }
}

int emit(const perikos::cli::Outcome& out) {
  std::cout << out.document.dump(2) << "\n";
  if (out.document.contains("error")) std::cerr << "perikos: " << out.document["error"]["message"].get<std::string>() << "\n";
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perikos: p-adic period maps at finite precision"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", perikos::cli::kVersion);

  std::string job_file;
  app.add_option("--json", job_file, "Job document {command, params, seed, prec}");

  std::int64_t seed = 1;
  std::string prec_text;
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> params_files;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, keys] : flag_table()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->set_help_flag("--help", "Print this help message and exit");
    subs[name] = sub;
    sub->add_option("--seed", seed, "Seed for randomized checks");
    sub->add_option("--prec-block", prec_text, "Precision block as JSON, e.g. {\"p\":5,\"precision\":30}");
    sub->add_option("--json", params_files[name], "Parameters as a JSON file");
    for (const auto& k : keys) sub->add_option("--" + k, flags[name][k]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return perikos::cli::kSchema;
  }

  perikos::cli::PrecBlock defaults;
  Json job;
  try {
    defaults = perikos::cli::default_prec_block();
    if (!job_file.empty()) {
      if (!app.get_subcommands().empty()) throw perikos::SchemaError("--json job files and subcommands are exclusive");
      job = read_file(job_file);
    } else {
      if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return perikos::cli::kSchema;
      }
      const std::string name = app.get_subcommands().front()->get_name();
      Json params = Json::object();
      if (!params_files[name].empty()) params = read_file(params_files[name]);
      for (const auto& [k, v] : flags[name]) {
        if (subs[name]->count("--" + k) == 0) continue;
        if (!params_files[name].empty()) throw perikos::SchemaError("--json and per-field flags are exclusive");
        params[k] = flag_value(v);
      }
      job = Json{{"schema_version", perikos::cli::kSchemaVersion}, {"command", name}, {"params", params}};
      if (subs[name]->count("--seed") > 0) {
        if (seed < 0) throw perikos::SchemaError("--seed must be nonnegative");
        job["seed"] = static_cast<std::uint64_t>(seed);
      }
      if (!prec_text.empty()) job["prec"] = flag_value(prec_text);
    }
  } catch (const perikos::SchemaError& e) {
    std::cerr << "perikos: " << e.what() << "\n";
    return perikos::cli::kSchema;
  }
  return emit(perikos::cli::run(job, defaults));
}
