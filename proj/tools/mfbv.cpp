#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "mfbv/runner.hpp"

namespace {

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

// {"meta": {...}, "rows": [{column: value}]}; values stay strings so numbers round-trip exactly.
nlohmann::ordered_json json_mirror(const std::string& csv) {
  nlohmann::ordered_json doc = {{"meta", nlohmann::ordered_json::object()}, {"rows", nlohmann::ordered_json::array()}};
  std::vector<std::string> header;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      const std::string key = line.substr(2, colon - 2), value = colon == std::string::npos ? "" : line.substr(colon + 2);
      if (key == "warning") {
        doc["meta"]["warnings"].push_back(value);
      } else {
        doc["meta"][key] = value;
      }
      continue;
    }
    auto fields = csv_fields(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) row[header[i]] = fields[i];
    doc["rows"].push_back(std::move(row));
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laboratory for averaged discrepancy of multiplicative functions"};
  mfbv::lab::RunOptions opt;
  std::string config, out, json;
  std::optional<std::uint64_t> seed;
  app.add_option("subcommand", opt.subcommand, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(mfbv::lab::subcommands()));
  app.add_option("--config", config, "Path to the key = value config file")->required();
  app.add_option("--out", out, "CSV output path (stdout when omitted)");
  app.add_option("--seed", seed, "Seed for random functions; overrides the config's seed");
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--json", json, "Also write a JSON mirror of the CSV here");
  app.set_version_flag("--version", std::string("mfbv ") + mfbv::lab::kToolVersion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mfbv::lab::kExitConfig;
  }
  opt.seed = seed;

  std::ostringstream csv;
  const int code = mfbv::lab::execute(config, opt, std::nullopt, csv, std::cerr);
  if (code != mfbv::lab::kExitOk) return code;
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write " << out << "\n";
      return mfbv::lab::kExitFailure;
    }
    file << csv.str();
  }
  if (!json.empty()) {
    std::ofstream file(json, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write " << json << "\n";
      return mfbv::lab::kExitFailure;
    }
    file << json_mirror(csv.str()).dump(2) << "\n";
  }
  return mfbv::lab::kExitOk;
}
