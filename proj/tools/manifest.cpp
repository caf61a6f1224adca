#include "manifest.hpp"

#include <fstream>

#include "proxflow/errors.hpp"
#include "proxflow/io.hpp"

#ifndef PROXFLOW_VERSION
#define PROXFLOW_VERSION "unknown"
#endif

namespace proxflow::cli {

void RunManifest::add_input(const std::string& path) { inputs.emplace_back(path, io::file_digest(path)); }

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "proxflow";
  j["version"] = PROXFLOW_VERSION;
  j["subcommand"] = subcommand;
  j["options"] = options;
  auto& in = j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"fnv1a64", digest}});
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  return j;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path);
  out << to_json().dump(2) << '\n';
}

}  // namespace proxflow::cli
