#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace proxflow::cli {

/// Record written next to every output so a run can be repeated.
struct RunManifest {
  std::string subcommand;
  nlohmann::ordered_json options = nlohmann::ordered_json::object();
  /// (path, FNV-1a digest) of every input file read.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::optional<std::uint64_t> seed;

  void add_input(const std::string& path);
  nlohmann::ordered_json to_json() const;
  void write(const std::string& path) const;
};

}  // namespace proxflow::cli
