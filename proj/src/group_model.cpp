#include "proxflow/group_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "proxflow/errors.hpp"
#include "proxflow/io.hpp"

namespace proxflow {

GroupStructure::GroupStructure(std::size_t p, std::vector<Group> groups) : p_(p), groups_(std::move(groups)) {
  for (auto& g : groups_) std::sort(g.members.begin(), g.members.end());
}

std::size_t GroupStructure::total_membership() const noexcept {
  std::size_t total = 0;
  for (const auto& g : groups_) total += g.members.size();
  return total;
}

double GroupStructure::total_weight() const noexcept {
  double total = 0.0;
  for (const auto& g : groups_) total += g.weight;
  return total;
}

void GroupStructure::validate() const {
  using K = GroupError::Kind;
  if (p_ == 0) throw GroupError(K::kIndexOutOfRange, "number of variables must be at least 1");
  if (groups_.empty()) throw GroupError(K::kNoGroups, "group list is empty");
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    const auto& g = groups_[k];
    const std::string where = "group " + std::to_string(k + 1);
    if (g.members.empty()) throw GroupError(K::kEmptyGroup, where + " is empty");
    if (!(g.weight > 0.0) || !std::isfinite(g.weight)) {
      throw GroupError(K::kNonpositiveWeight, where + " has non-positive weight");
    }
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      if (g.members[i] >= p_) {
        throw GroupError(K::kIndexOutOfRange, where + " has index " + std::to_string(g.members[i] + 1) +
                                                  " outside [1.." + std::to_string(p_) + "]");
      }
      if (i > 0 && g.members[i] == g.members[i - 1]) {
        throw GroupError(K::kDuplicateIndex, where + " repeats index " + std::to_string(g.members[i] + 1));
      }
    }
  }
}

GroupStructure sliding_windows(std::size_t p, std::size_t len) {
  if (len < 1 || len > p) {
    throw GroupError(GroupError::Kind::kInvalidLength, "window length must lie in [1, p]");
  }
  std::vector<Group> groups;
  groups.reserve(p - len + 1);
  for (std::size_t i = 0; i + len <= p; ++i) {
    Group g;
    g.members.resize(len);
    for (std::size_t j = 0; j < len; ++j) g.members[j] = i + j;
    groups.push_back(std::move(g));
  }
  return GroupStructure(p, std::move(groups));
}

GroupStructure grid_squares(std::size_t h, std::size_t w, std::size_t k) {
  if (k < 1 || k > h || k > w) {
    throw GroupError(GroupError::Kind::kInvalidLength, "square side must lie in [1, min(h, w)]");
  }
  std::vector<Group> groups;
  groups.reserve((h - k + 1) * (w - k + 1));
  for (std::size_t r = 0; r + k <= h; ++r) {
    for (std::size_t c = 0; c + k <= w; ++c) {
      Group g;
      g.members.reserve(k * k);
      for (std::size_t dr = 0; dr < k; ++dr)
        for (std::size_t dc = 0; dc < k; ++dc) g.members.push_back((r + dr) * w + (c + dc));
      groups.push_back(std::move(g));
    }
  }
  return GroupStructure(h * w, std::move(groups));
}

GroupStructure singletons(std::size_t p) {
  if (p < 1) throw GroupError(GroupError::Kind::kIndexOutOfRange, "number of variables must be at least 1");
  std::vector<Group> groups(p);
  for (std::size_t j = 0; j < p; ++j) groups[j].members = {j};
  return GroupStructure(p, std::move(groups));
}

GroupStructure read_groups(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long long p = -1;
  std::vector<Group> groups;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = io::split_whitespace(line);
    if (toks.empty() || toks.front().front() == '#') continue;
    const std::string where = "groups line " + std::to_string(line_no) + ": ";
    try {
      if (p < 0) {
        if (toks.size() != 2 || toks[0] != "p") throw ParseError("expected `p <int>` header");
        p = io::parse_integer(toks[1]);
        if (p < 1) throw ParseError("p must be positive");
        continue;
      }
      Group g;
      g.weight = io::parse_double(toks[0]);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const long long idx = io::parse_integer(toks[i]);
        if (idx < 1 || idx > p) {
          throw GroupError(GroupError::Kind::kIndexOutOfRange,
                           where + "index " + std::to_string(idx) + " outside [1.." + std::to_string(p) + "]");
        }
        g.members.push_back(static_cast<std::size_t>(idx - 1));
      }
      groups.push_back(std::move(g));
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
  }
  if (p < 0) throw ParseError("groups file has no `p` header");
  return GroupStructure(static_cast<std::size_t>(p), std::move(groups));
}

GroupStructure read_groups_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_groups(in);
}

void write_groups(std::ostream& out, const GroupStructure& gs) {
  out << "p " << gs.num_variables() << '\n';
  for (const auto& g : gs.groups()) {
    out << io::format_double(g.weight);
    for (auto j : g.members) out << ' ' << j + 1;
    out << '\n';
  }
}

}  // namespace proxflow
