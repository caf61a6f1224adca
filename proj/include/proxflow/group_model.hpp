#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace proxflow {

/// One penalized group: a weight and a sorted set of 0-based variable indices.
struct Group {
  double weight = 1.0;
  std::vector<std::size_t> members;
};

/// A weighted collection of (possibly overlapping, possibly repeated) index
/// groups over `p` variables. Indices are 0-based in memory; the text format
/// uses 1-based indices.
class GroupStructure {
 public:
  GroupStructure() = default;
  GroupStructure(std::size_t p, std::vector<Group> groups);

  std::size_t num_variables() const noexcept { return p_; }
  std::size_t num_groups() const noexcept { return groups_.size(); }
  const Group& group(std::size_t k) const { return groups_[k]; }
  std::span<const Group> groups() const noexcept { return groups_; }

  /// Sum of |g| over all groups.
  std::size_t total_membership() const noexcept;
  double total_weight() const noexcept;

  /// Throws GroupError describing the first violated invariant.
  void validate() const;

 private:
  std::size_t p_ = 0;
  std::vector<Group> groups_;
};

/// Every contiguous window {i, ..., i+len-1}, weights 1.
GroupStructure sliding_windows(std::size_t p, std::size_t len);

/// Every k x k square of an h x w grid whose variables are numbered row-major.
GroupStructure grid_squares(std::size_t h, std::size_t w, std::size_t k);

/// One group per variable; the penalty becomes the l1-norm.
GroupStructure singletons(std::size_t p);

/// Reads the line-oriented groups format: `p <int>` followed by
/// `<weight> <i1> <i2> ...` lines with 1-based indices; `#` lines are comments.
GroupStructure read_groups(std::istream& in);
GroupStructure read_groups_file(const std::string& path);
void write_groups(std::ostream& out, const GroupStructure& gs);

}  // namespace proxflow
