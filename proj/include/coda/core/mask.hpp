#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "coda/core/space.hpp"

namespace coda {

class InvalidMaskError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Boolean adjacency of a local causal graph at one (s, a).
///
/// Rows are the n state components followed by the m action components at
/// time t; columns are the n state components at time t+1. Entry (r, c) set
/// means next-state component c locally depends on row node r.
class LocalMask {
 public:
  LocalMask(int num_state, int num_action);
  /// Build from explicit rows; the row count must be at least the column count.
  static LocalMask from_rows(const std::vector<std::vector<int>>& rows);
  static LocalMask identity(int num_state, int num_action);
  static LocalMask full(int num_state, int num_action);

  int rows() const { return num_state_ + num_action_; }
  int cols() const { return num_state_; }
  int num_state() const { return num_state_; }
  int num_action() const { return num_action_; }

  bool operator()(int r, int c) const { return bits_[static_cast<std::size_t>(r) * num_state_ + c] != 0; }
  void set(int r, int c, bool value = true);

  int count() const;
  /// Throws InvalidMaskError when the shape does not match the space.
  void check_matches(const FactoredSpace& space) const;

  bool operator==(const LocalMask&) const = default;
  std::string to_string() const;

 private:
  int num_state_;
  int num_action_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace coda
