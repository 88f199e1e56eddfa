#include "coda/core/mask.hpp"

#include <algorithm>

namespace coda {

LocalMask::LocalMask(int num_state, int num_action)
    : num_state_(num_state), num_action_(num_action) {
  if (num_state < 1 || num_action < 0) throw InvalidMaskError("LocalMask: need n >= 1 and m >= 0");
  bits_.assign(static_cast<std::size_t>(num_state + num_action) * num_state, 0);
}

LocalMask LocalMask::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty()) throw InvalidMaskError("LocalMask: empty matrix");
  const int cols = static_cast<int>(rows.front().size());
  const int nrows = static_cast<int>(rows.size());
  if (nrows < cols) throw InvalidMaskError("LocalMask: fewer rows than columns");
  LocalMask m(cols, nrows - cols);
  for (int r = 0; r < nrows; ++r) {
    if (static_cast<int>(rows[r].size()) != cols) throw InvalidMaskError("LocalMask: ragged rows");
    for (int c = 0; c < cols; ++c) {
      if (rows[r][c] != 0 && rows[r][c] != 1) throw InvalidMaskError("LocalMask: entries must be 0 or 1");
      m.set(r, c, rows[r][c] == 1);
    }
  }
  return m;
}

LocalMask LocalMask::identity(int num_state, int num_action) {
  LocalMask m(num_state, num_action);
  for (int i = 0; i < num_state; ++i) m.set(i, i);
  return m;
}

LocalMask LocalMask::full(int num_state, int num_action) {
  LocalMask m(num_state, num_action);
  std::fill(m.bits_.begin(), m.bits_.end(), 1);
  return m;
}

void LocalMask::set(int r, int c, bool value) {
  if (r < 0 || r >= rows() || c < 0 || c >= cols()) throw InvalidMaskError("LocalMask::set: index out of range");
  bits_[static_cast<std::size_t>(r) * num_state_ + c] = value ? 1 : 0;
}

int LocalMask::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void LocalMask::check_matches(const FactoredSpace& space) const {
  if (num_state_ != space.num_state_components() || num_action_ != space.num_action_components()) {
    throw InvalidMaskError("LocalMask: shape " + std::to_string(rows()) + "x" + std::to_string(cols()) +
                           " does not match space with n=" + std::to_string(space.num_state_components()) +
                           ", m=" + std::to_string(space.num_action_components()));
  }
}

std::string LocalMask::to_string() const {
  std::string out;
  for (int r = 0; r < rows(); ++r) {
    for (int c = 0; c < cols(); ++c) out += (*this)(r, c) ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace coda
