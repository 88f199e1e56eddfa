#pragma once

#include <cstdint>
#include <stdexcept>

namespace coda::engine {

class AmplificationOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// n^m: the number of distinct samples reachable by recombining m always
/// independent components across n transitions. Throws AmplificationOverflow
/// above 2^63 - 1.
std::int64_t amplification_bound(std::int64_t n_samples, int m_components);

}  // namespace coda::engine
