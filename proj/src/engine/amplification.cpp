#include "coda/engine/amplification.hpp"

#include <limits>
#include <string>

namespace coda::engine {

std::int64_t amplification_bound(std::int64_t n_samples, int m_components) {
  if (n_samples < 1 || m_components < 1) throw std::invalid_argument("amplification_bound: need n >= 1 and m >= 1");
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t result = 1;
  for (int k = 0; k < m_components; ++k) {
    if (result > kMax / n_samples) {
      throw AmplificationOverflow("amplification_bound: " + std::to_string(n_samples) + "^" +
                                  std::to_string(m_components) + " exceeds 2^63-1");
    }
    result *= n_samples;
  }
  return result;
}

}  // namespace coda::engine
