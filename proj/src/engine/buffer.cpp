#include "coda/engine/buffer.hpp"

#include <cmath>
#include <stdexcept>

namespace coda::engine {

AugmentedBuffer::AugmentedBuffer(double ratio) : ratio_(0.0) { set_ratio(ratio); }

void AugmentedBuffer::set_ratio(double ratio) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) throw std::invalid_argument("AugmentedBuffer: ratio must be >= 0");
  ratio_ = ratio;
}

void AugmentedBuffer::add_real(Transition t) {
  if (t.provenance != Provenance::Real) throw std::invalid_argument("AugmentedBuffer: real pool takes real transitions");
  real_.push_back(std::move(t));
}

void AugmentedBuffer::add_coda(Transition t) {
  if (t.provenance == Provenance::Real) throw std::invalid_argument("AugmentedBuffer: coda pool takes counterfactuals");
  coda_.push_back(std::move(t));
}

void AugmentedBuffer::add_coda(std::vector<Transition> ts) {
  for (auto& t : ts) add_coda(std::move(t));
}

double AugmentedBuffer::coda_fraction() const {
  if (coda_.empty()) return 0.0;
  if (real_.empty()) return 1.0;
  return ratio_ / (1.0 + ratio_);
}

std::vector<Transition> AugmentedBuffer::sample(std::size_t count, Rng& rng) const {
  if (count > 0 && size() == 0) throw std::logic_error("AugmentedBuffer: sampling from an empty buffer");
  std::bernoulli_distribution from_coda(coda_fraction());
  std::vector<Transition> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& pool = from_coda(rng) ? coda_ : real_;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    out.push_back(pool[pick(rng)]);
  }
  return out;
}

}  // namespace coda::engine
