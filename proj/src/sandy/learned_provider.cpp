#include "coda/sandy/learned_provider.hpp"

namespace coda::sandy {

LearnedProvider::LearnedProvider(std::shared_ptr<MaskModel> model, double tau) : model_(std::move(model)), tau_(tau) {
  if (!model_) throw std::invalid_argument("LearnedProvider: missing model");
}

LocalMask LearnedProvider::mask(const FactoredVector& s, const FactoredVector& a) const {
  if (!(s.space() == *model_->space())) throw DimensionError("LearnedProvider: state does not match the model");
  return model_->mask(s, a, tau_);
}

}  // namespace coda::sandy
