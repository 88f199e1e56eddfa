#pragma once

#include <memory>

#include "coda/engine/mask_provider.hpp"
#include "coda/sandy/model.hpp"

namespace coda::sandy {

/// Thresholded SANDy mask as a CoDA mask provider. Queries only run forward
/// passes, so concurrent calls are safe as long as nobody trains the model.
class LearnedProvider final : public engine::MaskProvider {
 public:
  LearnedProvider(std::shared_ptr<MaskModel> model, double tau);

  std::string name() const override { return "learned_" + model_->kind(); }
  LocalMask mask(const FactoredVector& s, const FactoredVector& a) const override;
  double tau() const { return tau_; }

 private:
  std::shared_ptr<MaskModel> model_;
  double tau_;
};

}  // namespace coda::sandy
