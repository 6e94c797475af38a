#include "daaclab/envs/family.hpp"

#include "daaclab/common/error.hpp"

namespace daaclab::envs {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kCorridor:
      return "corridor";
    case Family::kGapworld:
      return "gapworld";
  }
  return "corridor";
}

Family parse_family(std::string_view text) {
  if (text == "corridor") return Family::kCorridor;
  if (text == "gapworld") return Family::kGapworld;
  throw DomainError("unknown family: " + std::string(text));
}

void FamilyParams::validate() const {
  if (min_length < 2) throw DomainError("min_length must be at least 2");
  if (max_length < min_length) {
    throw DomainError("max_length must be >= min_length");
  }
  if (window < 1) throw DomainError("window must be >= 1");
  if (background_dim < 1) throw DomainError("background_dim must be >= 1");
  if (!(hazard_density >= 0.0 && hazard_density <= 1.0)) {
    throw DomainError("hazard_density must lie in [0, 1]");
  }
  if (max_steps < max_length) {
    throw DomainError("max_steps must be >= max_length");
  }
  if (hazard_period < 1) throw DomainError("hazard_period must be >= 1");
}

}  // namespace daaclab::envs
