#ifndef PCIP_PHANTOMS_HPP
#define PCIP_PHANTOMS_HPP

#include <functional>
#include <string>
#include <vector>

namespace pcip {

enum class PhantomKind { Zero, Ellipse, TwoBars, LetterT, Constant };

// The built-in true coefficients. Supports are contained in (-1, 1)^2.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::Zero;
  double c0 = 0.0;  // Constant kind only

  // letter-T geometry: cap [-cap_hw, cap_hw] x [cap_lo, cap_hi],
  // stem [-stem_hw, stem_hw] x [stem_lo, cap_lo]
  double cap_hw = 0.5, cap_lo = 0.4, cap_hi = 0.7;
  double stem_hw = 0.15, stem_lo = -0.6;
};

PhantomKind phantom_kind_from_name(const std::string& name);
std::string phantom_name(PhantomKind kind);

double eval_phantom(const PhantomSpec& spec, double x, double z);

// Analytic support set of one inclusion, for reconstruction metrics.
struct InclusionMask {
  std::string name;
  std::function<bool(double, double)> inside;
};

std::vector<InclusionMask> inclusion_masks(const PhantomSpec& spec);

}  // namespace pcip

#endif
