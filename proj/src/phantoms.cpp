#include "phantoms.hpp"

#include <cmath>

#include "error.hpp"

namespace pcip {

PhantomKind phantom_kind_from_name(const std::string& name) {
  if (name == "zero") return PhantomKind::Zero;
  if (name == "ellipse") return PhantomKind::Ellipse;
  if (name == "two-bars" || name == "two_bars") return PhantomKind::TwoBars;
  if (name == "letter-t" || name == "letter_t") return PhantomKind::LetterT;
  if (name == "constant") return PhantomKind::Constant;
  throw Error(ErrorCode::InvalidConfig,
              "unknown phantom '" + name + "' (expected zero|ellipse|two-bars|letter-t|constant)");
}

std::string phantom_name(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::Zero: return "zero";
    case PhantomKind::Ellipse: return "ellipse";
    case PhantomKind::TwoBars: return "two-bars";
    case PhantomKind::LetterT: return "letter-t";
    case PhantomKind::Constant: return "constant";
  }
  return "?";
}

namespace {
// bump exponent for the ellipse inclusion; the inclusion is r2 < a2
double ellipse_r2(double x, double z) { return 0.35 * x * x + (z - 0.4) * (z - 0.4); }
constexpr double kEllipseA2 = 0.55 * 0.55;

bool in_bar(double x, double z, double zc) {
  return std::max(0.25 * std::abs(x), 4.0 * std::abs(z - zc)) < 0.8;
}
}  // namespace

double eval_phantom(const PhantomSpec& spec, double x, double z) {
  switch (spec.kind) {
    case PhantomKind::Zero:
      return 0.0;
    case PhantomKind::Constant:
      return spec.c0;
    case PhantomKind::Ellipse: {
      const double r2 = ellipse_r2(x, z);
      if (r2 >= kEllipseA2) return 0.0;
      return std::exp(-r2 / (kEllipseA2 - r2));
    }
    case PhantomKind::TwoBars:
      return (in_bar(x, z, 0.6) || in_bar(x, z, -0.6)) ? 1.0 : 0.0;
    case PhantomKind::LetterT: {
      const bool cap = std::abs(x) <= spec.cap_hw && z >= spec.cap_lo && z <= spec.cap_hi;
      const bool stem = std::abs(x) <= spec.stem_hw && z >= spec.stem_lo && z < spec.cap_lo;
      return (cap || stem) ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

std::vector<InclusionMask> inclusion_masks(const PhantomSpec& spec) {
  switch (spec.kind) {
    case PhantomKind::Zero:
      return {};
    case PhantomKind::Constant:
      return {{"domain", [](double, double) { return true; }}};
    case PhantomKind::Ellipse:
      return {{"ellipse", [](double x, double z) { return ellipse_r2(x, z) < kEllipseA2; }}};
    case PhantomKind::TwoBars:
      return {{"upper bar", [](double x, double z) { return in_bar(x, z, 0.6); }},
              {"lower bar", [](double x, double z) { return in_bar(x, z, -0.6); }}};
    case PhantomKind::LetterT: {
      PhantomSpec s = spec;
      return {{"letter T", [s](double x, double z) { return eval_phantom(s, x, z) > 0.5; }}};
    }
  }
  return {};
}

}  // namespace pcip
