#include "sbk/kernels.hpp"

namespace sbk {

std::string to_string(SupportClass s) {
  switch (s) {
    case SupportClass::Empty: return "Empty";
    case SupportClass::Point0: return "Point0";
    case SupportClass::LineF: return "LineF";
    case SupportClass::AllE: return "AllE";
  }
  return "?";
}

SupportClass classify_support(const FieldPair& fp, const ParamTuple& pt) {
  const Regime r = regime(fp, pt);
  if (r.in_l) return SupportClass::Empty;
  if (r.slash) return SupportClass::Point0;
  if (r.backslash) return SupportClass::LineF;
  return SupportClass::AllE;
}

KernelBasis kernel_space_basis(const FieldPair& fp, const ParamTuple& pt) {
  if (regime(fp, pt).in_l) return {2, {KernelVariant::Delta, KernelVariant::DoubleTilde}};
  return {1, {KernelVariant::Normalized}};
}

}  // namespace sbk
