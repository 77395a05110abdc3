#include "agen/errors.hpp"

namespace agen {

#define AGEN_DEFINE_ERROR(name) \
  name::name(const std::string& what) : Error(#name ": " + what) {}

AGEN_DEFINE_ERROR(PoleProximity)
AGEN_DEFINE_ERROR(BranchViolation)
AGEN_DEFINE_ERROR(ZeroArgument)
AGEN_DEFINE_ERROR(QuadratureNonConvergence)
AGEN_DEFINE_ERROR(NonFiniteSample)
AGEN_DEFINE_ERROR(TruncationDominates)
AGEN_DEFINE_ERROR(OverflowRisk)
AGEN_DEFINE_ERROR(HypothesisViolation)
AGEN_DEFINE_ERROR(GraphMembershipViolation)
AGEN_DEFINE_ERROR(FitUnstable)
AGEN_DEFINE_ERROR(InvalidArgument)

#undef AGEN_DEFINE_ERROR

}  // namespace agen
