#pragma once

#include <stdexcept>
#include <string>

namespace agen {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AGEN_DECLARE_ERROR(name)              \
  class name : public Error {                 \
   public:                                    \
    explicit name(const std::string& what);   \
  }

// Kernel domain.
AGEN_DECLARE_ERROR(PoleProximity);
AGEN_DECLARE_ERROR(BranchViolation);
AGEN_DECLARE_ERROR(ZeroArgument);

// Quadrature.
AGEN_DECLARE_ERROR(QuadratureNonConvergence);
AGEN_DECLARE_ERROR(NonFiniteSample);
AGEN_DECLARE_ERROR(TruncationDominates);

// Models and operators.
AGEN_DECLARE_ERROR(OverflowRisk);
AGEN_DECLARE_ERROR(HypothesisViolation);
AGEN_DECLARE_ERROR(GraphMembershipViolation);
AGEN_DECLARE_ERROR(FitUnstable);
AGEN_DECLARE_ERROR(InvalidArgument);

#undef AGEN_DECLARE_ERROR

}  // namespace agen
