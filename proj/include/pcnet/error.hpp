#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcnet {

enum class ErrorCode {
  ParseError,
  SchemaError,
  UnknownConcept,
  UnknownFeature,
  UnknownAction,
  UnknownState,
  NotASubconcept,
  ZeroPriorAncestor,
  NotInternal,
  ChildDiagramMissing,
  FeatureSetMismatch,
  CoverInvalid,
  CoverSpaceTooLarge,
  NotInCover,
  LeafNotSpecializable,
  NotSiblingComplete,
  DiagramMissing,
  EvidenceImpossible,
  UnobservedFeatureInEvidence,
  JointTooLarge,
  InitInvalid,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; callers switch on
// code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pcnet
