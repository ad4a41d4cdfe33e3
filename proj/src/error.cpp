#include "pcnet/error.hpp"

namespace pcnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::UnknownAction: return "UnknownAction";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::NotASubconcept: return "NotASubconcept";
    case ErrorCode::ZeroPriorAncestor: return "ZeroPriorAncestor";
    case ErrorCode::NotInternal: return "NotInternal";
    case ErrorCode::ChildDiagramMissing: return "ChildDiagramMissing";
    case ErrorCode::FeatureSetMismatch: return "FeatureSetMismatch";
    case ErrorCode::CoverInvalid: return "CoverInvalid";
    case ErrorCode::CoverSpaceTooLarge: return "CoverSpaceTooLarge";
    case ErrorCode::NotInCover: return "NotInCover";
    case ErrorCode::LeafNotSpecializable: return "LeafNotSpecializable";
    case ErrorCode::NotSiblingComplete: return "NotSiblingComplete";
    case ErrorCode::DiagramMissing: return "DiagramMissing";
    case ErrorCode::EvidenceImpossible: return "EvidenceImpossible";
    case ErrorCode::UnobservedFeatureInEvidence: return "UnobservedFeatureInEvidence";
    case ErrorCode::JointTooLarge: return "JointTooLarge";
    case ErrorCode::InitInvalid: return "InitInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace pcnet
