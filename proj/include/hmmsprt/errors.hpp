#pragma once

#include <stdexcept>
#include <string>

namespace hmmsprt {

// Base for all domain errors. Exit code 1 at the CLI boundary; usage
// errors (bad argv) are CLI11's business and exit 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define HMMSPRT_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                           \
        explicit Name(const std::string& what) : Error(what) {}     \
    }

HMMSPRT_DEFINE_ERROR(NonStochastic);
HMMSPRT_DEFINE_ERROR(NegativeEntry);
HMMSPRT_DEFINE_ERROR(UnknownSymbol);
HMMSPRT_DEFINE_ERROR(ParseError);
HMMSPRT_DEFINE_ERROR(Singular);
HMMSPRT_DEFINE_ERROR(NotIrreducible);
HMMSPRT_DEFINE_ERROR(TargetNotClosed);
HMMSPRT_DEFINE_ERROR(CapExceeded);
HMMSPRT_DEFINE_ERROR(BadErrorBounds);
HMMSPRT_DEFINE_ERROR(ImpossibleObservation);
HMMSPRT_DEFINE_ERROR(HitNegInfinity);
HMMSPRT_DEFINE_ERROR(NodeCapExceeded);
HMMSPRT_DEFINE_ERROR(ClassificationIncomplete);
HMMSPRT_DEFINE_ERROR(NotDeterministic);
HMMSPRT_DEFINE_ERROR(FactorizationCapExceeded);
HMMSPRT_DEFINE_ERROR(AlphabetMismatch);
HMMSPRT_DEFINE_ERROR(AllTrajectoriesDead);
HMMSPRT_DEFINE_ERROR(EmptyAfterTrimming);

#undef HMMSPRT_DEFINE_ERROR

}  // namespace hmmsprt
