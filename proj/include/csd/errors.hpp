#pragma once

#include <stdexcept>
#include <string>

namespace csd {

// Base class for all library errors. Subclasses match the failure modes of
// the individual operations so callers can catch selectively.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexOutOfRange : Error { using Error::Error; };
struct NonPositiveTerm : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct TailNotConverged : Error { using Error::Error; };
struct NegativeParameter : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct DivergentIntegral : Error { using Error::Error; };
struct ZeroEvidence : Error { using Error::Error; };
struct CertificateFailed : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct DivergentNormalizer : Error { using Error::Error; };
struct SizeLimit : Error { using Error::Error; };
struct InvalidInterval : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct UnknownFamily : Error { using Error::Error; };

}  // namespace csd
