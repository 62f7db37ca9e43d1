#pragma once

#include <stdexcept>
#include <string>

namespace ncrna {

// Base class for all library failures so callers can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidSeed : Error { using Error::Error; };
struct MalformedSequence : Error { using Error::Error; };
struct OracleTooLarge : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InvalidPerturbation : Error { using Error::Error; };
struct InvalidSecret : Error { using Error::Error; };
struct InvalidSalt : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct IntegrityFailure : Error { using Error::Error; };
struct MalformedPayload : Error { using Error::Error; };
struct EntropyUnavailable : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct TooSmall : Error { using Error::Error; };
struct InvalidProfile : Error { using Error::Error; };
struct StateTooLarge : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
struct BaselineUnavailable : Error { using Error::Error; };

}  // namespace ncrna
