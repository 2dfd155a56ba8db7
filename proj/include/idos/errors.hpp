#pragma once

#include <stdexcept>
#include <string>

namespace idos {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// field
struct ProvidedModulusReducible : Error {
  using Error::Error;
};
struct DegreeMismatch : Error {
  using Error::Error;
};
struct SearchExhausted : Error {
  using Error::Error;
};
struct ContextMismatch : Error {
  using Error::Error;
};
struct DivisionByZero : Error {
  using Error::Error;
};

// linalg
struct RankDeficient : Error {
  using Error::Error;
};
struct Inconsistent : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};

// shared
struct BadParams : Error {
  using Error::Error;
};
struct PreconditionUnmet : Error {
  using Error::Error;
};
struct OutOfOrderSlot : Error {
  using Error::Error;
};
struct GuardrailExceeded : Error {
  GuardrailExceeded(const std::string& msg, std::uint64_t estimated, std::uint64_t cap)
      : Error(msg), estimated_cases(estimated), max_cases(cap) {}
  std::uint64_t estimated_cases;
  std::uint64_t max_cases;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace idos
