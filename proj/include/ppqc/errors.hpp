#pragma once

#include <stdexcept>
#include <string>

namespace ppqc {

// Base of every library error. `kind()` is a stable machine-parsable tag,
// `what()` the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define PPQC_DEFINE_ERROR(NAME)                  \
  class NAME : public Error {                    \
   public:                                       \
    explicit NAME(const std::string& message)    \
        : Error(#NAME, message) {}               \
  }

PPQC_DEFINE_ERROR(DimensionError);
PPQC_DEFINE_ERROR(NotHermitianError);
PPQC_DEFINE_ERROR(NotUnitaryError);
PPQC_DEFINE_ERROR(SizeError);
PPQC_DEFINE_ERROR(ParameterError);
PPQC_DEFINE_ERROR(NormalizationError);
PPQC_DEFINE_ERROR(StateError);
PPQC_DEFINE_ERROR(OracleError);
PPQC_DEFINE_ERROR(ConstantFunctionError);
PPQC_DEFINE_ERROR(ProjectionError);
PPQC_DEFINE_ERROR(ConfigError);
PPQC_DEFINE_ERROR(IoError);

#undef PPQC_DEFINE_ERROR

}  // namespace ppqc
