#ifndef BRANE_ERROR_HPP
#define BRANE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace brane {

enum class ErrorKind {
  NonDegenerateRequired,
  NotAlmostComplex,
  DegenerateForm,
  NotPointwiseBrane,
  NotSkew,
  WrongSpace,
  SignatureMismatch,
  DegenerateSubspace,
  SpaceMismatch,
  DegenerateQuadric,
  TargetOutsideSpan,
  NotInQuadric,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonDegenerateRequired: return "NonDegenerateRequired";
    case ErrorKind::NotAlmostComplex: return "NotAlmostComplex";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::NotPointwiseBrane: return "NotPointwiseBrane";
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::WrongSpace: return "WrongSpace";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::DegenerateSubspace: return "DegenerateSubspace";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::DegenerateQuadric: return "DegenerateQuadric";
    case ErrorKind::TargetOutsideSpan: return "TargetOutsideSpan";
    case ErrorKind::NotInQuadric: return "NotInQuadric";
  }
  return "Unknown";
}

/// Domain error raised by every checked operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace brane

#endif  // BRANE_ERROR_HPP
