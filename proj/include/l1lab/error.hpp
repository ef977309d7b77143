#pragma once

#include <stdexcept>
#include <string>

namespace l1lab {

// Invalid argument values or flag combinations.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested instance exceeds a configured size cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside the range where the underlying inequality is valid.
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class DegenerateEmbedding : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Embedding distortion exceeds the advertised 1+eps.
class NotAnEmbedding : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSource : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroundSetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ZeroMass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidFamily : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A certificate inequality failed. `check()` names it.
class CertificateViolation : public std::runtime_error {
 public:
  CertificateViolation(std::string check, const std::string& what)
      : std::runtime_error(what), check_(std::move(check)) {}
  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, double achieved_eps)
      : std::runtime_error(what), achieved_eps_(achieved_eps) {}
  double achieved_eps() const noexcept { return achieved_eps_; }

 private:
  double achieved_eps_;
};

}  // namespace l1lab
