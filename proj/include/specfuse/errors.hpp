#pragma once

#include <stdexcept>
#include <string>

namespace specfuse {

// Base of every error the library throws. Catch this at the batch boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileNotFound : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidStats : public Error {
 public:
  using Error::Error;
};

class InvalidSigma : public Error {
 public:
  using Error::Error;
};

class InvalidK : public Error {
 public:
  using Error::Error;
};

class EmptyRegion : public Error {
 public:
  using Error::Error;
};

class TooManyLevels : public Error {
 public:
  using Error::Error;
};

class MalformedPyramid : public Error {
 public:
  using Error::Error;
};

class InvalidThresholds : public Error {
 public:
  using Error::Error;
};

class NoPairsFound : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace specfuse
