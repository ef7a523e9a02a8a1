#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtkit {

/// Base class of every error raised by rtkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// seir_core
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

// optimizer
class NonFiniteObjective : public Error {
 public:
  using Error::Error;
};

// rt_estimator
class ThresholdNeverReached : public Error {
 public:
  using Error::Error;
};

class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

class NegativeCompartment : public Error {
 public:
  using Error::Error;
};

// data_ingest
class UnknownCountry : public Error {
 public:
  using Error::Error;
};

class MalformedRow : public Error {
 public:
  MalformedRow(std::string file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class DateGap : public Error {
 public:
  using Error::Error;
};

class NoStreams : public Error {
 public:
  using Error::Error;
};

class NoOverlap : public Error {
 public:
  using Error::Error;
};

// stats
class TooFewPairs : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

// cli
class IncompleteSnapshot : public Error {
 public:
  using Error::Error;
};

}  // namespace rtkit
