#pragma once

#include <stdexcept>
#include <string>

namespace ljopt {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument values: non-positive distances, bad option fields, ...
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two atoms closer than the coincidence tolerance; the pair potential is
/// singular there.
class SingularPairError : public Error {
 public:
  SingularPairError(int i, int j)
      : Error("atoms " + std::to_string(i) + " and " + std::to_string(j) +
              " coincide; pair potential is singular"),
        i_(i),
        j_(j) {}
  int atom_i() const noexcept { return i_; }
  int atom_j() const noexcept { return j_; }

 private:
  int i_;
  int j_;
};

/// Text input that cannot be parsed. Carries the source name and the
/// 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, long line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(source),
        line_(line) {}
  const std::string& source() const noexcept { return source_; }
  long line() const noexcept { return line_; }

 private:
  std::string source_;
  long line_;
};

/// Element symbol absent from the active radii table.
class UnknownElementError : public Error {
 public:
  explicit UnknownElementError(const std::string& element)
      : Error("unknown element \"" + element + "\": not in the radii table"),
        element_(element) {}
  const std::string& element() const noexcept { return element_; }

 private:
  std::string element_;
};

/// A value does not fit the fixed-width output field it must occupy.
class FormatOverflowError : public Error {
 public:
  using Error::Error;
};

/// Random placement could not satisfy the minimum-distance requirement.
class PlacementError : public Error {
 public:
  using Error::Error;
};

}  // namespace ljopt
