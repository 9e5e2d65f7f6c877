#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asymgen {

/// Root of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownSymbol : public Error {
 public:
  UnknownSymbol(const std::string& name, std::size_t offset)
      : Error("unknown symbol '" + name + "' at byte " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UnboundSymbol : public Error {
 public:
  explicit UnboundSymbol(const std::string& name)
      : Error("unbound symbol '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Solver-stage rejections. Generators catch these and redraw.
class DegenerateInput : public Error { using Error::Error; };
class InconsistentCover : public Error { using Error::Error; };
class SingularCorrection : public Error { using Error::Error; };
class SingularAtOrigin : public Error { using Error::Error; };
class NoDivergence : public Error { using Error::Error; };
class AmbiguousDominance : public Error { using Error::Error; };
class NoNonzeroSolution : public Error { using Error::Error; };
class DegenerateMax : public Error { using Error::Error; };
class ZeroAmplitude : public Error { using Error::Error; };
class GenerationExhausted : public Error { using Error::Error; };
class TemplateGap : public Error { using Error::Error; };

// Numeric oracle failures.
class NoConvergence : public Error { using Error::Error; };
class StiffFailure : public Error { using Error::Error; };

// I/O and schema.
class IoError : public Error { using Error::Error; };

class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownProblemId : public Error {
 public:
  explicit UnknownProblemId(const std::string& id)
      : Error("unknown problem id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

}  // namespace asymgen
