#pragma once

#include <stdexcept>
#include <string>

namespace portnet {

/// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// twoport / mna
class InvalidElement : public Error { public: using Error::Error; };
class SingularNetwork : public Error { public: using Error::Error; };
class InvalidTopology : public Error { public: using Error::Error; };
class DegenerateConversion : public Error { public: using Error::Error; };
class NoThroughPath : public Error { public: using Error::Error; };

// netlist
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }
private:
    int line_;
};
class NotTwoPort : public Error { public: using Error::Error; };
class AmbiguousOrder : public Error { public: using Error::Error; };
class MissingRange : public Error { public: using Error::Error; };

// dataset / surrogate / cli
class SamplingError : public Error { public: using Error::Error; };
class SchemaMismatch : public Error { public: using Error::Error; };
class TrainingDiverged : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

} // namespace portnet
