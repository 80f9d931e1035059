#pragma once

#include <stdexcept>
#include <string>

namespace parisian {

enum class ErrorKind {
    Parameter,    // argument outside its documented range
    Dimension,    // grid/window/shape mismatch
    Internal,     // broken invariant inside the library
    Degeneracy,   // model violates a non-degeneracy assumption
    BoundaryCase, // optimal point on the horizon boundary (unsupported)
    Dependency,   // required input (e.g. a constant estimate) missing
    Usage,        // operation called on an incompatible case
    Config,       // config file parse/validation failure
    Io,           // file system failure
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    const char* kind_name() const {
        switch (kind_) {
            case ErrorKind::Parameter: return "parameter";
            case ErrorKind::Dimension: return "dimension";
            case ErrorKind::Internal: return "internal";
            case ErrorKind::Degeneracy: return "degeneracy";
            case ErrorKind::BoundaryCase: return "boundary_case";
            case ErrorKind::Dependency: return "dependency";
            case ErrorKind::Usage: return "usage";
            case ErrorKind::Config: return "config";
            case ErrorKind::Io: return "io";
        }
        return "unknown";
    }

  private:
    ErrorKind kind_;
};

} // namespace parisian
