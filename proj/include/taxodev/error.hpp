#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace taxodev {

enum class ErrorKind {
    // configuration
    InvalidConfig,
    InvalidK,
    NoMethods,
    UnknownPeriod,
    // data
    Io,
    MalformedRow,
    DuplicateObservation,
    UnknownVariable,
    EmptyCrossSection,
    EmptyGroup,
    UnassignedEntity,
    SchemaMismatch,
    TooFewObjects,
    // numerical degeneracy
    DegenerateVariable,
    DegenerateSpread,
    DoubleOrientation,
    NotOriented,
    ZeroBaseline,
    IndexUndefined,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for a failure of this kind: 2 config, 3 data, 4 numerical.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace taxodev
