#include "taxodev/error.hpp"

namespace taxodev {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::InvalidK: return "InvalidK";
        case ErrorKind::NoMethods: return "NoMethods";
        case ErrorKind::UnknownPeriod: return "UnknownPeriod";
        case ErrorKind::Io: return "Io";
        case ErrorKind::MalformedRow: return "MalformedRow";
        case ErrorKind::DuplicateObservation: return "DuplicateObservation";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::EmptyCrossSection: return "EmptyCrossSection";
        case ErrorKind::EmptyGroup: return "EmptyGroup";
        case ErrorKind::UnassignedEntity: return "UnassignedEntity";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::TooFewObjects: return "TooFewObjects";
        case ErrorKind::DegenerateVariable: return "DegenerateVariable";
        case ErrorKind::DegenerateSpread: return "DegenerateSpread";
        case ErrorKind::DoubleOrientation: return "DoubleOrientation";
        case ErrorKind::NotOriented: return "NotOriented";
        case ErrorKind::ZeroBaseline: return "ZeroBaseline";
        case ErrorKind::IndexUndefined: return "IndexUndefined";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidConfig:
        case ErrorKind::InvalidK:
        case ErrorKind::NoMethods:
        case ErrorKind::UnknownPeriod:
            return 2;
        case ErrorKind::Io:
        case ErrorKind::MalformedRow:
        case ErrorKind::DuplicateObservation:
        case ErrorKind::UnknownVariable:
        case ErrorKind::EmptyCrossSection:
        case ErrorKind::EmptyGroup:
        case ErrorKind::UnassignedEntity:
        case ErrorKind::SchemaMismatch:
        case ErrorKind::TooFewObjects:
            return 3;
        case ErrorKind::DegenerateVariable:
        case ErrorKind::DegenerateSpread:
        case ErrorKind::DoubleOrientation:
        case ErrorKind::NotOriented:
        case ErrorKind::ZeroBaseline:
        case ErrorKind::IndexUndefined:
            return 4;
    }
    return 1;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace taxodev
