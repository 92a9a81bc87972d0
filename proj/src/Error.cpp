// SPDX-License-Identifier: MIT
#include "openable/Error.h"

namespace openable {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyMesh: return "EmptyMesh";
        case ErrorKind::InvalidDirection: return "InvalidDirection";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::ZeroVolume: return "ZeroVolume";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnsupportedFace: return "UnsupportedFace";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::OverlapError: return "OverlapError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::DegenerateMesh: return "DegenerateMesh";
        case ErrorKind::InvalidCount: return "InvalidCount";
        case ErrorKind::UncoveredTriangle: return "UncoveredTriangle";
        case ErrorKind::InvalidCamera: return "InvalidCamera";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::InvalidMotion: return "InvalidMotion";
        case ErrorKind::NotOpenable: return "NotOpenable";
        case ErrorKind::DegenerateBox: return "DegenerateBox";
        case ErrorKind::DepthTooSmall: return "DepthTooSmall";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace openable
