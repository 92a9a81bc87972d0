// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace openable {

enum class ErrorKind {
    EmptyMesh,
    InvalidDirection,
    EmptyInput,
    ZeroVolume,
    ParseError,
    UnsupportedFace,
    IndexOutOfRange,
    OverlapError,
    SchemaError,
    IoError,
    DegenerateMesh,
    InvalidCount,
    UncoveredTriangle,
    InvalidCamera,
    ShapeMismatch,
    InvalidMotion,
    NotOpenable,
    DegenerateBox,
    DepthTooSmall,
    ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// batch pipeline) can branch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace openable
