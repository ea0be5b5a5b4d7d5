// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ample {

enum class Errc {
    OutOfBounds,
    DegenerateLink,
    CiExceedsLink,
    InvalidLine,
    RegionCountMismatch,
    DistanceBelowReference,
    NonPositiveSigma,
    Diverged,
    EmptyDataset,
    DegenerateDesign,
    LengthMismatch,
    Empty,
    TooFewPoints,
    AllFamiliesFailed,
    ParseError,
    SchemaError,
    UnknownTag,
    InvalidRecipe,
    InvalidArgument,
    Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace ample
