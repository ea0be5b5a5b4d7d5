// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/error.hpp"

namespace ample {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::OutOfBounds: return "OutOfBounds";
        case Errc::DegenerateLink: return "DegenerateLink";
        case Errc::CiExceedsLink: return "CiExceedsLink";
        case Errc::InvalidLine: return "InvalidLine";
        case Errc::RegionCountMismatch: return "RegionCountMismatch";
        case Errc::DistanceBelowReference: return "DistanceBelowReference";
        case Errc::NonPositiveSigma: return "NonPositiveSigma";
        case Errc::Diverged: return "Diverged";
        case Errc::EmptyDataset: return "EmptyDataset";
        case Errc::DegenerateDesign: return "DegenerateDesign";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::Empty: return "Empty";
        case Errc::TooFewPoints: return "TooFewPoints";
        case Errc::AllFamiliesFailed: return "AllFamiliesFailed";
        case Errc::ParseError: return "ParseError";
        case Errc::SchemaError: return "SchemaError";
        case Errc::UnknownTag: return "UnknownTag";
        case Errc::InvalidRecipe: return "InvalidRecipe";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace ample
