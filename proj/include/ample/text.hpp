// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ample::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split(std::string_view s, char sep);

/// Strict full-string parses; throw ParseError mentioning `what`.
double parse_double(std::string_view s, std::string_view what);
std::int64_t parse_int(std::string_view s, std::string_view what);
std::vector<double> parse_double_list(std::string_view s, std::string_view what);

/// Flat `key = value` text. Blank lines and `#` comments are ignored;
/// duplicate keys are rejected. Keys are consumed with `take`, and
/// `reject_unknown` fails on whatever is left.
class KeyValues {
public:
    static KeyValues parse(std::istream& in, std::string_view source);
    static KeyValues parse(std::string_view text, std::string_view source);

    bool has(std::string_view key) const;
    std::optional<std::string> take(std::string_view key);
    std::string take_required(std::string_view key);
    std::optional<double> take_double(std::string_view key);
    double take_double_required(std::string_view key);
    void reject_unknown() const;

    const std::string& source() const noexcept { return source_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry, std::less<>> entries_;
    std::string source_;
};

/// 64-bit FNV-1a, used for content fingerprints in manifests.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

}  // namespace ample::text
