// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/text.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "ample/error.hpp"

namespace ample::text {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error(Errc::InvalidArgument, "cannot format number");
    return std::string(buf.data(), end);
}

std::string_view trim(std::string_view s) noexcept {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s, std::string_view what) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(Errc::ParseError, std::string(what) + ": not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
    s = trim(s);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(Errc::ParseError, std::string(what) + ": not an integer: '" + std::string(s) + "'");
    }
    return v;
}

std::vector<double> parse_double_list(std::string_view s, std::string_view what) {
    std::vector<double> out;
    for (auto item : split(s, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, what));
    }
    return out;
}

KeyValues KeyValues::parse(std::istream& in, std::string_view source) {
    KeyValues kv;
    kv.source_ = std::string(source);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Errc::ParseError, kv.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(view.substr(0, eq)));
        const std::string value(trim(view.substr(eq + 1)));
        if (key.empty()) {
            throw Error(Errc::ParseError, kv.source_ + ":" + std::to_string(line_no) + ": empty key");
        }
        if (!kv.entries_.emplace(key, Entry{value, line_no}).second) {
            throw Error(Errc::ParseError, kv.source_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues KeyValues::parse(std::string_view text, std::string_view source) {
    std::istringstream in{std::string(text)};
    return parse(in, source);
}

bool KeyValues::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> KeyValues::take(std::string_view key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::string v = std::move(it->second.value);
    entries_.erase(it);
    return v;
}

std::string KeyValues::take_required(std::string_view key) {
    auto v = take(key);
    if (!v) throw Error(Errc::SchemaError, source_ + ": missing required key '" + std::string(key) + "'");
    return *v;
}

std::optional<double> KeyValues::take_double(std::string_view key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    const std::string what = source_ + ":" + std::to_string(it->second.line) + ": " + std::string(key);
    const double v = parse_double(it->second.value, what);
    entries_.erase(it);
    return v;
}

double KeyValues::take_double_required(std::string_view key) {
    auto v = take_double(key);
    if (!v) throw Error(Errc::SchemaError, source_ + ": missing required key '" + std::string(key) + "'");
    return *v;
}

void KeyValues::reject_unknown() const {
    if (entries_.empty()) return;
    const auto& [key, entry] = *entries_.begin();
    throw Error(Errc::SchemaError, source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) noexcept {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace ample::text
