// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "ample/dataio.hpp"
#include "ample/error.hpp"
#include "oracles.hpp"

using namespace ample;

namespace {

const char* kHeader = "tx_lat,tx_lon,rx_lat,rx_lon,distance3d_m,freq_ghz,path_loss_db";

RawDataset parse(const std::string& text) {
    std::istringstream in(text);
    return read_dataset(in, "fixture");
}

SamplePoint point(double d, double f, double l, std::string city = {}) {
    SamplePoint p;
    p.tx = {53.38, -1.47};
    p.rx = {53.381, -1.469};
    p.distance3d = d;
    p.freq_ghz = f;
    p.path_loss = l;
    p.city = std::move(city);
    return p;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_points(const RawDataset& a, const RawDataset& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto &p = a.points[i], &q = b.points[i];
        if (!same_bits(p.tx.lat, q.tx.lat) || !same_bits(p.tx.lon, q.tx.lon) || !same_bits(p.rx.lat, q.rx.lat) ||
            !same_bits(p.rx.lon, q.rx.lon) || !same_bits(p.distance3d, q.distance3d) ||
            !same_bits(p.freq_ghz, q.freq_ghz) || !same_bits(p.path_loss, q.path_loss) || p.city != q.city ||
            p.los != q.los) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST(ReadDataset, EmptyFileIsSchemaError) {
    try {
        (void)parse("");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SchemaError);
    }
}

TEST(ReadDataset, SingleRow) {
    const auto d = parse(std::string(kHeader) + "\n53.38,-1.47,53.381,-1.469,150.5,2.1,101.25\n");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.points[0].distance3d, 150.5);
    EXPECT_EQ(d.points[0].freq_ghz, 2.1);
    EXPECT_EQ(d.points[0].path_loss, 101.25);
    EXPECT_FALSE(d.points[0].los);
}

TEST(ReadDataset, NonPositiveFrequencyNamesRow) {
    const std::string text = std::string(kHeader) +
                             "\n53.38,-1.47,53.381,-1.469,150,2.1,100\n"
                             "53.38,-1.47,53.381,-1.469,150,0,100\n";
    try {
        (void)parse(text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
    }
}

TEST(ReadDataset, SchemaProblems) {
    for (const std::string& text : {std::string("tx_lat,tx_lon\n1,2\n"),
                                   std::string(kHeader) + ",bogus\n",
                                   std::string(kHeader) + ",freq_ghz\n"}) {
        try {
            (void)parse(text);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::SchemaError);
        }
    }
}

TEST(ReadDataset, ColumnOrderAndOptionalFields) {
    const auto d = parse(
        "city,los,path_loss_db,freq_ghz,distance3d_m,rx_lon,rx_lat,tx_lon,tx_lat\n"
        "sheffield,NLOS,120,3.5,400,-1.46,53.39,-1.47,53.38\n");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.points[0].city, "sheffield");
    EXPECT_EQ(d.points[0].los, Visibility::Nlos);
    EXPECT_EQ(d.points[0].tx.lat, 53.38);
    EXPECT_EQ(d.points[0].rx.lon, -1.46);
    EXPECT_THROW((void)parse(std::string(kHeader) + ",los\n1,2,3,4,5,6,7,maybe\n"), Error);
    EXPECT_THROW((void)parse(std::string(kHeader) + "\n1,2,3,4,5,6\n"), Error);
    EXPECT_THROW((void)parse(std::string(kHeader) + "\n1,2,3,4,-5,6,7\n"), Error);
}

TEST(WriteDataset, RoundTripIsBitExact) {
    Rng rng(17);
    RawDataset d;
    for (int i = 0; i < 500; ++i) {
        auto p = point(1.0 + 1000.0 * rng.uniform(), 0.5 + 30.0 * rng.uniform(), 60 + 90 * rng.uniform(),
                       i % 3 ? "a" : "b");
        p.tx = {53.0 + rng.uniform(), -1.5 + rng.uniform()};
        p.rx = {53.0 + rng.uniform(), -1.5 + rng.uniform()};
        if (i % 4) p.los = i % 2 ? Visibility::Los : Visibility::Nlos;
        d.points.push_back(p);
    }
    std::ostringstream out;
    write_dataset(out, d);
    const auto back = parse(out.str());
    EXPECT_TRUE(same_points(d, back));
    std::ostringstream again;
    write_dataset(again, back);
    EXPECT_EQ(out.str(), again.str());
}

// --- filtering ----------------------------------------------------------------

TEST(Filter, PermissiveSpecIsIdentity) {
    RawDataset d;
    for (int i = 1; i <= 20; ++i) d.points.push_back(point(10.0 * i, 2.1, 80 + i));
    FilterSpec spec;
    spec.max_path_loss = 1e9;
    const auto out = filter_dataset(d, spec);
    EXPECT_TRUE(same_points(d, out));
}

TEST(Filter, AllAboveCeilingIsEmpty) {
    RawDataset d;
    for (int i = 1; i <= 5; ++i) d.points.push_back(point(10.0 * i, 2.1, 200.0));
    EXPECT_TRUE(filter_dataset(d, FilterSpec{}).empty());
}

TEST(Filter, TenPointFixture) {
    RawDataset d;
    d.points = {point(50, 2.1, 100),   point(60, 2.1, 151),  // loss over ceiling
                point(70, 3.5, 110),   point(5, 2.1, 90),    // closer than 10 m
                point(80, 0.85, 105),  point(90, 28.0, 120),  // 28 GHz not whitelisted
                point(100, 2.1, 150),  point(110, 3.5, 149.9), point(999, 0.85, 140), point(120, 2.1, 130)};
    FilterSpec spec;
    spec.min_distance = 10.0;
    spec.frequency_whitelist = {0.85, 2.1, 3.5};
    const auto out = filter_dataset(d, spec);
    ASSERT_EQ(out.size(), 7u);
    const std::vector<double> kept{50, 70, 80, 100, 110, 999, 120};
    for (std::size_t i = 0; i < kept.size(); ++i) EXPECT_EQ(out.points[i].distance3d, kept[i]);
    EXPECT_EQ(out.points[0].distance_bin, 10);
    EXPECT_EQ(out.points[5].distance_bin, 199);
}

TEST(Filter, Idempotent) {
    Rng rng(3);
    RawDataset d;
    for (int i = 0; i < 400; ++i) {
        d.points.push_back(point(1 + 900 * rng.uniform(), std::array{0.85, 2.1, 5.0}[rng() % 3], 60 + 110 * rng.uniform(),
                                 i % 2 ? "x" : "y"));
    }
    for (bool avg : {false, true}) {
        FilterSpec spec;
        spec.min_distance = 20;
        spec.max_distance = 700;
        spec.distance_bin = 25;
        spec.average_bins = avg;
        const auto once = filter_dataset(d, spec);
        const auto twice = filter_dataset(once, spec);
        EXPECT_LE(once.size(), d.size());
        EXPECT_TRUE(same_points(once, twice)) << "average=" << avg;
    }
}

TEST(Filter, AveragingCollapsesCells) {
    RawDataset d;
    d.points = {point(11, 2.1, 100), point(12, 2.1, 104), point(13, 3.5, 90), point(31, 2.1, 120)};
    FilterSpec spec;
    spec.distance_bin = 10;
    spec.average_bins = true;
    const auto out = filter_dataset(d, spec);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out.points[0].path_loss, 102.0);
    EXPECT_EQ(out.points[1].path_loss, 90.0);
}

TEST(Filter, InvalidSpec) {
    FilterSpec spec;
    spec.distance_bin = 0;
    EXPECT_THROW((void)filter_dataset({}, spec), Error);
    spec = {};
    spec.min_distance = 100;
    spec.max_distance = 50;
    EXPECT_THROW((void)filter_dataset({}, spec), Error);
}

// --- split ----------------------------------------------------------------------

TEST(Split, DisjointUnionAndIdempotence) {
    RawDataset d;
    for (int i = 0; i < 30; ++i) d.points.push_back(point(10 + i, 2.1, 90 + i, i % 3 ? "sheffield" : "london"));
    const auto [a, b] = split_extraction_validation(d, "sheffield", "london");
    EXPECT_EQ(a.size() + b.size(), d.size());
    for (const auto& p : a.points) EXPECT_EQ(p.city, "sheffield");
    for (const auto& p : b.points) EXPECT_EQ(p.city, "london");
    RawDataset merged = a;
    merged.points.insert(merged.points.end(), b.points.begin(), b.points.end());
    const auto [a2, b2] = split_extraction_validation(merged, "sheffield", "london");
    EXPECT_TRUE(same_points(a, a2));
    EXPECT_TRUE(same_points(b, b2));
}

TEST(Split, MissingTagIsUnknownTag) {
    RawDataset d;
    d.points = {point(10, 2.1, 90, "sheffield"), point(20, 2.1, 95, "sheffield")};
    try {
        (void)split_extraction_validation(d, "sheffield", "london");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownTag);
    }
    d.points.push_back(point(30, 2.1, 99, "leeds"));
    d.points.push_back(point(30, 2.1, 99, "london"));
    EXPECT_THROW((void)split_extraction_validation(d, "sheffield", "london"), Error);
}

// --- classification -------------------------------------------------------------

TEST(Classify, RecomputesFlagsAndCountsMismatches) {
    // 20 x 20 open map, one building column at x = 10.
    std::vector<std::uint8_t> cells(400, 2);
    for (int y = 0; y < 20; ++y) cells[static_cast<std::size_t>(y) * 20 + 10] = 1;
    const RegionMap map(20, 20, 10.0, {53.0, -1.5}, std::move(cells), RegionMap::standard_legend());
    RawDataset d;
    auto a = point(100, 2.1, 90);
    a.tx = map.to_geo({15, 105});
    a.rx = map.to_geo({85, 105});  // stays west of the building
    a.los = Visibility::Nlos;      // wrong on purpose
    auto b = point(100, 2.1, 90);
    b.tx = map.to_geo({15, 105});
    b.rx = map.to_geo({185, 105});  // crosses it
    d.points = {a, b};
    const auto rep = classify_dataset(d, map);
    EXPECT_EQ(rep.los, 1u);
    EXPECT_EQ(rep.nlos, 1u);
    EXPECT_EQ(rep.mismatches, 1u);
    EXPECT_FALSE(rep.warnings.empty());
    EXPECT_EQ(d.points[0].los, Visibility::Los);
    EXPECT_EQ(d.points[1].los, Visibility::Nlos);
    ASSERT_TRUE(d.points[1].line);
    EXPECT_EQ(d.points[1].line->penetrations, 2);  // entry and exit
}

TEST(Classify, FitRowsSkipIndoorReceiversForAmpleOnly) {
    std::vector<std::uint8_t> cells(400, 2);
    cells[static_cast<std::size_t>(19 - 5) * 20 + 15] = 1;  // building cell at (15, 5)
    const RegionMap map(20, 20, 10.0, {53.0, -1.5}, std::move(cells), RegionMap::standard_legend());
    RawDataset d;
    auto in = point(100, 2.1, 90);
    in.tx = map.to_geo({15, 55});
    in.rx = map.to_geo({155, 55});
    auto out = point(120, 2.1, 95);
    out.tx = map.to_geo({15, 55});
    out.rx = map.to_geo({135, 155});
    d.points = {in, out};
    const auto ample = to_fit_dataset(d, ModelKind::Ample, &map);
    EXPECT_EQ(ample.data.size(), 1u);
    EXPECT_EQ(ample.skipped_indoor, 1u);
    EXPECT_EQ(ample.kept, (std::vector<std::size_t>{1}));
    EXPECT_EQ(to_fit_dataset(d, ModelKind::Ci, nullptr).data.size(), 2u);
    EXPECT_THROW((void)to_fit_dataset(d, ModelKind::Ample, nullptr), Error);
}
