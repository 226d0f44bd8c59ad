#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "dvar/errors.hpp"
#include "dvar/io.hpp"

using namespace dvar;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = std::string(DVAR_TEST_TMP) + "/" + name;
    std::ofstream(path) << text;
    return path;
}

template <class F>
ParseError parse_error_of(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no ParseError";
    return ParseError("none", 0, 0);
}

VaREstimate sample_estimate() {
    VaREstimate v;
    v.point = {0.5, 0.5};
    v.lambda = -0.1;
    v.achieved_prob = 0.25;
    v.method = Method::ray;
    v.direction = {std::sqrt(0.5), std::sqrt(0.5)};
    v.alpha = 0.25;
    return v;
}

}  // namespace

TEST(ReadSample, PlainRows) {
    const auto s = parse_sample_text("1,2\n3,4");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.dim(), 2u);
    EXPECT_EQ(s.mean()[0], 2.0);
    EXPECT_EQ(s.mean()[1], 3.0);
    EXPECT_TRUE(s.column_names().empty());
}

TEST(ReadSample, HeaderIsDetected) {
    const auto s = parse_sample_text("a,b\n1,2\n");
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.column_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(ReadSample, ForcedHeaderSettings) {
    EXPECT_EQ(parse_sample_text("1,2\n3,4", ',', true).size(), 1u);
    const auto e = parse_error_of([] { parse_sample_text("a,b\n1,2", ',', false); });
    EXPECT_EQ(e.row, 1u);
    EXPECT_EQ(e.col, 1u);
}

TEST(ReadSample, NonNumericCellLocation) {
    const auto e = parse_error_of([] { parse_sample_text("1,x"); });
    EXPECT_EQ(e.row, 1u);
    EXPECT_EQ(e.col, 2u);
    const auto e2 = parse_error_of([] { parse_sample_text("1,2\n3,nan\n"); });
    EXPECT_EQ(e2.row, 2u);
    EXPECT_EQ(e2.col, 2u);
}

TEST(ReadSample, RaggedAndEmpty) {
    const auto e = parse_error_of([] { parse_sample_text("1,2\n3\n"); });
    EXPECT_EQ(e.row, 2u);
    EXPECT_EQ(e.col, 2u);
    const auto e2 = parse_error_of([] { parse_sample_text("1,2\n3,4,5\n"); });
    EXPECT_EQ(e2.row, 2u);
    EXPECT_EQ(e2.col, 3u);
    EXPECT_THROW(parse_sample_text(""), ParseError);
    EXPECT_THROW(parse_sample_text("a,b\n"), ParseError);
}

TEST(ReadSample, CommentsBlanksAndDelimiters) {
    const auto s = parse_sample_text("# note\n\n 1 ; 2 \n3;4\n", ';');
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s(0, 1), 2.0);
}

TEST(ReadSample, FileIsReadIdenticallyTwice) {
    const auto path = write_temp("twice.csv", "x,y\n0.1,0.2\n1e-3,-4\n");
    const DatasetFile f{path, ',', std::nullopt};
    EXPECT_EQ(read_sample(f), read_sample(f));
    EXPECT_THROW(read_sample(DatasetFile{path + ".missing", ',', std::nullopt}), Error);
}

TEST(WriteResult, EstimateJsonKeyOrder) {
    const auto j = to_json(sample_estimate());
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"point", "lambda", "achieved_prob", "method",
                                              "direction", "alpha"}));
    EXPECT_EQ(j["method"], "ray");
    auto band = sample_estimate();
    band.lambda.reset();
    band.method = Method::band;
    band.sample_index = 3;
    const auto jb = to_json(band);
    EXPECT_TRUE(jb["lambda"].is_null());
    EXPECT_EQ(jb["sample_index"], 3);
}

TEST(WriteResult, TwelveSignificantDigits) {
    EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_real(2.0), "2");
    EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
    const auto j = Json::parse(write_result(sample_estimate(), Format::json));
    EXPECT_EQ(j["direction"][0].get<double>(), round12(std::sqrt(0.5)));
}

TEST(WriteResult, EstimateCsvRoundTrips) {
    const auto v = sample_estimate();
    const auto s = parse_sample_text(write_result(v, Format::csv));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.column_names(),
              (std::vector<std::string>{"x1", "x2", "lambda", "achieved_prob", "alpha"}));
    EXPECT_EQ(s(0, 0), 0.5);
    EXPECT_EQ(s(0, 2), -0.1);
}

TEST(WriteResult, RobustnessCsvRoundTrips) {
    RobustnessReport r;
    r.scenario_name = "variance";
    r.omegas = {0.01, 0.02};
    r.pv_directional = {1.0 / 3.0, 2.0 / 7.0};
    r.pv_benchmark = {0.1, 0.2};
    r.se_directional = {1e-5, 2e-5};
    r.se_benchmark = {3e-5, 4e-5};
    const auto s = parse_sample_text(write_result(r, Format::csv));
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.column_names()[0], "omega");
    EXPECT_EQ(s.column_names()[1], "pv_directional");
    EXPECT_EQ(s.column_names()[2], "pv_benchmark");
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(s(i, 0), round12(r.omegas[i]));
        EXPECT_EQ(s(i, 1), round12(r.pv_directional[i]));
        EXPECT_EQ(s(i, 2), round12(r.pv_benchmark[i]));
    }
    const auto j = Json::parse(write_result(r, Format::json));
    EXPECT_EQ(j["rows"].size(), 2u);
    EXPECT_EQ(j["scenario"], "variance");
}

TEST(WriteResult, ScalarTable) {
    ScalarTable t;
    t.add("lower", 2.0 / 3.0);
    t.add("upper", 0.25);
    const auto s = parse_sample_text(write_result(t, Format::csv));
    EXPECT_EQ(s.column_names(), t.names);
    EXPECT_EQ(s(0, 0), round12(2.0 / 3.0));
    const auto j = Json::parse(write_result(t, Format::json));
    EXPECT_EQ(j["upper"].get<double>(), 0.25);
    EXPECT_THROW(parse_format("xml"), DomainError);
}

TEST(WriteResult, SampleCsvRoundTripsRandomData) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z(0.0, 100.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> data(30);
        for (double& v : data) v = z(rng);
        const Sample s(10, 3, data);
        const auto back = parse_sample_text(write_sample_csv(s, {"seed 4"}));
        ASSERT_EQ(back.size(), 10u);
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t j = 0; j < 3; ++j) ASSERT_EQ(back(i, j), round12(s(i, j)));
        // A second pass is a fixed point.
        EXPECT_EQ(parse_sample_text(write_sample_csv(back)).data(), back.data());
    }
}

TEST(Directions, NamedShortcuts) {
    const auto same = [](const Direction& a, const Direction& b) {
        return std::equal(a.coords().begin(), a.coords().end(), b.coords().begin(),
                          b.coords().end());
    };
    EXPECT_TRUE(same(DirectionSpec::parse("e").resolve(3), Direction::diagonal(3)));
    EXPECT_TRUE(same(DirectionSpec::parse("-e").resolve(2), Direction::diagonal(2, -1.0)));
    const auto raw = DirectionSpec::parse("3,4").resolve(2);
    EXPECT_NEAR(raw[0], 0.6, 1e-15);
    EXPECT_NEAR(raw[1], 0.8, 1e-15);
    const auto w = DirectionSpec::parse("weights:1,1");
    EXPECT_NEAR(w.resolve(2)[0], std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(w.resolve(2, true)[0], -std::sqrt(0.5), 1e-15);
    EXPECT_THROW(DirectionSpec::parse("3,4").resolve(3), DimensionMismatch);
    EXPECT_EQ(DirectionSpec::parse(DirectionSpec::parse("weights:1,2").to_string()),
              DirectionSpec::parse("weights:1,2"));
}

TEST(RunConfigFile, ParsesKnownKeys) {
    const auto c = parse_run_config(
        "# settings\nalpha = 0.1\ndirection = -e\nslack_h=0.01\nomegas = 0.01,0.02\nseed=7\nn=3\n");
    EXPECT_EQ(*c.alpha, 0.1);
    EXPECT_EQ(c.direction->kind, DirectionSpec::Kind::negative_diagonal);
    EXPECT_EQ(*c.slack_h, 0.01);
    EXPECT_EQ(*c.omegas, (std::vector<double>{0.01, 0.02}));
    EXPECT_EQ(*c.seed, 7u);
    EXPECT_EQ(*c.n, 3);
    EXPECT_FALSE(c.beta.has_value());
}

TEST(RunConfigFile, RejectsUnknownKeysAndBadValues) {
    const auto e = parse_error_of([] { parse_run_config("alpha=0.1\ncolour=red\n"); });
    EXPECT_EQ(e.row, 2u);
    EXPECT_EQ(e.col, 1u);
    const auto e2 = parse_error_of([] { parse_run_config("alpha=zero\n"); });
    EXPECT_EQ(e2.row, 1u);
    EXPECT_EQ(e2.col, 7u);
    EXPECT_THROW(parse_run_config("just words\n"), ParseError);
    const auto path = write_temp("run.cfg", "beta = 2\nfamily = clayton\n");
    const auto c = load_run_config(path);
    EXPECT_EQ(*c.beta, 2.0);
    EXPECT_EQ(*c.family, "clayton");
}
