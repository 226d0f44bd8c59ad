#pragma once

// CSV ingestion, result serialisation and the flat key=value run config.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dvar/estimator.hpp"
#include "dvar/geometry.hpp"
#include "dvar/sample.hpp"
#include "dvar/simulate.hpp"

namespace dvar {

using Json = nlohmann::ordered_json;

struct DatasetFile {
    std::string path;
    char delimiter = ',';
    /// Unset: the first data line is a header iff none of its cells parses
    /// as a number.
    std::optional<bool> has_header;
};

/// Lines starting with '#' and blank lines are skipped. Errors carry the
/// 1-based data-row and column.
Sample read_sample(const DatasetFile& file);
Sample parse_sample(std::istream& in, char delimiter = ',',
                    std::optional<bool> has_header = std::nullopt);
Sample parse_sample_text(std::string_view text, char delimiter = ',',
                         std::optional<bool> has_header = std::nullopt);

enum class Format { json, csv };
Format parse_format(std::string_view s);

/// Named reals in a fixed order.
struct ScalarTable {
    std::vector<std::string> names;
    std::vector<double> values;

    void add(std::string name, double value) {
        names.push_back(std::move(name));
        values.push_back(value);
    }
};

/// %.12g
std::string format_real(double x);
/// x rounded to 12 significant digits, for JSON emission.
double round12(double x);

Json to_json(const VaREstimate& v);
Json to_json(const RobustnessReport& r);
Json to_json(const ScalarTable& t);

std::string write_result(const VaREstimate& v, Format f);
std::string write_result(const RobustnessReport& r, Format f);
std::string write_result(const ScalarTable& t, Format f);

/// Header row (column names, or x1..xn) then one row per observation.
/// Comment lines are emitted first, each prefixed with "# ".
std::string write_sample_csv(const Sample& s, const std::vector<std::string>& comments = {});

/// A direction as written in a config or on the command line.
struct DirectionSpec {
    enum class Kind { diagonal, negative_diagonal, weights, raw };
    Kind kind = Kind::diagonal;
    std::vector<double> values;

    /// "e", "-e", "weights:w1,...,wn" or "x1,...,xn".
    static DirectionSpec parse(std::string_view s);

    /// Unit direction in dimension n. Weights map to w/|w|, or to -w/|w|
    /// with portfolio_sign (the bound convention).
    Direction resolve(std::size_t n, bool portfolio_sign = false) const;
    std::string to_string() const;
    bool operator==(const DirectionSpec&) const = default;
};

std::vector<double> parse_real_list(std::string_view s);

/// Flat key=value document. Every field is optional so that command-line
/// flags can be merged on top.
struct RunConfig {
    std::optional<double> alpha;
    std::optional<DirectionSpec> direction;
    std::optional<std::string> method;
    std::optional<double> slack_h;
    std::optional<double> ray_tol;
    std::optional<std::string> family;
    std::optional<double> beta;
    std::optional<int> n;
    std::optional<double> theta;
    std::optional<std::string> which;
    std::optional<std::string> scenario;
    std::optional<std::vector<double>> omegas;
    std::optional<std::size_t> m;
    std::optional<std::size_t> replications;
    std::optional<std::uint64_t> seed;

    static const std::vector<std::string>& keys();
};

/// Unknown keys and malformed values are ParseErrors (row = line number).
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace dvar
