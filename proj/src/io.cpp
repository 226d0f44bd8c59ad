#include "dvar/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "dvar/errors.hpp"

namespace dvar {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::optional<double> to_real(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

Sample parse_sample(std::istream& in, char delimiter, std::optional<bool> has_header) {
    std::vector<std::string> names;
    std::vector<double> data;
    std::size_t n = 0;
    std::size_t rows = 0;
    bool first = true;
    std::string line;
    while (std::getline(in, line)) {
        if (skippable(line)) continue;
        const auto cells = split(line, delimiter);
        if (first) {
            first = false;
            bool header = false;
            if (has_header) {
                header = *has_header;
            } else {
                header = true;
                for (auto c : cells)
                    if (to_real(c)) header = false;
            }
            n = cells.size();
            if (header) {
                for (auto c : cells) names.emplace_back(trim(c));
                continue;
            }
        }
        ++rows;
        if (cells.size() != n)
            throw ParseError("expected " + std::to_string(n) + " cells, found " +
                                 std::to_string(cells.size()),
                             rows, std::min(cells.size(), n) + 1);
        for (std::size_t j = 0; j < n; ++j) {
            const auto v = to_real(cells[j]);
            if (!v) throw ParseError("non-numeric cell '" + std::string(trim(cells[j])) + "'", rows, j + 1);
            data.push_back(*v);
        }
    }
    if (rows == 0) throw ParseError("no data rows", 1, 1);
    return Sample(rows, n, std::move(data), std::move(names));
}

Sample parse_sample_text(std::string_view text, char delimiter, std::optional<bool> has_header) {
    std::istringstream in{std::string(text)};
    return parse_sample(in, delimiter, has_header);
}

Sample read_sample(const DatasetFile& file) {
    std::ifstream in(file.path);
    if (!in) throw DomainError("cannot open '" + file.path + "'");
    return parse_sample(in, file.delimiter, file.has_header);
}

Format parse_format(std::string_view s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw DomainError("unknown format '" + std::string(s) + "'");
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_real(x).c_str(), nullptr);
}

namespace {

Json real_array(std::span<const double> v) {
    Json a = Json::array();
    for (double x : v) a.push_back(round12(x));
    return a;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

}  // namespace

Json to_json(const VaREstimate& v) {
    Json j;
    j["point"] = real_array(v.point);
    j["lambda"] = v.lambda ? Json(round12(*v.lambda)) : Json(nullptr);
    j["achieved_prob"] = round12(v.achieved_prob);
    j["method"] = to_string(v.method);
    j["direction"] = real_array(v.direction);
    j["alpha"] = round12(v.alpha);
    if (v.sample_index) j["sample_index"] = *v.sample_index;
    return j;
}

Json to_json(const RobustnessReport& r) {
    Json j;
    j["scenario"] = r.scenario_name;
    j["seed"] = r.seed;
    j["replications"] = r.replications;
    j["m"] = r.m;
    j["alpha"] = round12(r.alpha);
    j["slack_h"] = round12(r.slack_h);
    Json rows = Json::array();
    for (std::size_t k = 0; k < r.omegas.size(); ++k) {
        Json row;
        row["omega"] = round12(r.omegas[k]);
        row["pv_directional"] = round12(r.pv_directional[k]);
        row["pv_benchmark"] = round12(r.pv_benchmark[k]);
        row["se_directional"] = round12(r.se_directional[k]);
        row["se_benchmark"] = round12(r.se_benchmark[k]);
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

Json to_json(const ScalarTable& t) {
    Json j = Json::object();
    for (std::size_t i = 0; i < t.names.size(); ++i) j[t.names[i]] = round12(t.values[i]);
    return j;
}

std::string write_result(const VaREstimate& v, Format f) {
    if (f == Format::json) return to_json(v).dump(2) + "\n";
    std::string out = "# method=" + std::string(to_string(v.method)) + "\n# direction=";
    for (std::size_t i = 0; i < v.direction.size(); ++i) {
        if (i) out += ' ';
        out += format_real(v.direction[i]);
    }
    out += '\n';
    std::vector<std::string> head;
    std::vector<std::string> row;
    for (std::size_t i = 0; i < v.point.size(); ++i) {
        head.push_back("x" + std::to_string(i + 1));
        row.push_back(format_real(v.point[i]));
    }
    if (v.lambda) {
        head.push_back("lambda");
        row.push_back(format_real(*v.lambda));
    }
    head.insert(head.end(), {"achieved_prob", "alpha"});
    row.insert(row.end(), {format_real(v.achieved_prob), format_real(v.alpha)});
    return out + csv_line(head) + csv_line(row);
}

std::string write_result(const RobustnessReport& r, Format f) {
    if (f == Format::json) return to_json(r).dump(2) + "\n";
    std::string out;
    out += "# scenario=" + r.scenario_name + "\n";
    out += "# seed=" + std::to_string(r.seed) + "\n";
    out += "# replications=" + std::to_string(r.replications) + "\n";
    out += "# m=" + std::to_string(r.m) + "\n";
    out += "# alpha=" + format_real(r.alpha) + "\n";
    out += "# slack_h=" + format_real(r.slack_h) + "\n";
    out += "omega,pv_directional,pv_benchmark,se_directional,se_benchmark\n";
    for (std::size_t k = 0; k < r.omegas.size(); ++k)
        out += csv_line({format_real(r.omegas[k]), format_real(r.pv_directional[k]),
                         format_real(r.pv_benchmark[k]), format_real(r.se_directional[k]),
                         format_real(r.se_benchmark[k])});
    return out;
}

std::string write_result(const ScalarTable& t, Format f) {
    if (f == Format::json) return to_json(t).dump(2) + "\n";
    std::vector<std::string> row;
    for (double v : t.values) row.push_back(format_real(v));
    return csv_line(t.names) + csv_line(row);
}

std::string write_sample_csv(const Sample& s, const std::vector<std::string>& comments) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    std::vector<std::string> head = s.column_names();
    if (head.empty())
        for (std::size_t j = 0; j < s.dim(); ++j) head.push_back("x" + std::to_string(j + 1));
    out += csv_line(head);
    std::vector<std::string> row(s.dim());
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.dim(); ++j) row[j] = format_real(s(i, j));
        out += csv_line(row);
    }
    return out;
}

std::vector<double> parse_real_list(std::string_view s) {
    std::vector<double> out;
    if (trim(s).empty()) throw DomainError("empty list");
    for (auto cell : split(s, ',')) {
        const auto v = to_real(cell);
        if (!v) throw DomainError("not a number: '" + std::string(trim(cell)) + "'");
        out.push_back(*v);
    }
    return out;
}

DirectionSpec DirectionSpec::parse(std::string_view s) {
    s = trim(s);
    DirectionSpec d;
    if (s == "e") {
        d.kind = Kind::diagonal;
    } else if (s == "-e") {
        d.kind = Kind::negative_diagonal;
    } else if (s.starts_with("weights:")) {
        d.kind = Kind::weights;
        d.values = parse_real_list(s.substr(8));
    } else {
        d.kind = Kind::raw;
        d.values = parse_real_list(s);
    }
    return d;
}

Direction DirectionSpec::resolve(std::size_t n, bool portfolio_sign) const {
    switch (kind) {
        case Kind::diagonal:
            return Direction::diagonal(n);
        case Kind::negative_diagonal:
            return Direction::diagonal(n, -1.0);
        case Kind::weights: {
            if (values.size() != n) throw DimensionMismatch(n, values.size());
            std::vector<double> v = values;
            if (portfolio_sign)
                for (double& x : v) x = -x;
            return Direction::normalized(std::move(v));
        }
        case Kind::raw:
            if (values.size() != n) throw DimensionMismatch(n, values.size());
            return Direction::normalized(values);
    }
    throw DomainError("bad direction");
}

std::string DirectionSpec::to_string() const {
    std::string list;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) list += ',';
        list += format_real(values[i]);
    }
    switch (kind) {
        case Kind::diagonal:
            return "e";
        case Kind::negative_diagonal:
            return "-e";
        case Kind::weights:
            return "weights:" + list;
        case Kind::raw:
            return list;
    }
    return list;
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k{
        "alpha", "direction", "method", "slack_h", "ray_tol",  "family",       "beta", "n",
        "theta", "which",     "scenario", "omegas", "m",       "replications", "seed"};
    return k;
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (skippable(raw)) continue;
        const std::string_view line = raw;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no, 1);
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view val = trim(line.substr(eq + 1));
        auto real = [&]() {
            const auto v = to_real(val);
            if (!v) throw ParseError("bad value for '" + key + "'", line_no, eq + 2);
            return *v;
        };
        auto count = [&]() -> std::uint64_t {
            std::uint64_t v = 0;
            const auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
            if (ec != std::errc() || p != val.data() + val.size())
                throw ParseError("bad value for '" + key + "'", line_no, eq + 2);
            return v;
        };
        try {
            if (key == "alpha") c.alpha = real();
            else if (key == "direction") c.direction = DirectionSpec::parse(val);
            else if (key == "method") c.method = std::string(val);
            else if (key == "slack_h") c.slack_h = real();
            else if (key == "ray_tol") c.ray_tol = real();
            else if (key == "family") c.family = std::string(val);
            else if (key == "beta") c.beta = real();
            else if (key == "n") c.n = static_cast<int>(count());
            else if (key == "theta") c.theta = real();
            else if (key == "which") c.which = std::string(val);
            else if (key == "scenario") c.scenario = std::string(val);
            else if (key == "omegas") c.omegas = parse_real_list(val);
            else if (key == "m") c.m = count();
            else if (key == "replications") c.replications = count();
            else if (key == "seed") c.seed = count();
            else throw ParseError("unknown config key '" + key + "'", line_no, 1);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(std::string(e.what()) + " for '" + key + "'", line_no, eq + 2);
        }
    }
    return c;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_text_file(path)); }

}  // namespace dvar
