#include "fal/io.hpp"

#include "fal/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace fal {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

const char* const kSweepHeader = "t,re_num,im_num,re_pred,im_pred,residual";

void check_report(const SweepReport& r, const char* who) {
    const std::size_t n = r.t_grid.size();
    if (n == 0 || r.numeric.size() != n || r.predicted.size() != n ||
        r.residuals.size() != n)
        throw DomainError(std::string(who) +
                          ": columns empty or of different lengths");
    for (std::size_t i = 1; i < n; ++i)
        if (!(r.t_grid[i] < r.t_grid[i - 1]))
            throw DomainError(std::string(who) +
                              ": t grid must be strictly decreasing");
}

double parse_field(const std::string& field, const char* who) {
    const char* s = field.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw DomainError(std::string(who) + ": bad numeric field '" + field +
                          "'");
    return v;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool get_line(std::istream& is, std::string& line) {
    if (!std::getline(is, line))
        return false;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return true;
}

} // namespace

void write_sweep_csv(const SweepReport& r, std::ostream& os) {
    check_report(r, "write_sweep_csv");
    os << kSweepHeader << '\n';
    for (std::size_t i = 0; i < r.t_grid.size(); ++i)
        os << format_g17(r.t_grid[i]) << ',' << format_g17(r.numeric[i].real())
           << ',' << format_g17(r.numeric[i].imag()) << ','
           << format_g17(r.predicted[i].real()) << ','
           << format_g17(r.predicted[i].imag()) << ','
           << format_g17(r.residuals[i]) << '\n';
}

SweepReport read_sweep_csv(std::istream& is) {
    std::string line;
    if (!get_line(is, line) || line != kSweepHeader)
        throw DomainError(std::string("read_sweep_csv: expected header '") +
                          kSweepHeader + "'");
    SweepReport r;
    while (get_line(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f = split_row(line);
        if (f.size() != 6)
            throw DomainError("read_sweep_csv: expected 6 fields, got " +
                              std::to_string(f.size()));
        r.t_grid.push_back(parse_field(f[0], "read_sweep_csv"));
        r.numeric.emplace_back(parse_field(f[1], "read_sweep_csv"),
                               parse_field(f[2], "read_sweep_csv"));
        r.predicted.emplace_back(parse_field(f[3], "read_sweep_csv"),
                                 parse_field(f[4], "read_sweep_csv"));
        r.residuals.push_back(parse_field(f[5], "read_sweep_csv"));
    }
    check_report(r, "read_sweep_csv");
    return r;
}

void write_samples_csv(const SampleSet& s, std::ostream& os) {
    os << "value\n";
    for (double v : s.values)
        os << format_g17(v) << '\n';
}

void write_sweep_json(const SweepReport& r, std::ostream& os) {
    check_report(r, "write_sweep_json");
    nlohmann::ordered_json j;
    j["schema"] = "fal-1";
    auto column = [&](auto&& get) {
        std::vector<double> c(r.t_grid.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = get(i);
        return c;
    };
    j["t_grid"] = r.t_grid;
    j["re_num"] = column([&](std::size_t i) { return r.numeric[i].real(); });
    j["im_num"] = column([&](std::size_t i) { return r.numeric[i].imag(); });
    j["re_pred"] =
        column([&](std::size_t i) { return r.predicted[i].real(); });
    j["im_pred"] =
        column([&](std::size_t i) { return r.predicted[i].imag(); });
    j["residuals"] = r.residuals;
    j["fitted_slope"] = r.fitted_slope;
    j["fitted_log_exponent"] = r.fitted_log_exponent;
    os << j.dump(2) << '\n';
}

void write_samples_json(const SampleSet& s, std::ostream& os) {
    nlohmann::ordered_json j;
    j["schema"] = "fal-1";
    j["provenance"] = s.provenance;
    j["seed_or_q"] = s.seed_or_q;
    j["values"] = s.values;
    os << j.dump(2) << '\n';
}

} // namespace fal
