#include <doctest.h>

#include "fal/errors.hpp"
#include "fal/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

using namespace fal;

namespace {

SweepReport small_report() {
    SweepReport r;
    r.t_grid = {1e-2, 1e-3, 1e-4};
    r.numeric = {{-0.125, 0.5}, {1.0 / 3.0, -1e-17}, {0.0, 2.5e-101}};
    r.predicted = {{-0.124, 0.51}, {0.3333, 0.0}, {1e-300, 0.0}};
    r.residuals = {1e-3, 4.2e-5, 7.07e-7};
    r.fitted_slope = 1.969;
    r.fitted_log_exponent = 0.98;
    return r;
}

} // namespace

TEST_CASE("g17 rendering round-trips every double bit pattern") {
    for (double v : {0.1, 1.0 / 3.0, 3.141592653589793, -2.5e17, 1e-300,
                     4.26527058280097915, -0.0, 6.02214076e23, 5e-324}) {
        std::string s = format_g17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_g17(0.25) == "0.25");
    CHECK(format_g17(2.0) == "2");
}

TEST_CASE("sweep csv has the pinned header and round-trips") {
    SweepReport r = small_report();
    std::ostringstream out;
    write_sweep_csv(r, out);
    const std::string text = out.str();

    CHECK(text.substr(0, text.find('\n')) ==
          "t,re_num,im_num,re_pred,im_pred,residual");
    CHECK(text.find('\r') == std::string::npos); // LF only
    CHECK(text.back() == '\n');

    // byte-identical on re-serialization
    std::ostringstream again;
    write_sweep_csv(r, again);
    CHECK(text == again.str());

    std::istringstream in(text);
    SweepReport back = read_sweep_csv(in);
    CHECK(back.t_grid == r.t_grid);
    CHECK(back.numeric == r.numeric);
    CHECK(back.predicted == r.predicted);
    CHECK(back.residuals == r.residuals);

    // CRLF input is tolerated
    std::string crlf;
    for (char c : text)
        crlf += (c == '\n') ? std::string("\r\n") : std::string(1, c);
    std::istringstream in2(crlf);
    CHECK(read_sweep_csv(in2).numeric == r.numeric);
}

TEST_CASE("sweep csv rejects malformed input") {
    std::istringstream bad_header("time,foo\n1,2\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_header), DomainError);

    std::istringstream short_row(
        "t,re_num,im_num,re_pred,im_pred,residual\n0.1,1,0\n");
    CHECK_THROWS_AS(read_sweep_csv(short_row), DomainError);

    std::istringstream bad_field(
        "t,re_num,im_num,re_pred,im_pred,residual\n0.1,one,0,0,0,0\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_field), DomainError);

    std::istringstream rising_grid(
        "t,re_num,im_num,re_pred,im_pred,residual\n"
        "0.001,0,0,0,0,0\n0.01,0,0,0,0,0\n");
    CHECK_THROWS_AS(read_sweep_csv(rising_grid), DomainError);

    std::istringstream header_only("t,re_num,im_num,re_pred,im_pred,residual\n");
    CHECK_THROWS_AS(read_sweep_csv(header_only), DomainError);

    SweepReport broken = small_report();
    broken.residuals.pop_back();
    std::ostringstream sink;
    CHECK_THROWS_AS(write_sweep_csv(broken, sink), DomainError);
}

TEST_CASE("sample csv is a single value column") {
    SampleSet s{{0.5, -1.25, 3e-7}, "dedekind", 42};
    std::ostringstream out;
    write_samples_csv(s, out);
    CHECK(out.str() == "value\n0.5\n-1.25\n2.9999999999999999e-07\n");
}

TEST_CASE("json documents carry the fal-1 schema") {
    SweepReport r = small_report();
    std::ostringstream out;
    write_sweep_json(r, out);
    nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j["schema"] == "fal-1");
    CHECK(j["t_grid"].size() == 3);
    CHECK(j["re_num"][0].get<double>() == -0.125);
    CHECK(j["im_pred"][0].get<double>() == 0.51);
    CHECK(j["residuals"][2].get<double>() == 7.07e-7);
    CHECK(j["fitted_slope"].get<double>() == 1.969);
    CHECK(j["fitted_log_exponent"].get<double>() == 0.98);

    SampleSet s{{0.5, -1.25}, "iid-gk", 7};
    std::ostringstream sout;
    write_samples_json(s, sout);
    nlohmann::json js = nlohmann::json::parse(sout.str());
    CHECK(js["schema"] == "fal-1");
    CHECK(js["provenance"] == "iid-gk");
    CHECK(js["seed_or_q"].get<std::uint64_t>() == 7);
    CHECK(js["values"][1].get<double>() == -1.25);
}
