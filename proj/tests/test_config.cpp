#include "config.hpp"
#include "runner.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ebs;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

const char* kSpectraConfig =
    "mode = spectra\n"
    "cavity.g = 2.4\n"
    "cavity.gamma = 0.1\n"
    "sweep.min = -5\n"
    "sweep.max = 5\n"
    "sweep.points = 1001\n";

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("happy path with comments and blank lines") {
        const RunConfig cfg = parse_config(
            "# spectra sweep\n"
            "mode = spectra\n"
            "\n"
            "cavity.g = 1.5   # strong-ish\n"
            "sweep.points = 11\n");
        CHECK(cfg.mode == RunMode::Spectra);
        CHECK(cfg.cavity.g == 1.5);
        CHECK(cfg.sweep_points == 11);
        CHECK(cfg.cavity.kappa == 1.0); // defaults kept
    }
    SUBCASE("unknown keys are named") {
        try {
            parse_config("mode = spectra\ncavity.q = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("cavity.q") != std::string::npos);
        }
    }
    SUBCASE("malformed input") {
        CHECK_THROWS_AS(parse_config("mode spectra\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("mode = spectra\nmode = fidelity\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("cavity.g = 2.4\n"), ConfigError); // no mode
        CHECK_THROWS_AS(parse_config("mode = banana\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("mode = spectra\ncavity.g = two\n"), ConfigError);
    }
    SUBCASE("structural validation") {
        CHECK_THROWS_AS(parse_config("mode = spectra\nsweep.points = 1\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("mode = spectra\nsweep.min = 2\nsweep.max = -2\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config("mode = spectra\nsweep.axis = g\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("mode = protocol\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("mode = protocol\nprotocol.name = nope\n"), ConfigError);
        CHECK_THROWS_AS(
            parse_config("mode = protocol\nprotocol.name = photon_to_spin\nprotocol.beta_re = 1\n"),
            ConfigError);
        CHECK_THROWS_AS(parse_config("mode = spectra\nmixing = 1.5\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("mode = spectra\nseed = 7\n"), ConfigError);
        CHECK_THROWS_AS(
            parse_config("mode = protocol\nprotocol.name = two_photon_bell\nsamples = 10\n"),
            ConfigError);
        CHECK_THROWS_AS(parse_config("mode = spectra\ncavity.kappa = 0\n"), ConfigError);
    }
}

TEST_CASE("config round trip") {
    RunConfig cfg;
    cfg.mode = RunMode::Protocol;
    cfg.protocol = "qnd_readout";
    cfg.alpha = c64(0.6, 0.0);
    cfg.beta = c64(0.0, 0.8);
    cfg.probe = 'V';
    cfg.cavity.g = 1.9;
    cfg.cavity.kappa_s = 0.25;
    cfg.detuning = 0.125;
    cfg.detuning2 = -0.5;
    cfg.mixing = 0.05;
    cfg.tau_over_t2 = 0.01;
    cfg.ideal = false;
    cfg.output = "out.txt";
    cfg.seed = 1234567890123456789ULL;
    cfg.samples = 25;
    CHECK(parse_config(serialize_config(cfg)) == cfg);

    RunConfig sweep;
    sweep.mode = RunMode::Fidelity;
    sweep.axis = SweepAxis::KappaS;
    sweep.sweep_min = 0.0;
    sweep.sweep_max = 2.0;
    sweep.sweep_points = 21;
    sweep.output = "f.csv";
    CHECK(parse_config(serialize_config(sweep)) == sweep);
}

TEST_CASE("spectra runner") {
    RunConfig cfg = parse_config(kSpectraConfig);
    SUBCASE("row count and header") {
        const std::string csv = spectra_csv(cfg);
        std::size_t lines = 0;
        for (char c : csv) {
            if (c == '\n') ++lines;
        }
        CHECK(lines == 1002); // header + 1001 rows
        CHECK(csv.rfind("detuning,abs_t,abs_r,abs_t0,abs_r0,arg_t,arg_r,arg_t0,arg_r0\n", 0) == 0);
    }
    SUBCASE("cold cavity transmits fully at resonance") {
        RunConfig cold = cfg;
        cold.cavity.g = 0.0;
        cold.sweep_points = 11; // grid hits detuning 0 exactly
        const std::string csv = spectra_csv(cold);
        CHECK(csv.find("\n0,1,") != std::string::npos); // |t| = 1 at detuning 0
    }
    SUBCASE("writes a byte-identical file on rerun") {
        const auto out = temp_path("ebs_test_spectra.csv");
        cfg.output = out.string();
        run_spectra(cfg);
        const std::string first = read_file(out);
        run_spectra(cfg);
        CHECK(first == read_file(out));
        CHECK(first == spectra_csv(cfg));
        std::filesystem::remove(out);
    }
    SUBCASE("unwritable output path") {
        cfg.output = "/nonexistent-dir/out.csv";
        CHECK_THROWS_AS(run_spectra(cfg), IoError);
        cfg.output.clear();
        CHECK_THROWS_AS(run_spectra(cfg), ConfigError);
    }
}

TEST_CASE("fidelity runner") {
    SUBCASE("side-leakage sweep hits the anchors") {
        RunConfig cfg;
        cfg.mode = RunMode::Fidelity;
        cfg.axis = SweepAxis::KappaS;
        cfg.sweep_min = 0.0;
        cfg.sweep_max = 1.0;
        cfg.sweep_points = 2;
        const std::string csv = fidelity_csv(cfg);
        std::istringstream in(csv);
        std::string header, row0, row1;
        std::getline(in, header);
        std::getline(in, row0);
        std::getline(in, row1);
        CHECK(header == "axis,F_t,F_r");
        CHECK(row0 == "0,0.999962972,1");
        CHECK(row1 == "1,0.999917404,0.947860874");
    }
    SUBCASE("coupling sweep leaves the reflection fidelity at one") {
        RunConfig cfg;
        cfg.mode = RunMode::Fidelity;
        cfg.axis = SweepAxis::G;
        cfg.sweep_min = 0.5;
        cfg.sweep_max = 5.0;
        cfg.sweep_points = 10;
        const std::string csv = fidelity_csv(cfg);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            CHECK(line.substr(line.rfind(',') + 1) == "1");
        }
    }
    SUBCASE("detuning sweep keeps F_t high inside the cavity linewidth") {
        // near-unity across the cavity window, > 0.999 in the central fifth
        RunConfig cfg;
        cfg.mode = RunMode::Fidelity;
        cfg.axis = SweepAxis::Detuning;
        cfg.sweep_min = -0.99;
        cfg.sweep_max = 0.99;
        cfg.sweep_points = 199;
        const std::string csv = fidelity_csv(cfg);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            const std::size_t c1 = line.find(',');
            const std::size_t c2 = line.find(',', c1 + 1);
            const double axis = std::stod(line.substr(0, c1));
            const double f_t = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            CHECK(f_t >= 0.96);
            if (std::abs(axis) <= 0.2) CHECK(f_t >= 0.999);
        }
    }
}

TEST_CASE("protocol runner") {
    RunConfig cfg;
    cfg.mode = RunMode::Protocol;
    cfg.protocol = "two_photon_bell";
    cfg.ideal = true;

    SUBCASE("ideal bell report") {
        const std::string report = protocol_report(cfg);
        CHECK(report.find("success_probability = 1\n") != std::string::npos);
        CHECK(report.find("combo = TT") != std::string::npos);
        CHECK(report.find("probability = 0.25\n") != std::string::npos);
        CHECK(report.find("path = T/T/up") != std::string::npos);
        CHECK(report.find("fidelity = 1\n") != std::string::npos);
    }
    SUBCASE("sampling is reproducible for a fixed seed") {
        cfg.seed = 424242;
        cfg.samples = 200;
        const std::string a = protocol_report(cfg);
        const std::string b = protocol_report(cfg);
        CHECK(a == b);
        CHECK(a.find("[samples]") != std::string::npos);
        CHECK(a.find("sample_200 = ") != std::string::npos);
        cfg.seed = 424243;
        CHECK(protocol_report(cfg) != a);
    }
    SUBCASE("mode dispatch checks the override") {
        cfg.output = temp_path("ebs_test_protocol.txt").string();
        CHECK_THROWS_AS(run(cfg, "spectra"), ConfigError);
        run(cfg, "protocol");
        CHECK(read_file(cfg.output) == protocol_report(cfg));
        std::filesystem::remove(cfg.output);
    }
}
