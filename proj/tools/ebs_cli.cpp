// Command-line front end. Parses a run config, applies flag overrides, and
// executes it through the shared-library C interface.
//
// Exit codes: 0 success, 2 config error, 3 I/O error.

#include <ebs/ebs.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

namespace {

struct ConfigDeleter {
    void operator()(ebs_config* c) const { ebs_config_destroy(c); }
};

int run_mode(const std::string& mode, const std::string& config_path, const std::string& out_path,
             bool have_seed, std::uint64_t seed, bool ideal) {
    ebs_config* raw = nullptr;
    ebs_status st = ebs_config_load(config_path.c_str(), &raw);
    if (st != EBS_OK) {
        std::fprintf(stderr, "ebs: %s: %s\n", ebs_status_name(st), ebs_last_error());
        return st == EBS_ERR_IO ? 3 : 2;
    }
    std::unique_ptr<ebs_config, ConfigDeleter> config(raw);

    if (!out_path.empty()) ebs_config_set_output(config.get(), out_path.c_str());
    if (have_seed) ebs_config_set_seed(config.get(), seed);
    if (ideal) ebs_config_set_ideal(config.get(), 1);

    st = ebs_run(config.get(), mode.c_str());
    if (st != EBS_OK) {
        std::fprintf(stderr, "ebs: %s: %s\n", ebs_status_name(st), ebs_last_error());
        return st == EBS_ERR_IO ? 3 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-cavity entanglement beam splitter simulator"};
    app.set_version_flag("--version", std::string(ebs_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool ideal = false;

    std::string mode;
    for (const auto& [name, help] :
         {std::pair<const char*, const char*>{"spectra", "transmission/reflection spectra sweep"},
          {"fidelity", "entanglement fidelity sweep"},
          {"protocol", "run one entanglement protocol"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_path, "output path (overrides the config)");
        sub->add_option("--seed", seed, "PRNG seed for sampled protocol runs");
        sub->add_flag("--ideal", ideal, "use the perfect channel");
        sub->callback([&mode, name = std::string(name)] { mode = name; });
    }

    bool have_seed = false;
    try {
        app.parse(argc, argv);
        const CLI::App* sub = app.get_subcommands().front();
        have_seed = sub->count("--seed") > 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    return run_mode(mode, config_path, out_path, have_seed, seed, ideal);
}
