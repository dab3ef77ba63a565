// Command-line driver: run, scan-rc, validate, info.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pescado/config.hpp"
#include "pescado/pipeline.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

struct Common {
    std::string config_path;
    std::string preset_name;
    std::string out_dir = "out";
    std::string rc_list;
    double gamma0 = -1.0;
    bool gamma0_set = false;
    bool skip_after = false;
    std::string from_checkpoint;
    bool restrict_re_positive = false;
    double cutoff_c = -1.0;
    bool cutoff_set = false;
    int threads = 1;
};

pescado::SimulationConfig resolve(const Common& o) {
    pescado::SimulationConfig c;
    if (!o.config_path.empty() && !o.preset_name.empty())
        throw pescado::ConfigError("preset", 0, "--config and --preset are mutually exclusive");
    if (!o.config_path.empty())
        c = pescado::load_config_file(o.config_path);
    else if (!o.preset_name.empty())
        c = pescado::preset(o.preset_name);
    if (o.gamma0_set) c.cap.gamma0 = o.gamma0;
    if (o.cutoff_set) c.cutoff_c = o.cutoff_c;
    if (o.restrict_re_positive) c.restrict_re_positive = true;
    c.validate();
    return c;
}

std::vector<double> parse_rc_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw pescado::ConfigError("rc", 0, "cannot parse R_c value '" + item + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photoelectron spectra from absorbed flux for hydrogen in a laser pulse"};
    app.require_subcommand(1);
    Common o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "Configuration file (section.key = value)");
        sub->add_option("--preset", o.preset_name, "Named preset, e.g. 400nm, 200nm, 400nm-rc60");
        sub->add_option("--out", o.out_dir, "Output directory");
        sub->add_option_function<double>(
            "--gamma0", [&](double v) { o.gamma0 = v, o.gamma0_set = true; }, "Override absorber strength");
        sub->add_flag("--restrict-re-positive", o.restrict_re_positive, "Keep only Re eps > 0 in the n-sum");
        sub->add_option_function<double>(
            "--cutoff-c", [&](double v) { o.cutoff_c = v, o.cutoff_set = true; }, "Override the Im eps cutoff");
        sub->add_option("--threads", o.threads, "BLAS threads")->check(CLI::PositiveNumber);
    };

    CLI::App* run = app.add_subcommand("run", "Propagate, analyse and write spectra");
    add_common(run);
    run->add_flag("--skip-after", o.skip_after, "Stop after writing the checkpoint");
    run->add_option("--from-checkpoint", o.from_checkpoint, "Resume the analysis from a checkpoint");

    CLI::App* scan = app.add_subcommand("scan-rc", "Run a list of absorber onsets and compare");
    add_common(scan);
    scan->add_option("--rc", o.rc_list, "Comma-separated R_c values")->required();
    scan->add_flag("--skip-after", o.skip_after, "Stop every run after its checkpoint");

    CLI::App* validate = app.add_subcommand("validate", "Fast property checks without propagation");
    add_common(validate);

    CLI::App* info = app.add_subcommand("info", "Print the resolved configuration");
    add_common(info);
    bool list_presets = false;
    info->add_flag("--presets", list_presets, "List preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    openblas_set_num_threads(o.threads);
    try {
        const pescado::SimulationConfig config = resolve(o);
        pescado::RunOptions ro;
        ro.out_dir = o.out_dir;
        ro.skip_after = o.skip_after;
        ro.from_checkpoint = o.from_checkpoint;
        ro.log = &std::cerr;

        if (*run) {
            const auto summary = pescado::cmd_run(config, ro);
            for (const auto& f : summary.outputs) std::cout << o.out_dir << "/" << f << "\n";
        } else if (*scan) {
            const auto runs = pescado::cmd_scan_rc(config, parse_rc_list(o.rc_list), ro);
            std::cout << runs.size() << " runs written under " << o.out_dir << "\n";
        } else if (*validate) {
            const auto items = pescado::cmd_validate(config);
            int failed = 0;
            for (const auto& it : items) {
                std::cout << it.status << "  " << it.name << "  " << it.detail << "\n";
                failed += it.status == "FAIL";
            }
            return failed ? 3 : 0;
        } else if (*info) {
            if (list_presets)
                for (const auto& p : pescado::preset_names()) std::cout << p << "\n";
            std::cout << pescado::describe(config) << "\n" << pescado::serialize_config(config);
        }
    } catch (const pescado::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pescado::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
