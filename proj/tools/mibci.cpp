// Command-line front end: one binary, one subcommand per pipeline stage.
#include <CLI11.hpp>
#include <iostream>
#include <thread>
#include <json.hpp>

#include "mibci/cli/commands.hpp"
#include "mibci/error.hpp"
#include "mibci/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mibci;

namespace {

int fail(const std::string& code, const std::string& message) {
    std::cerr << json{{"error", code}, {"message", message}}.dump() << std::endl;
    return 1;
}

CombineMode mode_from(const std::string& s) {
    if (s == "aligned") return CombineMode::Aligned;
    if (s == "cross") return CombineMode::CrossProduct;
    throw InvalidArgument("combine mode must be 'aligned' or 'cross'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Motor-imagery EEG pipeline: synthesis, ERD/ERS analysis, Walsh-target CNN training"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> seed;
    std::string config_path, out_dir;
    bool dry_run = false;
    std::size_t threads = 0;
    app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--config", config_path, "Pipeline config (JSON)")->check(CLI::ExistingFile);
    app.add_option("--out-dir", out_dir, "Output directory (overrides the config)");
    app.add_flag("--dry-run", dry_run, "Validate the configuration and exit");
    app.add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

    std::string input, output, combined_input, arch;
    std::vector<std::string> pairs, channels;
    std::string mode = "aligned";
    std::vector<double> band;
    std::size_t runs = 0, column = 0;
    bool bias = false;

    auto* gen = app.add_subcommand("gen", "Generate a synthetic motor-imagery container");
    gen->add_option("-o,--output", output, "Output container (default <out-dir>/synthetic.miep)");

    auto* combine = app.add_subcommand("combine", "Add artificial combined classes to a container");
    combine->add_option("-i,--input", input, "Input container")->required();
    combine->add_option("-o,--output", output, "Output container (default <out-dir>/combined.miep)");
    combine->add_option("--pairs", pairs, "Pairs such as LH-RH (default: every pair of simple classes)");
    combine->add_option("--mode", mode, "aligned or cross");

    auto* erders = app.add_subcommand("erders", "Normalised band-power curves per class");
    erders->add_option("-i,--input", input, "Input container");
    erders->add_option("--band", band, "Band edges in Hz: LO HI")->expected(2);
    erders->add_option("--channels", channels, "Channels to export (default all)");

    auto* train = app.add_subcommand("train", "Train and evaluate one network");
    auto* ova = app.add_subcommand("ova", "One-versus-all campaign");
    auto* repeat = app.add_subcommand("repeat", "Repeated randomised runs");
    for (auto* sub : {train, ova, repeat}) {
        sub->add_option("-i,--input", input, "Input container (overrides the config)");
        sub->add_option("--arch", arch, "Architecture JSON file or 'reference'");
    }
    ova->add_option("--combined-input", combined_input, "Real combined-imagery container, test only");
    repeat->add_option("-n,--runs", runs, "Number of runs (default from config, else 30)");

    auto* params = app.add_subcommand("params", "Weight count of an architecture");
    std::string params_arch = "reference";
    params->add_option("--arch", params_arch, "Architecture JSON file or 'reference'");
    params->add_flag("--bias", bias, "Include biases and batch-norm parameters");

    std::string csv_a, csv_b;
    auto* ttest = app.add_subcommand("ttest", "Paired t-test of two result columns");
    ttest->add_option("a", csv_a, "First CSV")->required();
    ttest->add_option("b", csv_b, "Second CSV")->required();
    ttest->add_option("--column", column, "Zero-based column index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("usage_error", e.what());
    }

    try {
        set_num_threads(threads ? threads : std::max(1u, std::thread::hardware_concurrency()));
        cli::PipelineConfig config = config_path.empty() ? cli::PipelineConfig{} : cli::load_config(config_path);
        if (seed) config.seed = seed;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!input.empty()) config.input = input;
        if (!combined_input.empty()) config.combined_input = combined_input;
        if (!arch.empty()) config.architecture = arch;
        if (!runs && config.n_runs) runs = config.n_runs;
        config.n_runs = runs;

        json result;
        if (*gen) {
            config.master_seed();
            const fs::path out = output.empty() ? config.out_dir / "synthetic.miep" : fs::path(output);
            if (dry_run) {
                motor_imagery_config(config.generate).validate();
                result = {{"command", "gen"}, {"dry_run", true}, {"output", out.string()}};
            } else {
                result = cli::cmd_gen(config, out);
            }
        } else if (*combine) {
            std::vector<std::pair<ClassLabel, ClassLabel>> parsed;
            for (const auto& p : pairs) parsed.push_back(cli::parse_pair(p));
            const auto m = mode_from(mode);
            const fs::path out = output.empty() ? config.out_dir / "combined.miep" : fs::path(output);
            if (!fs::is_regular_file(input)) throw IoError("input container not found: " + input);
            result = dry_run ? json{{"command", "combine"}, {"dry_run", true}} : cli::cmd_combine(input, out, parsed, m);
        } else if (*erders) {
            if (!band.empty()) {
                config.erders.band.lo_hz = band[0];
                config.erders.band.hi_hz = band[1];
            }
            if (!channels.empty()) config.erders.channels = channels;
            if (config.input.empty() || !fs::is_regular_file(config.input))
                throw IoError("input container not found: " + config.input.string());
            result = dry_run ? json{{"command", "erders"}, {"dry_run", true}}
                             : cli::cmd_erders(config.input, config.erders, config.out_dir);
        } else if (*train || *ova || *repeat) {
            config.validate(true, true);
            if (dry_run)
                result = {{"command", (*train ? "train" : *ova ? "ova" : "repeat")}, {"dry_run", true}};
            else
                result = *train ? cli::cmd_train(config) : *ova ? cli::cmd_ova(config) : cli::cmd_repeat(config);
        } else if (*params) {
            std::cout << cli::cmd_params(cli::resolve_architecture(params_arch), bias) << "\n";
            return 0;
        } else if (*ttest) {
            result = cli::cmd_ttest(csv_a, csv_b, column);
        }
        std::cout << result.dump(2) << "\n";
        return 0;
    } catch (const Error& e) {
        return fail(e.code(), e.what());
    } catch (const std::exception& e) {
        return fail("internal_error", e.what());
    }
}
