#include "mibci/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mibci/container.hpp"
#include "mibci/error.hpp"
#include "mibci/experiment/report_io.hpp"
#include "mibci/experiment/ttest.hpp"
#include "mibci/net/checkpoint.hpp"
#include "mibci/power.hpp"
#include "mibci/synthesis.hpp"

namespace mibci::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json class_counts(const EpochSet& set) {
    json j = json::object();
    for (const auto& [label, n] : experiment::count_labels(set)) j[label.name()] = n;
    return j;
}

std::map<ClassLabel, EpochSet> by_class(const EpochSet& set) {
    std::map<ClassLabel, EpochSet> out;
    for (const auto& label : set.labels()) out[label] = set.of_class(label);
    return out;
}

PowerCurve select_channels(const PowerCurve& curve, const std::vector<std::string>& channels) {
    if (channels.empty()) return curve;
    PowerCurve out = curve;
    out.channel_names = channels;
    out.values = SampleMatrix(channels.size(), curve.n_steps());
    for (std::size_t i = 0; i < channels.size(); ++i) {
        auto it = std::find(curve.channel_names.begin(), curve.channel_names.end(), channels[i]);
        if (it == curve.channel_names.end()) throw InvalidArgument("unknown channel " + channels[i]);
        const auto src = curve.values.row(static_cast<std::size_t>(it - curve.channel_names.begin()));
        std::copy(src.begin(), src.end(), out.values.row(i).begin());
    }
    return out;
}

}  // namespace

json cmd_gen(const PipelineConfig& config, const fs::path& output) {
    MotorImageryPreset preset = config.generate;
    preset.seed = config.master_seed();
    const EpochSet set = generate_synthetic(motor_imagery_config(preset));
    if (output.has_parent_path()) fs::create_directories(output.parent_path());
    save_epochset(set, output);
    return {{"command", "gen"}, {"output", output.string()}, {"n_epochs", set.size()}, {"classes", class_counts(set)}};
}

json cmd_combine(const fs::path& input, const fs::path& output, std::vector<std::pair<ClassLabel, ClassLabel>> pairs,
                 CombineMode mode) {
    EpochSet set = load_epochset(input);
    if (pairs.empty()) {
        std::vector<ClassLabel> simple;
        for (const auto& l : set.labels())
            if (l.kind() == LabelKind::Simple) simple.push_back(l);
        pairs = all_pairs(simple);
    }
    if (pairs.empty()) throw InvalidArgument("no class pairs to combine");
    json added = json::object();
    EpochSet combined;
    for (const auto& [a, b] : pairs) {
        const EpochSet c = build_combined_class(set.of_class(a), set.of_class(b), mode);
        added[c[0].label().name()] = c.size();
        combined.append(c);
    }
    set.append(combined);
    if (output.has_parent_path()) fs::create_directories(output.parent_path());
    save_epochset(set, output);
    return {{"command", "combine"},
            {"output", output.string()},
            {"added", added},
            {"n_classes", set.labels().size()},
            {"n_epochs", set.size()}};
}

json cmd_erders(const fs::path& input, const ErdersOptions& options, const fs::path& out_dir) {
    const EpochSet set = load_epochset(input);
    json files = json::array();
    for (const auto& [label, members] : by_class(set)) {
        const PowerCurve curve =
            select_channels(normalize_at_reference(grand_average_power(members, options.band), options.t_ref),
                            options.channels);
        std::ostringstream csv;
        write_power_curve_csv(curve, csv);
        const fs::path path = out_dir / ("erders_" + label.name() + ".csv");
        write_text(path, csv.str());
        files.push_back(path.string());
    }
    const auto channels = options.channels.empty() ? set.channel_names() : options.channels;
    const RelativePowerTable table = relative_average_power(set, options.band, channels, options.interval, options.t_ref);
    json rel = json::object();
    for (std::size_t c = 0; c < table.channels.size(); ++c)
        for (std::size_t k = 0; k < table.classes.size(); ++k) rel[table.channels[c]][table.classes[k].name()] = table.values[c][k];
    write_json(out_dir / "relative_power.json",
               {{"interval_s", {options.interval.first, options.interval.second}}, {"t_ref_s", options.t_ref}, {"values", rel}});
    return {{"command", "erders"}, {"curves", files}, {"relative_power", (out_dir / "relative_power.json").string()}};
}

json cmd_train(const PipelineConfig& config) {
    config.validate(true, true);
    const EpochSet data = load_epochset(config.input);
    const auto spec = config.architecture_spec();
    net::Model model;
    const experiment::RunReport report =
        experiment::run_once(spec, data, config.run_options(), config.master_seed(), 0, &model);
    fs::create_directories(config.out_dir);
    net::save_model(model, config.out_dir / "model.mife");
    write_json(config.out_dir / "report.json", experiment::to_json(report));
    std::ostringstream csv;
    experiment::write_confusion_csv(report.confusion, csv);
    write_text(config.out_dir / "confusion.csv", csv.str());
    json summary = experiment::to_json(report, false);
    summary["command"] = "train";
    return summary;
}

json cmd_ova(const PipelineConfig& config) {
    config.validate(true, true);
    const auto real = by_class(load_epochset(config.input));
    std::map<ClassLabel, EpochSet> combined_real;
    if (!config.combined_input.empty()) combined_real = by_class(load_epochset(config.combined_input));

    std::vector<ClassLabel> targets = config.ova.targets;
    if (targets.empty()) {
        for (const auto& [label, set] : real) targets.push_back(label);
        for (const auto& c : config.ova.plan.artificial_classes)
            if (!real.contains(c)) targets.push_back(c);
    }
    experiment::OvaOptions options;
    options.plan = config.ova.plan;
    options.train = config.train;
    options.band = config.band;
    options.walsh_rank = config.run.walsh_rank;
    const auto reports =
        experiment::ova_campaign(config.architecture_spec(), real, combined_real, targets, options, config.master_seed());

    fs::create_directories(config.out_dir);
    write_json(config.out_dir / "ova.json", experiment::to_json(reports));
    json summary = json::object();
    for (const auto& [label, r] : reports) {
        std::ostringstream csv;
        experiment::write_confusion_csv(r.report.confusion, csv);
        write_text(config.out_dir / ("ova_" + label.name() + "_confusion.csv"), csv.str());
        summary[label.name()] = {{"accuracy", r.report.metrics.accuracy}, {"kappa", r.report.metrics.kappa}};
    }
    return {{"command", "ova"}, {"classes", summary}};
}

json cmd_repeat(const PipelineConfig& config) {
    config.validate(true, true);
    const EpochSet data = load_epochset(config.input);
    const auto stats = experiment::run_repeated(config.architecture_spec(), data, config.run_options(), config.n_runs,
                                                config.master_seed());
    fs::create_directories(config.out_dir);
    write_json(config.out_dir / "repeat.json", experiment::to_json(stats));
    return {{"command", "repeat"},
            {"n_runs", stats.n_runs},
            {"accuracy", experiment::to_json(stats.accuracy)},
            {"kappa", experiment::to_json(stats.kappa)}};
}

std::size_t cmd_params(const net::ArchitectureSpec& spec, bool include_bias) { return net::param_count(spec, include_bias); }

std::vector<double> read_csv_column(const fs::path& path, std::size_t column) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (column >= cells.size()) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": missing column");
        std::string cell = cells[column];
        cell.erase(0, cell.find_first_not_of(" \t"));
        cell.erase(cell.find_last_not_of(" \t") + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            if (out.empty()) continue;  // header
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": not a number: " + cell);
        }
        out.push_back(v);
    }
    return out;
}

json cmd_ttest(const fs::path& a, const fs::path& b, std::size_t column) {
    json j = experiment::to_json(experiment::paired_ttest(read_csv_column(a, column), read_csv_column(b, column)));
    j["command"] = "ttest";
    return j;
}

}  // namespace mibci::cli
