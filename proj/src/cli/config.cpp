#include "mibci/cli/config.hpp"

#include <fstream>

#include "mibci/error.hpp"

namespace mibci::cli {

using nlohmann::json;

namespace {

template <typename T>
void take(const json& j, const char* key, T& field) {
    if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<T>();
}

std::vector<ClassLabel> labels_from(const json& j) {
    std::vector<ClassLabel> out;
    for (const auto& s : j) out.push_back(ClassLabel::parse(s.get<std::string>()));
    return out;
}

void require_file(const std::filesystem::path& p, const char* what) {
    if (!std::filesystem::is_regular_file(p)) throw IoError(std::string(what) + " not found: " + p.string());
}

}  // namespace

BandSpec band_from_json(const json& j) {
    BandSpec b;
    take(j, "lo_hz", b.lo_hz);
    take(j, "hi_hz", b.hi_hz);
    take(j, "order", b.order);
    return b;
}

std::pair<ClassLabel, ClassLabel> parse_pair(const std::string& text) {
    const auto label = ClassLabel::parse(text);
    if (label.kind() != LabelKind::Combined) throw InvalidArgument("'" + text + "' is not a pair such as LH-RH");
    return {ClassLabel::simple(label.parts()[0]), ClassLabel::simple(label.parts()[1])};
}

std::vector<std::pair<ClassLabel, ClassLabel>> all_pairs(const std::vector<ClassLabel>& simple) {
    std::vector<std::pair<ClassLabel, ClassLabel>> out;
    for (std::size_t i = 0; i < simple.size(); ++i)
        for (std::size_t j = i + 1; j < simple.size(); ++j) out.emplace_back(simple[i], simple[j]);
    return out;
}

PipelineConfig config_from_json(const json& j) {
    try {
        PipelineConfig c;
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("input")) c.input = j.at("input").get<std::string>();
        if (j.contains("combined_input")) c.combined_input = j.at("combined_input").get<std::string>();
        if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("band")) c.band = j.at("band").is_null() ? std::nullopt : std::optional(band_from_json(j.at("band")));
        if (j.contains("architecture")) c.architecture = j.at("architecture");

        if (j.contains("train")) {
            const auto& t = j.at("train");
            take(t, "learning_rate", c.train.learning_rate);
            take(t, "batch_size", c.train.batch_size);
            take(t, "max_epochs", c.train.max_epochs);
            if (t.contains("optimizer")) c.train.optimizer = net::optimizer_from_string(t.at("optimizer").get<std::string>());
            take(t, "momentum", c.train.momentum);
            take(t, "beta1", c.train.beta1);
            take(t, "beta2", c.train.beta2);
            take(t, "adam_eps", c.train.adam_eps);
            take(t, "weight_decay", c.train.weight_decay);
            take(t, "patience", c.train.patience);
            take(t, "train_accuracy_stop", c.train.train_accuracy_stop);
        }

        if (j.contains("experiment")) {
            const auto& e = j.at("experiment");
            take(e, "test_fraction", c.run.test_fraction);
            take(e, "n_runs", c.n_runs);
            take(e, "walsh_rank", c.run.walsh_rank);
            take(e, "combine_train_count", c.run.combine_train_count);
            take(e, "augment_to", c.run.augment_to);
            take(e, "augment_segments", c.run.augment_segments);
            if (e.contains("combine_pairs"))
                for (const auto& p : e.at("combine_pairs")) c.run.combine_pairs.push_back(parse_pair(p.get<std::string>()));
        }

        if (j.contains("ova")) {
            const auto& o = j.at("ova");
            if (o.contains("targets")) c.ova.targets = labels_from(o.at("targets"));
            if (o.contains("artificial_classes")) c.ova.plan.artificial_classes = labels_from(o.at("artificial_classes"));
            take(o, "real_split_fraction", c.ova.plan.real_split_fraction);
            take(o, "artificial_count", c.ova.plan.artificial_count);
            take(o, "n_segments", c.ova.plan.n_segments);
            if (o.contains("augmentation")) {
                const auto& a = o.at("augmentation");
                if (a.is_string() && a.get<std::string>() == "balance")
                    c.ova.plan.augmentation_target = BalanceToOthers{};
                else
                    c.ova.plan.augmentation_target = FixedCount{a.get<std::size_t>()};
            }
        }

        if (j.contains("generate")) {
            const auto& g = j.at("generate");
            auto& p = c.generate;
            take(g, "n_channels", p.n_channels);
            take(g, "fs", p.fs);
            take(g, "duration_s", p.duration_s);
            take(g, "epochs_per_class", p.epochs_per_class);
            if (g.contains("classes")) p.classes = labels_from(g.at("classes"));
            take(g, "depth", p.depth);
            take(g, "onset_s", p.onset_s);
            take(g, "erd_duration_s", p.erd_duration_s);
            take(g, "carrier_amplitude", p.carrier_amplitude);
            take(g, "noise_amplitude", p.noise_amplitude);
            take(g, "carrier_jitter_hz", p.carrier_jitter_hz);
            take(g, "carrier_bandwidth_hz", p.carrier_bandwidth_hz);
        }

        if (j.contains("erders")) {
            const auto& e = j.at("erders");
            if (e.contains("band")) c.erders.band = band_from_json(e.at("band"));
            take(e, "channels", c.erders.channels);
            if (e.contains("interval")) {
                const auto iv = e.at("interval").get<std::vector<double>>();
                if (iv.size() != 2) throw InvalidArgument("erders.interval needs two values");
                c.erders.interval = {iv[0], iv[1]};
            }
            take(e, "t_ref", c.erders.t_ref);
        }
        return c;
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed config: ") + ex.what());
    }
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config " + path.string());
    try {
        return config_from_json(json::parse(f));
    } catch (const json::parse_error& ex) {
        throw FormatError(std::string("config is not valid JSON: ") + ex.what());
    }
}

net::ArchitectureSpec resolve_architecture(const json& ref) {
    if (ref.is_null()) throw InvalidArgument("no architecture given");
    if (ref.is_object()) return net::architecture_from_json(ref);
    const auto text = ref.get<std::string>();
    if (text == "reference") return net::reference_architecture();
    require_file(text, "architecture file");
    return net::load_architecture(text);
}

std::uint64_t PipelineConfig::master_seed() const {
    if (!seed) throw InvalidArgument("a master seed is required (config \"seed\" or --seed)");
    return *seed;
}

net::ArchitectureSpec PipelineConfig::architecture_spec() const { return resolve_architecture(architecture); }

experiment::RunOptions PipelineConfig::run_options() const {
    experiment::RunOptions o = run;
    o.train = train;
    o.band = band;
    return o;
}

void PipelineConfig::validate(bool need_input, bool need_architecture) const {
    master_seed();
    train.validate();
    if (!(run.test_fraction > 0.0 && run.test_fraction < 1.0)) throw InvalidArgument("test_fraction must lie in (0,1)");
    if (n_runs == 0) throw InvalidArgument("n_runs must be at least 1");
    if (need_input) {
        if (input.empty()) throw InvalidArgument("no input container given");
        require_file(input, "input container");
    }
    if (!combined_input.empty()) require_file(combined_input, "combined input container");
    if (need_architecture) architecture_spec().expanded();
}

}  // namespace mibci::cli
