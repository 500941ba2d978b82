#include "mibci/experiment/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mibci/error.hpp"
#include "mibci/split.hpp"

namespace mibci::experiment {

namespace {

EpochSet only(const EpochSet& set, const ClassLabel& label) {
    EpochSet out;
    for (const auto& e : set)
        if (e.label() == label) out.push_back(e);
    return out;
}

std::vector<ClassLabel> label_order(const EpochSet& a, const EpochSet& b) {
    std::set<ClassLabel> s;
    for (const auto& e : a) s.insert(e.label());
    for (const auto& e : b) s.insert(e.label());
    return {s.begin(), s.end()};
}

}  // namespace

std::map<ClassLabel, std::size_t> count_labels(const EpochSet& set) {
    std::map<ClassLabel, std::size_t> n;
    for (const auto& e : set) ++n[e.label()];
    return n;
}

RunReport run_once(const net::ArchitectureSpec& spec, const EpochSet& data, const RunOptions& options,
                   std::uint64_t seed, std::size_t run_index, net::Model* trained) {
    if (data.empty()) throw InvalidArgument("dataset is empty");
    // Artificial epochs of the classes rebuilt below (as written by the combine
    // command) are dropped: mixing them into the split would leak source trials.
    std::set<ClassLabel> rebuilt;
    for (const auto& [a, b] : options.combine_pairs) {
        if (a.kind() != LabelKind::Simple || b.kind() != LabelKind::Simple)
            throw InvalidArgument("combine pairs must name simple classes");
        rebuilt.insert(ClassLabel::combined(a.parts().front(), b.parts().front()));
    }
    EpochSet source;
    for (const auto& e : data)
        if (!(e.provenance() == Provenance::Artificial && rebuilt.count(e.label()))) source.push_back(e);
    if (source.empty()) throw InvalidArgument("dataset is empty");
    const EpochSet filtered = options.band ? butterworth_bandpass(source, *options.band) : source;
    Partition split = split_random(filtered, options.test_fraction, derive_seed(seed, "split", run_index));

    std::uint64_t pair_index = 0;
    for (const auto& [a, b] : options.combine_pairs) {
        const EpochSet train_a = only(split.first, a), train_b = only(split.first, b);
        const EpochSet test_a = only(split.second, a), test_b = only(split.second, b);
        if (train_a.empty() || train_b.empty())
            throw InvalidArgument("combine pair " + a.name() + "/" + b.name() + " has no training epochs");
        if (options.combine_train_count) {
            Rng rng = make_rng(derive_seed(seed, "combine", run_index), "pair", pair_index);
            split.first.append(sample_combined(train_a, train_b, options.combine_train_count, rng));
        } else {
            split.first.append(build_combined_class(train_a, train_b));
        }
        ++pair_index;
        if (!test_a.empty() && !test_b.empty()) split.second.append(build_combined_class(test_a, test_b));
    }

    const ClassMap classes = make_class_map(label_order(split.first, split.second), options.walsh_rank);
    Partition fit_val = validation_split(split.first, derive_seed(seed, "validation", run_index));
    if (options.augment_to) {
        EpochSet grown;
        std::uint64_t class_index = 0;
        for (const auto& label : fit_val.first.labels()) {
            const EpochSet members = fit_val.first.of_class(label);
            const std::size_t target = std::max(options.augment_to, members.size());
            grown.append(augment_segment_swap(members, options.augment_segments, target,
                                              derive_seed(derive_seed(seed, "augment", run_index), "class", class_index++)));
        }
        fit_val.first = std::move(grown);
    }
    net::TrainConfig config = options.train;
    config.seed = derive_seed(seed, "init", run_index);

    TrainOutcome outcome = train_with_early_stop(spec, fit_val.first, fit_val.second, classes, config);
    RunReport report = make_report(outcome, evaluate(outcome.model, split.second, classes));
    if (trained) *trained = std::move(outcome.model);
    return report;
}

Summary summarize(const std::vector<double>& values) {
    if (values.empty()) throw InvalidArgument("summary of no values");
    Summary s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

RepeatedStats run_repeated(const net::ArchitectureSpec& spec, const EpochSet& data, const RunOptions& options,
                           std::size_t n_runs, std::uint64_t seed) {
    if (n_runs == 0) throw InvalidArgument("n_runs must be at least 1");
    RepeatedStats stats;
    stats.n_runs = n_runs;
    for (std::size_t r = 0; r < n_runs; ++r) {
        try {
            stats.runs.push_back(run_once(spec, data, options, seed, r));
        } catch (const Error& ex) {
            throw Error(ex.code(), "run " + std::to_string(r) + ": " + ex.what());
        }
    }
    stats.classes = stats.runs.front().confusion.classes;
    std::vector<double> acc, kap;
    std::vector<std::vector<double>> sens(stats.classes.size());
    for (const auto& run : stats.runs) {
        acc.push_back(run.metrics.accuracy);
        kap.push_back(run.metrics.kappa);
        for (std::size_t k = 0; k < sens.size(); ++k)
            if (run.metrics.sensitivities[k]) sens[k].push_back(*run.metrics.sensitivities[k]);
    }
    stats.accuracy = summarize(acc);
    stats.kappa = summarize(kap);
    for (const auto& s : sens) stats.sensitivities.push_back(s.empty() ? std::nullopt : std::optional(summarize(s)));
    return stats;
}

std::map<ClassLabel, OvaReport> ova_campaign(const net::ArchitectureSpec& spec,
                                             const std::map<ClassLabel, EpochSet>& real_sets,
                                             const std::map<ClassLabel, EpochSet>& combined_real,
                                             const std::vector<ClassLabel>& targets, const OvaOptions& options,
                                             std::uint64_t seed) {
    if (targets.empty()) throw InvalidArgument("no OVA target classes");
    auto filter = [&](const std::map<ClassLabel, EpochSet>& sets) {
        if (!options.band) return sets;
        std::map<ClassLabel, EpochSet> out;
        for (const auto& [label, set] : sets) out[label] = butterworth_bandpass(set, *options.band);
        return out;
    };
    const auto real = filter(real_sets);
    const auto combined = filter(combined_real);

    std::map<ClassLabel, OvaReport> reports;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const ClassLabel& target = targets[t];
        OvaPlan plan = options.plan;
        plan.target_class = target;
        const std::uint64_t run_seed = derive_seed(seed, "ova", t);
        OvaDataset ds = build_ova_dataset(real, combined, plan, run_seed);

        const ClassMap classes = make_class_map({target, ClassLabel::other()}, options.walsh_rank);
        const Partition fit_val = validation_split(ds.train, derive_seed(run_seed, "validation"));
        net::TrainConfig config = options.train;
        config.seed = derive_seed(run_seed, "init");
        TrainOutcome outcome = train_with_early_stop(spec, fit_val.first, fit_val.second, classes, config);

        OvaReport r;
        r.train_counts = count_labels(ds.train);
        r.test_counts = count_labels(ds.test);
        r.report = make_report(outcome, evaluate(outcome.model, ds.test, classes));

        // Per-origin breakdown: how often each original class was called the target.
        std::map<ClassLabel, OriginScore> origins;
        for (std::size_t i = 0; i < ds.test.size(); ++i) {
            const auto out = net::forward(outcome.model, ds.test[i], net::Mode::Infer);
            auto& o = origins[ds.test_origin[i]];
            o.origin = ds.test_origin[i];
            ++o.total;
            if (mdn_classify(out, classes.targets).index == 0) ++o.predicted_target;
        }
        for (auto& [label, o] : origins) r.test_origins.push_back(o);
        reports[target] = std::move(r);
    }
    return reports;
}

}  // namespace mibci::experiment
