#include "mibci/synthesis.hpp"

#include <algorithm>
#include <numeric>

#include "mibci/error.hpp"
#include "mibci/split.hpp"

namespace mibci {

namespace {

void require_single_simple_class(const EpochSet& set, const char* which) {
    if (set.empty()) throw InvalidArgument(std::string(which) + " set is empty");
    const auto labels = set.labels();
    if (labels.size() != 1 || labels.front().kind() != LabelKind::Simple)
        throw InvalidArgument(std::string(which) + " set must hold exactly one simple class");
}

}  // namespace

Epoch combine_epochs(const Epoch& a, const Epoch& b) {
    if (a.fs() != b.fs()) throw ShapeError("cannot combine epochs with different sampling rates");
    if (a.n_channels() != b.n_channels() || a.n_samples() != b.n_samples())
        throw ShapeError("cannot combine epochs of different shape");
    if (a.label().kind() != LabelKind::Simple || b.label().kind() != LabelKind::Simple)
        throw InvalidArgument("only simple-imagery epochs can be combined");
    const BodyPart pa = a.label().parts().front();
    const BodyPart pb = b.label().parts().front();
    if (pa == pb) throw InvalidArgument("cannot combine two epochs of the same body part");

    SampleMatrix out(a.n_channels(), a.n_samples());
    const auto va = a.data().values();
    const auto vb = b.data().values();
    auto vo = out.values();
    for (std::size_t i = 0; i < vo.size(); ++i) vo[i] = (va[i] + vb[i]) / 2.0;
    return Epoch(std::move(out), a.fs(), ClassLabel::combined(pa, pb), a.channel_names(), Provenance::Artificial);
}

EpochSet build_combined_class(const EpochSet& set_a, const EpochSet& set_b, CombineMode mode) {
    require_single_simple_class(set_a, "first");
    require_single_simple_class(set_b, "second");
    EpochSet out;
    if (mode == CombineMode::Aligned) {
        const std::size_t n = std::min(set_a.size(), set_b.size());
        for (std::size_t i = 0; i < n; ++i) out.push_back(combine_epochs(set_a[i], set_b[i]));
    } else {
        for (const auto& ea : set_a)
            for (const auto& eb : set_b) out.push_back(combine_epochs(ea, eb));
    }
    return out;
}

EpochSet sample_combined(const EpochSet& set_a, const EpochSet& set_b, std::size_t count, Rng& rng) {
    require_single_simple_class(set_a, "first");
    require_single_simple_class(set_b, "second");
    const std::size_t total = set_a.size() * set_b.size();
    if (count > total)
        throw InvalidArgument("requested " + std::to_string(count) + " combined epochs but only " +
                              std::to_string(total) + " distinct pairs exist");
    std::vector<std::size_t> pairs(total);
    std::iota(pairs.begin(), pairs.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `count` entries become a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, total - 1);
        std::swap(pairs[i], pairs[pick(rng)]);
    }
    pairs.resize(count);
    std::sort(pairs.begin(), pairs.end());

    EpochSet out;
    for (std::size_t p : pairs) out.push_back(combine_epochs(set_a[p / set_b.size()], set_b[p % set_b.size()]));
    return out;
}

EpochSet augment_segment_swap(const EpochSet& set, std::size_t n_segments, std::size_t target_count,
                              std::uint64_t seed) {
    if (set.empty()) throw InvalidArgument("cannot augment an empty set");
    if (set.labels().size() != 1) throw InvalidArgument("augmentation needs a single-class set");
    if (target_count < set.size()) throw InvalidArgument("target count is below the current set size");
    if (target_count == set.size()) return set;
    if (set.size() < 2) throw InvalidArgument("augmentation needs at least two source epochs");
    if (n_segments < 2 || n_segments > set.n_samples())
        throw InvalidArgument("segment count must lie in [2, n_samples]");

    const std::size_t seg_len = set.n_samples() / n_segments;
    Rng rng(seed);
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    EpochSet out = set;
    while (out.size() < target_count) {
        std::shuffle(order.begin(), order.end(), rng);
        SampleMatrix data(set.n_channels(), set.n_samples());
        for (std::size_t s = 0; s < n_segments; ++s) {
            const Epoch& src = set[order[s % order.size()]];
            const std::size_t begin = s * seg_len;
            const std::size_t end = (s + 1 == n_segments) ? set.n_samples() : begin + seg_len;
            for (std::size_t k = 0; k < set.n_channels(); ++k)
                for (std::size_t n = begin; n < end; ++n) data(k, n) = src.data()(k, n);
        }
        out.push_back(set[0].with_data(std::move(data)).with_provenance(Provenance::Augmented));
    }
    return out;
}

namespace {

struct SplitClass {
    EpochSet train;
    EpochSet test;
};

std::size_t target_train_count(const OvaPlan& plan, std::size_t others) {
    if (const auto* fixed = std::get_if<FixedCount>(&plan.augmentation_target)) return fixed->n;
    return others;
}

}  // namespace

OvaDataset build_ova_dataset(const std::map<ClassLabel, EpochSet>& real_sets,
                             const std::map<ClassLabel, EpochSet>& combined_real, const OvaPlan& plan,
                             std::uint64_t seed) {
    const ClassLabel& target = plan.target_class;
    const bool target_is_real = real_sets.contains(target);
    const bool target_is_artificial =
        std::find(plan.artificial_classes.begin(), plan.artificial_classes.end(), target) !=
        plan.artificial_classes.end();
    if (!target_is_real && !target_is_artificial)
        throw InvalidArgument("target class " + target.name() + " has no training source");

    std::size_t n_classes = real_sets.size();
    for (const auto& c : plan.artificial_classes)
        if (!real_sets.contains(c)) ++n_classes;
    for (const auto& [label, set] : combined_real)
        if (!real_sets.contains(label) &&
            std::find(plan.artificial_classes.begin(), plan.artificial_classes.end(), label) ==
                plan.artificial_classes.end())
            ++n_classes;
    if (n_classes < 2) throw InvalidArgument("one-versus-all needs at least two classes");

    // Real classes: stratified train/test split.
    std::map<ClassLabel, SplitClass> split;
    std::uint64_t idx = 0;
    for (const auto& [label, set] : real_sets) {
        if (set.empty()) throw InvalidArgument("class " + label.name() + " is empty");
        for (const auto& e : set)
            if (e.label() != label) throw InvalidArgument("set for class " + label.name() + " holds other labels");
        auto p = split_random(set, plan.real_split_fraction, derive_seed(seed, "ova-split", idx++));
        split[label] = {std::move(p.first), std::move(p.second)};
    }

    // Artificial combined classes come from the train parts only.
    auto sources_of = [&](const ClassLabel& c) -> std::pair<const SplitClass*, const SplitClass*> {
        if (c.kind() != LabelKind::Combined) throw InvalidArgument("artificial class " + c.name() + " is not combined");
        auto a = split.find(ClassLabel::simple(c.parts()[0]));
        auto b = split.find(ClassLabel::simple(c.parts()[1]));
        if (a == split.end() || b == split.end())
            throw InvalidArgument("missing simple class for artificial " + c.name());
        return {&a->second, &b->second};
    };

    std::map<ClassLabel, EpochSet> artificial;
    idx = 0;
    for (const auto& c : plan.artificial_classes) {
        auto [a, b] = sources_of(c);
        if (c == target) {
            ++idx;
            continue;
        }
        const std::size_t count = plan.artificial_count ? plan.artificial_count
                                                        : std::min(a->train.size() + a->test.size(),
                                                                   b->train.size() + b->test.size());
        Rng rng = make_rng(seed, "ova-artificial", idx++);
        artificial[c] = sample_combined(a->train, b->train, count, rng);
    }

    std::size_t others = 0;
    for (const auto& [label, s] : split)
        if (label != target) others += s.train.size();
    for (const auto& [label, s] : artificial) others += s.size();

    const std::size_t n_target = target_train_count(plan, others);
    EpochSet target_train;
    if (target_is_artificial) {
        auto [a, b] = sources_of(target);
        Rng rng = make_rng(seed, "ova-target");
        try {
            target_train = sample_combined(a->train, b->train, n_target, rng);
        } catch (const InvalidArgument& ex) {
            throw InvalidArgument(std::string("impossible balance: ") + ex.what());
        }
    } else {
        const EpochSet& real = split.at(target).train;
        if (n_target < real.size())
            throw InvalidArgument("impossible balance: target already has " + std::to_string(real.size()) +
                                  " training epochs, more than the requested " + std::to_string(n_target));
        target_train = augment_segment_swap(real, plan.n_segments, n_target, derive_seed(seed, "ova-augment"));
    }

    OvaDataset out;
    const ClassLabel other = ClassLabel::other();
    auto add = [&](EpochSet& dst, std::vector<ClassLabel>& origin, const EpochSet& src) {
        for (const auto& e : src) {
            origin.push_back(e.label());
            dst.push_back(e.label() == target ? e : e.with_label(other));
        }
    };

    add(out.train, out.train_origin, target_train);
    for (const auto& [label, s] : split)
        if (label != target) add(out.train, out.train_origin, s.train);
    for (const auto& [label, s] : artificial) add(out.train, out.train_origin, s);

    if (target_is_real) add(out.test, out.test_origin, split.at(target).test);
    if (auto it = combined_real.find(target); it != combined_real.end()) add(out.test, out.test_origin, it->second);
    for (const auto& [label, s] : split)
        if (label != target) add(out.test, out.test_origin, s.test);
    for (const auto& [label, s] : combined_real)
        if (label != target) add(out.test, out.test_origin, s);
    return out;
}

}  // namespace mibci
