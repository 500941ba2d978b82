#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "mibci/label.hpp"

namespace mibci::experiment {

/// counts[true][predicted], classes in the given order.
struct ConfusionMatrix {
    std::vector<ClassLabel> classes;
    std::vector<std::vector<std::size_t>> counts;

    explicit ConfusionMatrix(std::vector<ClassLabel> order = {});
    static ConfusionMatrix from_counts(std::vector<ClassLabel> order, std::vector<std::vector<std::size_t>> counts);

    std::size_t index_of(const ClassLabel& label) const;  // throws if absent
    void add(std::size_t truth, std::size_t predicted) { ++counts.at(truth).at(predicted); }
    std::size_t total() const;
    std::size_t row_sum(std::size_t k) const;
    std::size_t col_sum(std::size_t k) const;
};

struct Metrics {
    std::vector<std::optional<double>> sensitivities;  // percent; absent for an empty row
    double accuracy = 0.0;                             // percent
    double kappa = 0.0;                                // Cohen's kappa
};

/// sensitivity_k = cm[k][k] / row_k; accuracy = trace / total;
/// kappa = (p_o - p_e) / (1 - p_e) with p_e = sum_k row_k col_k / total^2.
/// A matrix with everything in one diagonal cell (p_e = 1) has kappa 1.
Metrics metrics(const ConfusionMatrix& cm);

/// Header row "truth\predicted,<classes>", then one row per true class.
void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out);

}  // namespace mibci::experiment
