#include "mibci/experiment/metrics.hpp"

#include <algorithm>

#include "mibci/error.hpp"

namespace mibci::experiment {

ConfusionMatrix::ConfusionMatrix(std::vector<ClassLabel> order)
    : classes(std::move(order)), counts(classes.size(), std::vector<std::size_t>(classes.size(), 0)) {}

ConfusionMatrix ConfusionMatrix::from_counts(std::vector<ClassLabel> order, std::vector<std::vector<std::size_t>> counts) {
    if (counts.size() != order.size()) throw ShapeError("confusion matrix rows differ from class count");
    for (const auto& row : counts)
        if (row.size() != order.size()) throw ShapeError("confusion matrix must be square");
    ConfusionMatrix cm(std::move(order));
    cm.counts = std::move(counts);
    return cm;
}

std::size_t ConfusionMatrix::index_of(const ClassLabel& label) const {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw InvalidArgument("label " + label.name() + " is not in the class map");
    return static_cast<std::size_t>(it - classes.begin());
}

std::size_t ConfusionMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : counts)
        for (auto c : row) n += c;
    return n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t k) const {
    std::size_t n = 0;
    for (auto c : counts.at(k)) n += c;
    return n;
}

std::size_t ConfusionMatrix::col_sum(std::size_t k) const {
    std::size_t n = 0;
    for (const auto& row : counts) n += row.at(k);
    return n;
}

Metrics metrics(const ConfusionMatrix& cm) {
    const std::size_t total = cm.total();
    if (total == 0) throw InvalidArgument("metrics of an empty confusion matrix");
    const double n = static_cast<double>(total);
    Metrics m;
    std::size_t trace = 0;
    double p_e = 0.0;
    for (std::size_t k = 0; k < cm.classes.size(); ++k) {
        trace += cm.counts[k][k];
        const std::size_t row = cm.row_sum(k);
        m.sensitivities.push_back(row ? std::optional<double>(100.0 * static_cast<double>(cm.counts[k][k]) /
                                                              static_cast<double>(row))
                                      : std::nullopt);
        p_e += (static_cast<double>(row) / n) * (static_cast<double>(cm.col_sum(k)) / n);
    }
    const double p_o = static_cast<double>(trace) / n;
    m.accuracy = 100.0 * p_o;
    m.kappa = p_e >= 1.0 ? 1.0 : (p_o - p_e) / (1.0 - p_e);
    return m;
}

void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out) {
    out << "truth\\predicted";
    for (const auto& c : cm.classes) out << ',' << c.name();
    out << '\n';
    for (std::size_t k = 0; k < cm.classes.size(); ++k) {
        out << cm.classes[k].name();
        for (auto c : cm.counts[k]) out << ',' << c;
        out << '\n';
    }
}

}  // namespace mibci::experiment
