#include "mibci/epoch.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mibci/error.hpp"

namespace mibci {

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_)
        throw ShapeError("sample matrix payload has " + std::to_string(values_.size()) + " values, expected " +
                         std::to_string(rows_ * cols_));
}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw ShapeError("ragged rows in sample matrix");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return SampleMatrix(rows.size(), cols, std::move(flat));
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Real: return "real";
        case Provenance::Artificial: return "artificial";
        case Provenance::Augmented: return "augmented";
    }
    return "?";
}

Provenance provenance_from_string(std::string_view text) {
    if (text == "real") return Provenance::Real;
    if (text == "artificial") return Provenance::Artificial;
    if (text == "augmented") return Provenance::Augmented;
    throw InvalidArgument("unknown provenance '" + std::string(text) + "'");
}

Epoch::Epoch(SampleMatrix data, double fs, ClassLabel label, std::vector<std::string> channel_names,
             Provenance provenance)
    : data_(std::move(data)),
      fs_(fs),
      label_(std::move(label)),
      channel_names_(std::move(channel_names)),
      provenance_(provenance) {
    if (data_.rows() < 1 || data_.cols() < 1) throw ShapeError("epoch needs at least one channel and one sample");
    if (!(fs_ > 0.0) || !std::isfinite(fs_)) throw InvalidArgument("sampling rate must be positive");
    if (channel_names_.size() != data_.rows())
        throw ShapeError("epoch has " + std::to_string(data_.rows()) + " channels but " +
                         std::to_string(channel_names_.size()) + " channel names");
    for (double v : data_.values())
        if (!std::isfinite(v)) throw NumericError("epoch contains a non-finite sample");
}

Epoch Epoch::with_data(SampleMatrix data) const {
    return Epoch(std::move(data), fs_, label_, channel_names_, provenance_);
}

Epoch Epoch::with_label(ClassLabel label) const {
    Epoch e = *this;
    e.label_ = std::move(label);
    return e;
}

Epoch Epoch::with_provenance(Provenance provenance) const {
    Epoch e = *this;
    e.provenance_ = provenance;
    return e;
}

EpochSet::EpochSet(std::vector<Epoch> epochs) {
    epochs_.reserve(epochs.size());
    for (auto& e : epochs) push_back(std::move(e));
}

bool EpochSet::compatible_with(const Epoch& e) const {
    if (epochs_.empty()) return true;
    const Epoch& f = epochs_.front();
    return f.fs() == e.fs() && f.n_channels() == e.n_channels() && f.n_samples() == e.n_samples() &&
           f.channel_names() == e.channel_names();
}

void EpochSet::push_back(Epoch epoch) {
    if (!compatible_with(epoch))
        throw ShapeError("epoch disagrees with set on sampling rate, shape or channel names");
    epochs_.push_back(std::move(epoch));
}

void EpochSet::append(const EpochSet& other) {
    for (const auto& e : other) push_back(e);
}

namespace {
const Epoch& front_or_throw(const std::vector<Epoch>& epochs) {
    if (epochs.empty()) throw InvalidArgument("empty epoch set has no shared metadata");
    return epochs.front();
}
}  // namespace

double EpochSet::fs() const { return front_or_throw(epochs_).fs(); }
std::size_t EpochSet::n_channels() const { return front_or_throw(epochs_).n_channels(); }
std::size_t EpochSet::n_samples() const { return front_or_throw(epochs_).n_samples(); }
const std::vector<std::string>& EpochSet::channel_names() const { return front_or_throw(epochs_).channel_names(); }

std::vector<ClassLabel> EpochSet::labels() const {
    std::set<ClassLabel> seen;
    for (const auto& e : epochs_) seen.insert(e.label());
    return {seen.begin(), seen.end()};
}

EpochSet EpochSet::of_class(const ClassLabel& label) const {
    EpochSet out;
    for (const auto& e : epochs_)
        if (e.label() == label) out.epochs_.push_back(e);
    return out;
}

std::size_t EpochSet::count(const ClassLabel& label) const {
    return static_cast<std::size_t>(
        std::count_if(epochs_.begin(), epochs_.end(), [&](const Epoch& e) { return e.label() == label; }));
}

}  // namespace mibci
