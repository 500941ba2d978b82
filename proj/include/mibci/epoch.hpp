#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mibci/label.hpp"

namespace mibci {

/// Dense channels x samples block, row-major (one row per channel).
class SampleMatrix {
public:
    SampleMatrix() = default;
    SampleMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    /// Builds from nested rows; all rows must have equal length.
    static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {values_.data() + r * cols_, cols_}; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

enum class Provenance : std::uint8_t { Real = 0, Artificial = 1, Augmented = 2 };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view text);

/// One trial: a channels x samples block in microvolts, its sampling rate and
/// its class label. Construction validates every invariant; afterwards the
/// epoch is only read or copied.
class Epoch {
public:
    Epoch(SampleMatrix data, double fs, ClassLabel label, std::vector<std::string> channel_names,
          Provenance provenance = Provenance::Real);

    const SampleMatrix& data() const noexcept { return data_; }
    double fs() const noexcept { return fs_; }
    const ClassLabel& label() const noexcept { return label_; }
    const std::vector<std::string>& channel_names() const noexcept { return channel_names_; }
    Provenance provenance() const noexcept { return provenance_; }

    std::size_t n_channels() const noexcept { return data_.rows(); }
    std::size_t n_samples() const noexcept { return data_.cols(); }
    double duration_s() const noexcept { return static_cast<double>(n_samples()) / fs_; }

    Epoch with_data(SampleMatrix data) const;
    Epoch with_label(ClassLabel label) const;
    Epoch with_provenance(Provenance provenance) const;

    friend bool operator==(const Epoch&, const Epoch&) = default;

private:
    SampleMatrix data_;
    double fs_;
    ClassLabel label_;
    std::vector<std::string> channel_names_;
    Provenance provenance_;
};

/// Ordered collection of epochs sharing rate, shape and channel names.
class EpochSet {
public:
    EpochSet() = default;
    explicit EpochSet(std::vector<Epoch> epochs);

    void push_back(Epoch epoch);
    void append(const EpochSet& other);

    bool empty() const noexcept { return epochs_.empty(); }
    std::size_t size() const noexcept { return epochs_.size(); }
    const Epoch& operator[](std::size_t i) const { return epochs_[i]; }
    const std::vector<Epoch>& epochs() const noexcept { return epochs_; }
    auto begin() const noexcept { return epochs_.begin(); }
    auto end() const noexcept { return epochs_.end(); }

    // Shared metadata; only meaningful when the set is non-empty.
    double fs() const;
    std::size_t n_channels() const;
    std::size_t n_samples() const;
    const std::vector<std::string>& channel_names() const;

    /// Distinct labels in canonical order.
    std::vector<ClassLabel> labels() const;
    /// Members with the given label, in set order.
    EpochSet of_class(const ClassLabel& label) const;
    std::size_t count(const ClassLabel& label) const;

    bool compatible_with(const Epoch& e) const;

    friend bool operator==(const EpochSet&, const EpochSet&) = default;

private:
    std::vector<Epoch> epochs_;
};

}  // namespace mibci
