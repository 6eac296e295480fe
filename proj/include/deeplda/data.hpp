#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deeplda/matrix.hpp"
#include "deeplda/rng.hpp"

namespace deeplda {

/// Binary class labels, each 0 or 1.
using Labels = std::vector<int>;

/// Unparsed CSV contents. Every row has exactly header.size() cells.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;

    std::size_t rows() const noexcept { return cells.size(); }
    /// Index of the column whose trimmed name equals `name`, if any.
    std::optional<std::size_t> find_column(std::string_view name) const;
};

/// Which column is the target, which columns to discard, and which target
/// token means "positive" (label 1). Column names compare after trimming.
struct DataSchema {
    std::string target_column;
    std::vector<std::string> drop_columns;
    std::string positive_label = "1";

    void validate() const;

    /// Reads the JSON form: {"target": ..., "drop": [...], "positive_label": ...}.
    static DataSchema load(const std::filesystem::path& path);
    static DataSchema from_json_text(const std::string& text);
    std::string to_json_text() const;
};

/// Feature matrix plus binary labels. Immutable once built.
class Dataset {
public:
    /// Throws DataError unless x.rows() == y.size() >= 1, labels are binary,
    /// names match the column count and x is finite.
    Dataset(Matrix x, Labels y, std::vector<std::string> feature_names);

    const Matrix& x() const noexcept { return x_; }
    const Labels& y() const noexcept { return y_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    std::size_t rows() const noexcept { return x_.rows(); }
    std::size_t features() const noexcept { return x_.cols(); }

    /// Labels as an n x 1 matrix of 0.0/1.0.
    Matrix y_matrix() const;
    std::size_t count(int label) const;

    Dataset select(std::span<const std::size_t> indices) const;
    /// Same labels and names with replaced features (row count must match).
    Dataset with_features(Matrix x, std::vector<std::string> names) const;

private:
    Matrix x_;
    Labels y_;
    std::vector<std::string> names_;
};

/// Parses a comma-separated file with one header row. Supports double-quoted
/// fields. Throws DataError on missing file, ragged rows or missing target.
RawTable load_csv(const std::filesystem::path& path, const DataSchema& schema);
RawTable parse_csv(const std::string& text, const DataSchema& schema);

/// Drops schema columns, parses numbers, imputes missing cells with the
/// column median and maps the target through positive_label.
Dataset clean(const RawTable& raw, const DataSchema& schema);

struct Split {
    Dataset train;
    Dataset val;
};

/// Per-class shuffle then proportional allocation (rounded) to validation.
Split stratified_split(const Dataset& ds, double val_fraction, Rng& rng);

/// Per-feature z-scoring with statistics taken from a training split only.
class Standardizer {
public:
    /// Fits on split.train; the validation half is never inspected.
    static Standardizer fit(const Split& split);
    /// Fits on a dataset that the caller asserts is training data.
    static Standardizer fit_training(const Dataset& train);
    /// Rebuilds previously fitted parameters (e.g. from a manifest).
    static Standardizer restore(std::vector<double> mean, std::vector<double> stddev);

    Dataset apply(const Dataset& ds) const;
    Matrix apply(const Matrix& x) const;

    const std::vector<double>& mean() const noexcept { return mean_; }
    /// Population standard deviations; constant columns store 1.
    const std::vector<double>& stddev() const noexcept { return std_; }

private:
    Standardizer(std::vector<double> mean, std::vector<double> stddev);
    std::vector<double> mean_;
    std::vector<double> std_;
};

}  // namespace deeplda
