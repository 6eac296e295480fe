#include "deeplda/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "deeplda/error.hpp"

namespace deeplda {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// Splits one logical CSV record starting at `pos`; quoted fields may contain
// commas, doubled quotes and newlines.
std::vector<std::string> next_record(const std::string& text, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

bool blank_record(const std::vector<std::string>& r) { return r.size() == 1 && trim(r[0]).empty(); }

}  // namespace

std::optional<std::size_t> RawTable::find_column(std::string_view name) const {
    const auto wanted = trim(name);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (trim(header[i]) == wanted) return i;
    return std::nullopt;
}

void DataSchema::validate() const {
    if (trim(target_column).empty()) throw DataError("schema: target column is empty");
    for (const auto& d : drop_columns)
        if (trim(d) == trim(target_column)) throw DataError("schema: target column '" + target_column + "' is also dropped");
    if (trim(positive_label).empty()) throw DataError("schema: positive_label is empty");
}

DataSchema DataSchema::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("schema: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DataError("schema: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "target" && key != "drop" && key != "positive_label") {
            throw DataError("schema: unknown key '" + key + "'");
        }
    }
    DataSchema s;
    try {
        if (!j.contains("target")) throw DataError("schema: missing key 'target'");
        s.target_column = j.at("target").get<std::string>();
        if (j.contains("drop")) s.drop_columns = j.at("drop").get<std::vector<std::string>>();
        if (j.contains("positive_label")) {
            const auto& p = j.at("positive_label");
            s.positive_label = p.is_string() ? p.get<std::string>() : p.dump();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("schema: ") + e.what());
    }
    s.validate();
    return s;
}

DataSchema DataSchema::load(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open schema file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json_text(ss.str());
}

std::string DataSchema::to_json_text() const {
    nlohmann::ordered_json j;
    j["target"] = target_column;
    j["drop"] = drop_columns;
    j["positive_label"] = positive_label;
    return j.dump(2);
}

Dataset::Dataset(Matrix x, Labels y, std::vector<std::string> feature_names)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(feature_names)) {
    if (y_.empty()) throw DataError("dataset has no rows");
    if (x_.rows() != y_.size()) {
        throw DataError("dataset has " + std::to_string(x_.rows()) + " feature rows but " + std::to_string(y_.size()) +
                        " labels");
    }
    if (names_.size() != x_.cols()) throw DataError("dataset feature names do not match column count");
    for (std::size_t i = 0; i < y_.size(); ++i)
        if (y_[i] != 0 && y_[i] != 1) throw DataError("dataset label at row " + std::to_string(i) + " is not 0 or 1");
    if (!all_finite(x_)) throw DataError("dataset features contain non-finite values");
}

Matrix Dataset::y_matrix() const {
    Matrix m(y_.size(), 1);
    for (std::size_t i = 0; i < y_.size(); ++i) m(i, 0) = static_cast<double>(y_[i]);
    return m;
}

std::size_t Dataset::count(int label) const {
    return static_cast<std::size_t>(std::count(y_.begin(), y_.end(), label));
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
    Labels y;
    y.reserve(indices.size());
    for (std::size_t i : indices) y.push_back(y_.at(i));
    return Dataset(x_.select_rows(indices), std::move(y), names_);
}

Dataset Dataset::with_features(Matrix x, std::vector<std::string> names) const {
    return Dataset(std::move(x), y_, std::move(names));
}

RawTable parse_csv(const std::string& text, const DataSchema& schema) {
    schema.validate();
    std::size_t pos = 0;
    RawTable t;
    while (pos < text.size() && t.header.empty()) {
        auto rec = next_record(text, pos);
        if (!blank_record(rec)) t.header = std::move(rec);
    }
    if (t.header.empty()) throw DataError("csv: no header row");
    if (!t.header.empty() && t.header[0].starts_with("\xEF\xBB\xBF")) t.header[0].erase(0, 3);

    std::size_t line = 1;
    while (pos < text.size()) {
        ++line;
        auto rec = next_record(text, pos);
        if (blank_record(rec)) continue;
        if (rec.size() != t.header.size()) {
            throw DataError("csv: row " + std::to_string(line) + " has " + std::to_string(rec.size()) +
                            " cells, header has " + std::to_string(t.header.size()));
        }
        t.cells.push_back(std::move(rec));
    }
    if (!t.find_column(schema.target_column)) {
        throw DataError("schema: target column '" + schema.target_column + "' not found in header");
    }
    for (const auto& d : schema.drop_columns)
        if (!t.find_column(d)) throw DataError("schema: drop column '" + d + "' not found in header");
    return t;
}

RawTable load_csv(const std::filesystem::path& path, const DataSchema& schema) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open data file " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str(), schema);
}

Dataset clean(const RawTable& raw, const DataSchema& schema) {
    schema.validate();
    const auto target = raw.find_column(schema.target_column);
    if (!target) throw DataError("schema: target column '" + schema.target_column + "' not found in header");
    std::vector<bool> dropped(raw.header.size(), false);
    for (const auto& d : schema.drop_columns) {
        const auto c = raw.find_column(d);
        if (!c) throw DataError("schema: drop column '" + d + "' not found in header");
        dropped[*c] = true;
    }
    if (raw.rows() == 0) throw DataError("csv: no data rows");

    std::vector<std::size_t> feature_cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
        if (c == *target || dropped[c]) continue;
        feature_cols.push_back(c);
        names.emplace_back(trim(raw.header[c]));
    }

    // Row numbers in messages are 1-based file lines (header is line 1).
    const std::string positive(trim(schema.positive_label));
    std::optional<std::string> negative;
    Labels y(raw.rows());
    for (std::size_t r = 0; r < raw.rows(); ++r) {
        const std::string token(trim(raw.cells[r][*target]));
        if (token == positive) {
            y[r] = 1;
            continue;
        }
        if (token.empty() || (negative && token != *negative)) {
            throw DataError("row " + std::to_string(r + 2) + ": cannot map target value '" + token +
                            "' to a binary label");
        }
        negative = token;
        y[r] = 0;
    }

    Matrix x(raw.rows(), feature_cols.size());
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
        std::vector<std::optional<double>> col(raw.rows());
        std::vector<double> present;
        for (std::size_t r = 0; r < raw.rows(); ++r) {
            col[r] = parse_number(raw.cells[r][feature_cols[j]]);
            if (col[r]) present.push_back(*col[r]);
        }
        if (present.empty()) throw DataError("column '" + names[j] + "' has no numeric values");
        std::sort(present.begin(), present.end());
        const std::size_t m = present.size();
        const double median = m % 2 == 1 ? present[m / 2] : 0.5 * (present[m / 2 - 1] + present[m / 2]);
        for (std::size_t r = 0; r < raw.rows(); ++r) x(r, j) = col[r].value_or(median);
    }
    return Dataset(std::move(x), std::move(y), std::move(names));
}

Split stratified_split(const Dataset& ds, double val_fraction, Rng& rng) {
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw ArgumentError("val_fraction must lie in (0, 1)");
    std::vector<std::size_t> train_idx, val_idx;
    for (int label : {0, 1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < ds.rows(); ++i)
            if (ds.y()[i] == label) members.push_back(i);
        if (members.empty()) throw DataError("stratified_split: class " + std::to_string(label) + " has no samples");
        rng.shuffle(std::span<std::size_t>(members));
        const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(members.size())));
        val_idx.insert(val_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_val));
        train_idx.insert(train_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(n_val), members.end());
    }
    if (train_idx.empty() || val_idx.empty()) {
        throw DataError("stratified_split: too few rows for val_fraction " + std::to_string(val_fraction));
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
    return Split{ds.select(train_idx), ds.select(val_idx)};
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), std_(std::move(stddev)) {}

Standardizer Standardizer::fit(const Split& split) { return fit_training(split.train); }

Standardizer Standardizer::fit_training(const Dataset& train) {
    const std::size_t n = train.rows(), d = train.features();
    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    const auto& x = train.x();
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x(i, j);
        mean[j] = s / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean[j]) * (x(i, j) - mean[j]);
        sd[j] = std::sqrt(ss / static_cast<double>(n));
        // Constant (or numerically constant) columns map to all zeros.
        if (!(sd[j] > 1e-12 * std::max(1.0, std::abs(mean[j])))) sd[j] = 1.0;
    }
    return Standardizer(std::move(mean), std::move(sd));
}

Standardizer Standardizer::restore(std::vector<double> mean, std::vector<double> stddev) {
    if (mean.size() != stddev.size()) throw DataError("standardizer: mean/std length mismatch");
    for (double s : stddev)
        if (!(s > 0.0) || !std::isfinite(s)) throw DataError("standardizer: std values must be positive");
    return Standardizer(std::move(mean), std::move(stddev));
}

Matrix Standardizer::apply(const Matrix& x) const {
    if (x.cols() != mean_.size()) {
        throw ShapeError("standardizer fitted on " + std::to_string(mean_.size()) + " features, got " +
                         x.shape_string());
    }
    Matrix out = x;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = (r[j] - mean_[j]) / std_[j];
    }
    return out;
}

Dataset Standardizer::apply(const Dataset& ds) const { return ds.with_features(apply(ds.x()), ds.feature_names()); }

}  // namespace deeplda
