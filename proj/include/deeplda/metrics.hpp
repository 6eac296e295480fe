#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace deeplda {

/// 2x2 contingency counts; the positive class is label 1.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual);

// Degenerate denominators yield 0 rather than NaN; see MetricsReport::warnings.
double accuracy(const ConfusionMatrix& cm) noexcept;
double precision(const ConfusionMatrix& cm) noexcept;
double recall(const ConfusionMatrix& cm) noexcept;
double f_score(double precision, double recall) noexcept;
double f_score(const ConfusionMatrix& cm) noexcept;

struct MetricsReport {
    ConfusionMatrix cm;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    std::vector<std::string> warnings;

    static MetricsReport from(const ConfusionMatrix& cm);

    /// Aligned human-readable block: the 2x2 matrix then one line per metric.
    std::string to_text() const;
    /// JSON object with counts, metrics and warnings at full precision.
    std::string to_json() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double accuracy = 0.0;
    double loss = 0.0;
    double val_accuracy = 0.0;
    double val_loss = 0.0;

    bool operator==(const EpochRecord&) const = default;
};

/// Per-epoch curves; epochs are numbered 1..E contiguously.
struct TrainingHistory {
    std::vector<EpochRecord> epochs;

    std::size_t size() const noexcept { return epochs.size(); }
    bool empty() const noexcept { return epochs.empty(); }
    void append(double accuracy, double loss, double val_accuracy, double val_loss);
};

inline constexpr const char* kCurveCsvHeader = "Epochs,accuracy,loss,val_accuracy,val_loss";

/// Header plus one row per epoch, floats with 6 significant digits.
std::string history_to_csv_text(const TrainingHistory& h);
void history_to_csv(const TrainingHistory& h, const std::filesystem::path& path);
TrainingHistory history_from_csv_text(const std::string& text);

}  // namespace deeplda
