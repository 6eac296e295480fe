#include "deeplda/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "deeplda/error.hpp"

namespace deeplda {

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size()) {
        throw ShapeError("confusion: " + std::to_string(predicted.size()) + " predictions vs " +
                         std::to_string(actual.size()) + " labels");
    }
    if (predicted.empty()) throw ArgumentError("confusion: no samples");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const int p = predicted[i], a = actual[i];
        if ((p != 0 && p != 1) || (a != 0 && a != 1)) {
            throw ArgumentError("confusion: non-binary entry at index " + std::to_string(i));
        }
        if (p == 1 && a == 1) ++cm.tp;
        else if (p == 1) ++cm.fp;
        else if (a == 1) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

namespace {
double ratio(std::size_t num, std::size_t den) noexcept {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double accuracy(const ConfusionMatrix& cm) noexcept { return ratio(cm.tp + cm.tn, cm.total()); }
double precision(const ConfusionMatrix& cm) noexcept { return ratio(cm.tp, cm.tp + cm.fp); }
double recall(const ConfusionMatrix& cm) noexcept { return ratio(cm.tp, cm.tp + cm.fn); }

double f_score(double p, double r) noexcept { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }
double f_score(const ConfusionMatrix& cm) noexcept { return f_score(precision(cm), recall(cm)); }

MetricsReport MetricsReport::from(const ConfusionMatrix& cm) {
    MetricsReport r;
    r.cm = cm;
    r.accuracy = deeplda::accuracy(cm);
    r.precision = deeplda::precision(cm);
    r.recall = deeplda::recall(cm);
    r.f_score = deeplda::f_score(r.precision, r.recall);
    if (cm.total() == 0) r.warnings.emplace_back("no samples: accuracy set to 0");
    if (cm.tp + cm.fp == 0) r.warnings.emplace_back("no predicted positives: precision set to 0");
    if (cm.tp + cm.fn == 0) r.warnings.emplace_back("no actual positives: recall set to 0");
    if (r.precision + r.recall == 0.0) r.warnings.emplace_back("precision + recall = 0: f_score set to 0");
    return r;
}

std::string MetricsReport::to_text() const {
    char buf[512];
    std::ostringstream os;
    std::snprintf(buf, sizeof buf,
                  "confusion matrix (rows: actual, cols: predicted)\n"
                  "                predicted 1   predicted 0\n"
                  "  actual 1     %12zu  %12zu\n"
                  "  actual 0     %12zu  %12zu\n",
                  cm.tp, cm.fn, cm.fp, cm.tn);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "accuracy   %.6f\nprecision  %.6f\nrecall     %.6f\nf_score    %.6f\n", accuracy, precision,
                  recall, f_score);
    os << buf;
    for (const auto& w : warnings) os << "warning: " << w << '\n';
    return os.str();
}

std::string MetricsReport::to_json() const {
    nlohmann::ordered_json j;
    j["tp"] = cm.tp;
    j["fp"] = cm.fp;
    j["fn"] = cm.fn;
    j["tn"] = cm.tn;
    j["accuracy"] = accuracy;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f_score"] = f_score;
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

void TrainingHistory::append(double accuracy, double loss, double val_accuracy, double val_loss) {
    epochs.push_back(EpochRecord{epochs.size() + 1, accuracy, loss, val_accuracy, val_loss});
}

std::string history_to_csv_text(const TrainingHistory& h) {
    std::string out = kCurveCsvHeader;
    out += '\n';
    char buf[256];
    for (const auto& e : h.epochs) {
        std::snprintf(buf, sizeof buf, "%zu,%.6g,%.6g,%.6g,%.6g\n", e.epoch, e.accuracy, e.loss, e.val_accuracy,
                      e.val_loss);
        out += buf;
    }
    return out;
}

void history_to_csv(const TrainingHistory& h, const std::filesystem::path& path) {
    if (h.empty()) throw ArgumentError("history_to_csv: history is empty");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << history_to_csv_text(h);
    if (!f) throw DataError("failed writing " + path.string());
}

TrainingHistory history_from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCurveCsvHeader) {
        throw DataError("curve csv: unexpected header '" + line + "'");
    }
    TrainingHistory h;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EpochRecord e;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf,%lf", &e.epoch, &e.accuracy, &e.loss, &e.val_accuracy,
                        &e.val_loss) != 5) {
            throw DataError("curve csv: malformed row '" + line + "'");
        }
        if (e.epoch != h.size() + 1) throw DataError("curve csv: epochs are not contiguous");
        h.epochs.push_back(e);
    }
    return h;
}

}  // namespace deeplda
