#include "deeplda/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>

#include "deeplda/error.hpp"

namespace deeplda {

GaussianPair GaussianPair::separated(std::size_t dim, double separation, double sigma) {
    if (dim == 0) throw ArgumentError("GaussianPair: dim must be >= 1");
    if (!(sigma > 0.0)) throw ArgumentError("GaussianPair: sigma must be > 0");
    const double step = 0.5 * separation / std::sqrt(static_cast<double>(dim));
    return GaussianPair{std::vector<double>(dim, -step), std::vector<double>(dim, step), sigma};
}

double GaussianPair::bayes_accuracy() const {
    double sq = 0.0;
    for (std::size_t j = 0; j < mean0.size(); ++j) sq += (mean1[j] - mean0[j]) * (mean1[j] - mean0[j]);
    const double z = std::sqrt(sq) / (2.0 * sigma);
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

Dataset sample_gaussian_pair(const GaussianPair& g, std::size_t rows, Rng& rng) {
    const std::size_t d = g.mean0.size();
    Matrix x(rows, d);
    Labels y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        y[i] = static_cast<int>(i % 2);
        const auto& mu = y[i] == 1 ? g.mean1 : g.mean0;
        for (std::size_t j = 0; j < d; ++j) x(i, j) = mu[j] + g.sigma * rng.next_normal();
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    return Dataset(std::move(x), std::move(y), std::move(names));
}

namespace {

enum class Kind { real, integer, flag };

struct Column {
    const char* header;  // as spelled in the public file, padding included
    Kind kind;
    double mean;
    double sd;
    double shift;  // positive-class shift in units of sd (flags: added probability)
};

// Shapes loosely follow the public table; only a handful of columns carry
// class signal, as in the real data.
constexpr Column kColumns[] = {
    {" Age (yrs)", Kind::integer, 31.0, 5.4, -0.3},
    {"Weight (Kg)", Kind::real, 59.6, 11.0, 0.3},
    {"Height(Cm) ", Kind::real, 156.5, 6.0, 0.0},
    {"BMI", Kind::real, 24.3, 4.0, 0.3},
    {"Blood Group", Kind::integer, 13.8, 1.8, 0.0},
    {"Pulse rate(bpm) ", Kind::integer, 73.0, 4.0, 0.0},
    {"RR (breaths/min)", Kind::integer, 19.2, 1.7, 0.0},
    {"Hb(g/dl)", Kind::real, 11.2, 0.9, 0.1},
    {"Cycle(R/I)", Kind::integer, 2.6, 0.9, 0.9},
    {"Cycle length(days)", Kind::integer, 5.0, 1.5, -0.4},
    {"Marraige Status (Yrs)", Kind::integer, 7.7, 4.8, -0.2},
    {"Pregnant(Y/N)", Kind::flag, 0.38, 0.0, 0.0},
    {"No. of aborptions", Kind::integer, 0.3, 0.7, 0.0},
    {"  I   beta-HCG(mIU/mL)", Kind::real, 664.0, 3348.0, 0.0},
    {"II    beta-HCG(mIU/mL)", Kind::real, 238.0, 1603.0, 0.0},
    {"FSH(mIU/mL)", Kind::real, 5.0, 2.5, 0.0},
    {"LH(mIU/mL)", Kind::real, 2.7, 2.0, 0.1},
    {"FSH/LH", Kind::real, 2.5, 2.0, 0.0},
    {"Hip(inch)", Kind::integer, 37.9, 3.9, 0.3},
    {"Waist(inch)", Kind::integer, 33.8, 3.6, 0.3},
    {"Waist:Hip Ratio", Kind::real, 0.89, 0.05, 0.0},
    {"TSH (ng/dL)", Kind::real, 2.9, 3.7, 0.0},
    {"AMH(ng/mL)", Kind::real, 5.6, 3.5, 0.9},
    {"PRL(ng/mL)", Kind::real, 24.3, 14.9, 0.0},
    {"Vit D3 (ng/mL)", Kind::real, 49.9, 30.0, 0.0},
    {"PRG(ng/mL)", Kind::real, 0.6, 0.3, 0.0},
    {"RBS(mg/dl)", Kind::real, 99.8, 18.5, 0.0},
    {"Weight gain(Y/N)", Kind::flag, 0.23, 0.0, 0.45},
    {"hair growth(Y/N)", Kind::flag, 0.12, 0.0, 0.45},
    {"Skin darkening (Y/N)", Kind::flag, 0.15, 0.0, 0.45},
    {"Hair loss(Y/N)", Kind::flag, 0.38, 0.0, 0.2},
    {"Pimples(Y/N)", Kind::flag, 0.40, 0.0, 0.25},
    {"Fast food (Y/N)", Kind::flag, 0.37, 0.0, 0.4},
    {"Reg.Exercise(Y/N)", Kind::flag, 0.24, 0.0, 0.05},
    {"BP _Systolic (mmHg)", Kind::integer, 114.7, 7.4, 0.0},
    {"BP _Diastolic (mmHg)", Kind::integer, 76.9, 5.6, 0.0},
    {"Follicle No. (L)", Kind::integer, 4.5, 2.8, 1.7},
    {"Follicle No. (R)", Kind::integer, 5.0, 3.0, 1.8},
    {"Avg. F size (L) (mm)", Kind::real, 15.0, 3.6, 0.1},
    {"Avg. F size (R) (mm)", Kind::real, 15.4, 3.3, 0.1},
    {"Endometrium (mm)", Kind::real, 8.5, 2.2, 0.1},
};
static_assert(std::size(kColumns) == 41);

std::string trimmed(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

const std::vector<std::string>& pcos_feature_columns() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& c : kColumns) out.push_back(trimmed(c.header));
        return out;
    }();
    return names;
}

std::string synthetic_pcos_csv(std::size_t rows, Rng& rng) {
    std::string out = "Sl. No,Patient File No.,PCOS (Y/N)";
    for (const auto& c : kColumns) {
        out += ',';
        out += c.header;
    }
    out += ",Unnamed: 44\n";
    char buf[64];
    for (std::size_t r = 0; r < rows; ++r) {
        // 177 of the 541 patients in the public table are positive.
        const bool positive = rng.next_unit() < 177.0 / 541.0;
        out += std::to_string(r + 1) + ',' + std::to_string(10000 + r + 1) + ',' + (positive ? "1" : "0");
        for (std::size_t j = 0; j < std::size(kColumns); ++j) {
            const auto& c = kColumns[j];
            out += ',';
            // Sparse gaps, mimicking the blank and garbled cells of the public file.
            if ((r * 41 + j) % 1297 == 17) continue;
            if ((r * 41 + j) % 2311 == 5) {
                out += "n/a";
                continue;
            }
            if (c.kind == Kind::flag) {
                const double p = c.mean + (positive ? c.shift : 0.0);
                out += rng.next_unit() < p ? "1" : "0";
                continue;
            }
            double v = c.mean + c.sd * (rng.next_normal() + (positive ? c.shift : 0.0));
            if (c.kind == Kind::integer) {
                v = std::max(0.0, std::round(v));
                std::snprintf(buf, sizeof buf, "%.0f", v);
            } else {
                std::snprintf(buf, sizeof buf, "%.2f", std::max(0.0, v));
            }
            out += buf;
        }
        out += ",\n";
    }
    return out;
}

}  // namespace deeplda
