#pragma once

#include <string>
#include <vector>

namespace phishgan {

struct ConfusionCounts {
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

struct ClassificationReport {
    ConfusionCounts counts;
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double precision = 0.0;
    double specificity = 0.0;
    double f1 = 0.0;
    bool divide_by_zero = false;  // set when any denominator was zero
};

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;
    void write_csv(const std::string& path) const;
};

struct SimilarityReport {
    double mse = 0.0;
    double ssim = 0.0;
    double nrmse = 0.0;
};

// Matrices are flat row-major with explicit dimensions.
double mse(const std::vector<double>& a, const std::vector<double>& b);

// Mean local SSIM over sliding 7x7 windows, Gaussian weighted (sigma 1.5),
// dynamic range 1 (C1 = 0.01^2, C2 = 0.03^2).
double ssim(const std::vector<double>& a, const std::vector<double>& b, int rows, int cols);

// ||a - b||_2 / ||a||_2; the first argument is the reference.
double nrmse(const std::vector<double>& a, const std::vector<double>& b);

// Binary classification metrics; positive class = 1. Zero denominators
// produce 0 and set the divide_by_zero flag.
ClassificationReport classification_report(const std::vector<int>& predictions,
                                           const std::vector<int>& labels);
ClassificationReport report_from_counts(const ConfusionCounts& c);

// Threshold sweep over unique scores plus AUC by trapezoidal integration
// (equal to the Mann-Whitney statistic). Higher score = more positive.
std::pair<RocCurve, double> roc_auc(const std::vector<double>& scores,
                                    const std::vector<int>& labels);

}  // namespace phishgan
