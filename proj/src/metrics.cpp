#include "phishgan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace phishgan {

void RocCurve::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("roc: cannot open " + path);
    out << "threshold,fpr,tpr\n";
    char buf[128];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.threshold, p.fpr, p.tpr);
        out << buf;
    }
}

double mse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("mse: shape mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

namespace {

constexpr int kSsimWindow = 7;
constexpr double kSsimSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

const std::vector<double>& ssim_weights() {
    static const std::vector<double> w = [] {
        std::vector<double> out(kSsimWindow * kSsimWindow);
        const int r = kSsimWindow / 2;
        double total = 0.0;
        for (int i = -r; i <= r; ++i)
            for (int j = -r; j <= r; ++j) {
                const double v = std::exp(-0.5 * (i * i + j * j) / (kSsimSigma * kSsimSigma));
                out[static_cast<size_t>((i + r) * kSsimWindow + j + r)] = v;
                total += v;
            }
        for (auto& v : out) v /= total;
        return out;
    }();
    return w;
}

}  // namespace

double ssim(const std::vector<double>& a, const std::vector<double>& b, int rows, int cols) {
    if (a.size() != b.size() ||
        a.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
        throw std::invalid_argument("ssim: shape mismatch");
    if (rows < kSsimWindow || cols < kSsimWindow)
        throw std::invalid_argument("ssim: matrix smaller than the 7x7 window");
    const auto& w = ssim_weights();
    const int r = kSsimWindow / 2;
    double total = 0.0;
    long windows = 0;
    for (int i = r; i < rows - r; ++i)
        for (int j = r; j < cols - r; ++j) {
            double mu_a = 0.0, mu_b = 0.0;
            for (int di = -r; di <= r; ++di)
                for (int dj = -r; dj <= r; ++dj) {
                    const double wv = w[static_cast<size_t>((di + r) * kSsimWindow + dj + r)];
                    mu_a += wv * a[static_cast<size_t>(i + di) * cols + (j + dj)];
                    mu_b += wv * b[static_cast<size_t>(i + di) * cols + (j + dj)];
                }
            double var_a = 0.0, var_b = 0.0, cov = 0.0;
            for (int di = -r; di <= r; ++di)
                for (int dj = -r; dj <= r; ++dj) {
                    const double wv = w[static_cast<size_t>((di + r) * kSsimWindow + dj + r)];
                    const double da = a[static_cast<size_t>(i + di) * cols + (j + dj)] - mu_a;
                    const double db = b[static_cast<size_t>(i + di) * cols + (j + dj)] - mu_b;
                    var_a += wv * da * da;
                    var_b += wv * db * db;
                    cov += wv * da * db;
                }
            total += ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
                     ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
            ++windows;
        }
    return total / static_cast<double>(windows);
}

double nrmse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("nrmse: shape mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        num += d * d;
        den += a[i] * a[i];
    }
    if (den == 0.0) throw std::invalid_argument("nrmse: reference is all-zero");
    return std::sqrt(num) / std::sqrt(den);
}

ClassificationReport report_from_counts(const ConfusionCounts& c) {
    ClassificationReport r;
    r.counts = c;
    const long n = c.tp + c.fp + c.tn + c.fn;
    auto ratio = [&r](long num, long den) {
        if (den == 0) {
            r.divide_by_zero = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    r.accuracy = ratio(c.tp + c.tn, n);
    r.sensitivity = ratio(c.tp, c.tp + c.fn);
    r.precision = ratio(c.tp, c.tp + c.fp);
    r.specificity = ratio(c.tn, c.tn + c.fp);
    if (r.precision + r.sensitivity == 0.0) {
        r.f1 = 0.0;
        r.divide_by_zero = true;
    } else {
        r.f1 = 2.0 * r.precision * r.sensitivity / (r.precision + r.sensitivity);
    }
    return r;
}

ClassificationReport classification_report(const std::vector<int>& predictions,
                                           const std::vector<int>& labels) {
    if (predictions.size() != labels.size() || predictions.empty())
        throw std::invalid_argument("classification_report: empty or mismatched input");
    ConfusionCounts c;
    for (size_t i = 0; i < predictions.size(); ++i) {
        const bool pos = predictions[i] == 1;
        const bool truth = labels[i] == 1;
        if (pos && truth)
            ++c.tp;
        else if (pos && !truth)
            ++c.fp;
        else if (!pos && truth)
            ++c.fn;
        else
            ++c.tn;
    }
    return report_from_counts(c);
}

std::pair<RocCurve, double> roc_auc(const std::vector<double>& scores,
                                    const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("roc_auc: empty or mismatched input");
    long pos = 0, neg = 0;
    for (int y : labels) (y == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("roc_auc: both classes must be present");

    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return scores[i] > scores[j]; });

    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    double auc = 0.0;
    long tp = 0, fp = 0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        const double thr = scores[order[i]];
        // Consume all samples tied at this score before emitting a point.
        while (i < order.size() && scores[order[i]] == thr) {
            (labels[order[i]] == 1 ? tp : fp)++;
            ++i;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
        const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        curve.points.push_back({thr, fpr, tpr});
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    return {std::move(curve), auc};
}

}  // namespace phishgan
