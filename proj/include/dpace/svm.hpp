#pragma once

// Soft-margin binary SVM with an RBF kernel, trained by SMO with
// maximal-violating-pair working-set selection. Features are z-scored with
// statistics frozen at training time.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

#include "dpace/common.hpp"

namespace dpace {

struct SvmModel {
    double gamma = 0.125;
    double C = 10.0;
    double bias = 0.0;
    std::vector<std::vector<double>> support_vectors;  // normalized
    std::vector<double> coef;                          // alpha_i * y_i
    std::vector<double> norm_mean;
    std::vector<double> norm_scale;

    std::size_t dim() const { return norm_mean.size(); }

    std::vector<double> normalize(std::span<const double> x) const {
        if (x.size() != dim()) throw DataError("svm: feature dimension mismatch");
        std::vector<double> z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - norm_mean[i]) / norm_scale[i];
        return z;
    }

    double kernel(std::span<const double> a, std::span<const double> b) const {
        double d2 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
        return std::exp(-gamma * d2);
    }

    double decision(std::span<const double> x) const {
        const std::vector<double> z = normalize(x);
        double f = bias;
        for (std::size_t i = 0; i < support_vectors.size(); ++i)
            f += coef[i] * kernel(z, support_vectors[i]);
        return f;
    }
};

namespace svmdetail {

inline double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-gamma * d2);
}

}  // namespace svmdetail

inline SvmModel svm_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          double gamma, double C, double tol = 1e-5, long max_iter = 2000000) {
    if (x.size() != y.size() || x.empty()) throw DataError("svm: bad training set");
    if (gamma <= 0.0 || C <= 0.0) throw DataError("svm: gamma and C must be > 0");
    const std::size_t n = x.size();
    const std::size_t d = x.front().size();
    bool has_pos = false, has_neg = false;
    for (int yi : y) {
        if (yi == 1) has_pos = true;
        else if (yi == -1) has_neg = true;
        else throw DataError("svm: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw DataError("svm: both classes required");

    SvmModel model;
    model.gamma = gamma;
    model.C = C;
    model.norm_mean.assign(d, 0.0);
    model.norm_scale.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (const auto& xi : x) m += xi[j];
        m /= static_cast<double>(n);
        double v = 0.0;
        for (const auto& xi : x) v += (xi[j] - m) * (xi[j] - m);
        v = std::sqrt(v / static_cast<double>(n));
        model.norm_mean[j] = m;
        model.norm_scale[j] = (v > 1e-12) ? v : 1.0;
    }
    std::vector<std::vector<double>> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = model.normalize(x[i]);

    // full kernel matrix; training sets here are small
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double k = svmdetail::rbf(z[i], z[j], gamma);
            q[i * n + j] = k;
            q[j * n + i] = k;
        }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of the dual objective wrt alpha

    auto select = [&]() -> std::pair<long, long> {
        // i: max -y_i grad_i over alpha_i able to increase along y_i
        double gmax = -1e300, gmin = 1e300;
        long pi = -1, pj = -1;
        for (std::size_t t = 0; t < n; ++t) {
            const double yg = -y[t] * grad[t];
            const bool up = (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0);
            const bool dn = (y[t] == 1 && alpha[t] > 0) || (y[t] == -1 && alpha[t] < C);
            if (up && yg > gmax) { gmax = yg; pi = static_cast<long>(t); }
            if (dn && yg < gmin) { gmin = yg; pj = static_cast<long>(t); }
        }
        if (pi < 0 || pj < 0 || gmax - gmin < tol) return {-1, -1};
        return {pi, pj};
    };

    for (long iter = 0; iter < max_iter; ++iter) {
        auto [i, j] = select();
        if (i < 0) break;
        const std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
        const double kii = q[ii * n + ii], kjj = q[jj * n + jj], kij = q[ii * n + jj];
        double eta = kii + kjj - 2.0 * kij;
        if (eta <= 1e-12) eta = 1e-12;
        const double delta = (-y[ii] * grad[ii] + y[jj] * grad[jj]) / eta;

        // move along (y_i, -y_j) direction, clipped to the box
        double step = delta;
        if (y[ii] == 1) step = std::min(step, C - alpha[ii]);
        else step = std::min(step, alpha[ii]);
        if (y[jj] == 1) step = std::min(step, alpha[jj]);
        else step = std::min(step, C - alpha[jj]);
        if (step <= 0.0) break;

        alpha[ii] = std::clamp(alpha[ii] + y[ii] * step, 0.0, C);
        alpha[jj] = std::clamp(alpha[jj] - y[jj] * step, 0.0, C);
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += step * y[t] * (q[ii * n + t] - q[jj * n + t]);
    }

    // bias from the KKT midpoint of the violating-pair bounds
    double gmax = -1e300, gmin = 1e300, free_sum = 0.0;
    int free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = -y[t] * grad[t];
        const bool up = (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0);
        const bool dn = (y[t] == 1 && alpha[t] > 0) || (y[t] == -1 && alpha[t] < C);
        if (up) gmax = std::max(gmax, yg);
        if (dn) gmin = std::min(gmin, yg);
        if (alpha[t] > 1e-12 && alpha[t] < C - 1e-12) {
            free_sum += yg;
            ++free_count;
        }
    }
    model.bias = free_count > 0 ? free_sum / free_count : (gmax + gmin) / 2.0;

    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 1e-12) {
            model.support_vectors.push_back(z[t]);
            model.coef.push_back(alpha[t] * y[t]);
        }
    }
    return model;
}

inline void save_model(std::ostream& os, const SvmModel& m) {
    os << std::setprecision(17);
    os << "dpace_svm 1\n";
    os << "gamma " << m.gamma << "\nC " << m.C << "\nbias " << m.bias << "\ndim " << m.dim() << "\n";
    os << "mean";
    for (double v : m.norm_mean) os << ' ' << v;
    os << "\nscale";
    for (double v : m.norm_scale) os << ' ' << v;
    os << "\nnsv " << m.support_vectors.size() << "\n";
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
        os << m.coef[i];
        for (double v : m.support_vectors[i]) os << ' ' << v;
        os << '\n';
    }
}

inline SvmModel load_model(std::istream& is) {
    SvmModel m;
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "dpace_svm" || version != 1) throw DataError("svm: not a model file");
    std::size_t dim = 0, nsv = 0;
    auto expect = [&](const char* key) {
        is >> tag;
        if (tag != key) throw DataError(std::string("svm: model file missing '") + key + "'");
    };
    expect("gamma");
    is >> m.gamma;
    expect("C");
    is >> m.C;
    expect("bias");
    is >> m.bias;
    expect("dim");
    is >> dim;
    expect("mean");
    m.norm_mean.resize(dim);
    for (double& v : m.norm_mean) is >> v;
    expect("scale");
    m.norm_scale.resize(dim);
    for (double& v : m.norm_scale) is >> v;
    expect("nsv");
    is >> nsv;
    m.coef.resize(nsv);
    m.support_vectors.assign(nsv, std::vector<double>(dim));
    for (std::size_t i = 0; i < nsv; ++i) {
        is >> m.coef[i];
        for (double& v : m.support_vectors[i]) is >> v;
    }
    if (!is) throw DataError("svm: truncated model file");
    return m;
}

}  // namespace dpace
