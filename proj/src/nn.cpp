#include "phishgan/nn.hpp"

#include <cblas.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "phishgan/kernels.hpp"

namespace phishgan {

using detail::accumulate_grad;
using detail::make_node;

std::string layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::Conv1d: return "conv1d";
        case LayerKind::Conv1dTransposed: return "conv1d-transposed";
        case LayerKind::Dense: return "dense";
        case LayerKind::BatchNorm: return "batchnorm";
        case LayerKind::LeakyRelu: return "leaky-relu";
        case LayerKind::Sigmoid: return "sigmoid";
        case LayerKind::Softmax: return "softmax";
        case LayerKind::Concat: return "concat";
        case LayerKind::Flatten: return "flatten";
    }
    return "?";
}

int layer_out_len(const LayerSpec& spec, int l_in) {
    switch (spec.kind) {
        case LayerKind::Conv1d:
            return kernels::conv_out_len(l_in, spec.kernel, spec.stride, spec.pad);
        case LayerKind::Conv1dTransposed:
            return kernels::tconv_out_len(l_in, spec.kernel, spec.stride, spec.pad,
                                          spec.output_pad);
        default:
            return l_in;
    }
}

namespace {

void require_3d(const Tensor& x, const char* op) {
    if (x.shape().size() != 3)
        throw std::invalid_argument(std::string(op) + ": expected [batch, channels, length]");
}

}  // namespace

Tensor conv1d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad) {
    require_3d(x, "conv1d");
    if (w.shape().size() != 3)
        throw std::invalid_argument("conv1d: weight must be [c_out, c_in, k]");
    kernels::ConvGeom g;
    g.batch = x.shape()[0];
    g.c_in = x.shape()[1];
    g.l_in = x.shape()[2];
    g.c_out = w.shape()[0];
    g.k = w.shape()[2];
    g.stride = stride;
    g.pad = pad;
    g.l_out = kernels::conv_out_len(g.l_in, g.k, g.stride, g.pad);
    if (w.shape()[1] != g.c_in)
        throw std::invalid_argument(
            "conv1d: input has " + std::to_string(g.c_in) + " channels but weight expects " +
            std::to_string(w.shape()[1]));
    if (static_cast<int>(b.size()) != g.c_out)
        throw std::invalid_argument("conv1d: bias size mismatch");

    std::vector<double> y(static_cast<size_t>(g.batch) * g.c_out * g.l_out);
    kernels::conv_forward(x.data().data(), w.data().data(), b.data().data(), y.data(), g);
    auto node = make_node({g.batch, g.c_out, g.l_out}, std::move(y), false);
    if (grad_enabled() && (x.requires_grad() || w.requires_grad() || b.requires_grad())) {
        node->requires_grad = true;
        node->parents = {x.node(), w.node(), b.node()};
        auto xp = x.node(), wp = w.node(), bp = b.node();
        node->backprop = [xp, wp, bp, g](detail::Node& self) {
            if (xp->requires_grad) {
                std::vector<double> dx(xp->value.size());
                kernels::conv_backward_data(self.grad.data(), wp->value.data(), dx.data(), g);
                accumulate_grad(*xp, dx);
            }
            if (wp->requires_grad || bp->requires_grad) {
                std::vector<double> dw(wp->value.size());
                std::vector<double> db(bp->value.size());
                kernels::conv_backward_filter(self.grad.data(), xp->value.data(), dw.data(),
                                              db.data(), g);
                accumulate_grad(*wp, dw);
                accumulate_grad(*bp, db);
            }
        };
    }
    return Tensor(node);
}

// Transposed convolution is the data-gradient of an ordinary convolution
// whose forward direction maps l_out back to l_in.
Tensor conv1d_transposed(const Tensor& x, const Tensor& w, const Tensor& b, int stride,
                         int pad, int output_pad) {
    require_3d(x, "conv1d-transposed");
    if (w.shape().size() != 3)
        throw std::invalid_argument("conv1d-transposed: weight must be [c_in, c_out, k]");
    const int c_in = x.shape()[1];
    const int c_out = w.shape()[1];
    const int k = w.shape()[2];
    const int l_in = x.shape()[2];
    const int l_out = kernels::tconv_out_len(l_in, k, stride, pad, output_pad);
    if (w.shape()[0] != c_in)
        throw std::invalid_argument(
            "conv1d-transposed: input has " + std::to_string(c_in) +
            " channels but weight expects " + std::to_string(w.shape()[0]));
    if (static_cast<int>(b.size()) != c_out)
        throw std::invalid_argument("conv1d-transposed: bias size mismatch");
    if (kernels::conv_out_len(l_out, k, stride, pad) != l_in)
        throw std::invalid_argument("conv1d-transposed: geometry not invertible");

    // Equivalent forward conv: [B, c_out, l_out] -> [B, c_in, l_in].
    kernels::ConvGeom g;
    g.batch = x.shape()[0];
    g.c_in = c_out;
    g.c_out = c_in;
    g.k = k;
    g.stride = stride;
    g.pad = pad;
    g.l_in = l_out;
    g.l_out = l_in;

    std::vector<double> y(static_cast<size_t>(g.batch) * c_out * l_out);
    kernels::conv_backward_data(x.data().data(), w.data().data(), y.data(), g);
    const auto& bias = b.data();
    for (int bb = 0; bb < g.batch; ++bb)
        for (int c = 0; c < c_out; ++c) {
            double* row = y.data() + (static_cast<long>(bb) * c_out + c) * l_out;
            for (int o = 0; o < l_out; ++o) row[o] += bias[c];
        }
    auto node = make_node({g.batch, c_out, l_out}, std::move(y), false);
    if (grad_enabled() && (x.requires_grad() || w.requires_grad() || b.requires_grad())) {
        node->requires_grad = true;
        node->parents = {x.node(), w.node(), b.node()};
        auto xp = x.node(), wp = w.node(), bp = b.node();
        const int n_out_ch = c_out, len_out = l_out;
        node->backprop = [xp, wp, bp, g, n_out_ch, len_out](detail::Node& self) {
            if (xp->requires_grad) {
                std::vector<double> dx(xp->value.size());
                kernels::conv_forward(self.grad.data(), wp->value.data(), nullptr, dx.data(),
                                      g);
                accumulate_grad(*xp, dx);
            }
            if (wp->requires_grad) {
                std::vector<double> dw(wp->value.size());
                kernels::conv_backward_filter(xp->value.data(), self.grad.data(), dw.data(),
                                              nullptr, g);
                accumulate_grad(*wp, dw);
            }
            if (bp->requires_grad) {
                std::vector<double> db(bp->value.size(), 0.0);
                for (int bb = 0; bb < g.batch; ++bb)
                    for (int c = 0; c < n_out_ch; ++c) {
                        const double* row =
                            self.grad.data() + (static_cast<long>(bb) * n_out_ch + c) * len_out;
                        for (int o = 0; o < len_out; ++o) db[c] += row[o];
                    }
                accumulate_grad(*bp, db);
            }
        };
    }
    return Tensor(node);
}

Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b) {
    if (x.shape().size() != 2) throw std::invalid_argument("dense: expected [batch, features]");
    if (w.shape().size() != 2) throw std::invalid_argument("dense: weight must be [out, in]");
    const int batch = x.shape()[0], n_in = x.shape()[1], n_out = w.shape()[0];
    if (w.shape()[1] != n_in)
        throw std::invalid_argument("dense: input has " + std::to_string(n_in) +
                                    " features but weight expects " +
                                    std::to_string(w.shape()[1]));
    if (static_cast<int>(b.size()) != n_out)
        throw std::invalid_argument("dense: bias size mismatch");

    std::vector<double> y(static_cast<size_t>(batch) * n_out);
    // y = x * w^T + b
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, batch, n_out, n_in, 1.0,
                x.data().data(), n_in, w.data().data(), n_in, 0.0, y.data(), n_out);
    for (int r = 0; r < batch; ++r)
        for (int c = 0; c < n_out; ++c) y[static_cast<long>(r) * n_out + c] += b.data()[c];
    auto node = make_node({batch, n_out}, std::move(y), false);
    if (grad_enabled() && (x.requires_grad() || w.requires_grad() || b.requires_grad())) {
        node->requires_grad = true;
        node->parents = {x.node(), w.node(), b.node()};
        auto xp = x.node(), wp = w.node(), bp = b.node();
        node->backprop = [xp, wp, bp, batch, n_in, n_out](detail::Node& self) {
            if (xp->requires_grad) {
                std::vector<double> dx(xp->value.size());
                cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, batch, n_in, n_out,
                            1.0, self.grad.data(), n_out, wp->value.data(), n_in, 0.0,
                            dx.data(), n_in);
                accumulate_grad(*xp, dx);
            }
            if (wp->requires_grad) {
                std::vector<double> dw(wp->value.size());
                cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, n_out, n_in, batch, 1.0,
                            self.grad.data(), n_out, xp->value.data(), n_in, 0.0, dw.data(),
                            n_in);
                accumulate_grad(*wp, dw);
            }
            if (bp->requires_grad) {
                std::vector<double> db(static_cast<size_t>(n_out), 0.0);
                for (int r = 0; r < batch; ++r)
                    for (int c = 0; c < n_out; ++c)
                        db[c] += self.grad[static_cast<long>(r) * n_out + c];
                accumulate_grad(*bp, db);
            }
        };
    }
    return Tensor(node);
}

Tensor batchnorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 BatchNormStats& stats, bool training, double momentum, double eps,
                 bool update_stats) {
    require_3d(x, "batchnorm");
    const int batch = x.shape()[0], ch = x.shape()[1], len = x.shape()[2];
    if (static_cast<int>(gamma.size()) != ch || static_cast<int>(beta.size()) != ch)
        throw std::invalid_argument("batchnorm: scale/shift size mismatch");
    if (static_cast<int>(stats.mean.size()) != ch || static_cast<int>(stats.var.size()) != ch)
        throw std::invalid_argument("batchnorm: running stats size mismatch");

    const long n = static_cast<long>(batch) * len;
    std::vector<double> mu(ch), var(ch);
    if (training) {
#pragma omp parallel for
        for (int c = 0; c < ch; ++c) {
            double s = 0.0;
            for (int bb = 0; bb < batch; ++bb) {
                const double* row = x.data().data() + (static_cast<long>(bb) * ch + c) * len;
                for (int i = 0; i < len; ++i) s += row[i];
            }
            mu[c] = s / static_cast<double>(n);
            double v = 0.0;
            for (int bb = 0; bb < batch; ++bb) {
                const double* row = x.data().data() + (static_cast<long>(bb) * ch + c) * len;
                for (int i = 0; i < len; ++i) {
                    const double d = row[i] - mu[c];
                    v += d * d;
                }
            }
            var[c] = v / static_cast<double>(n);
        }
        if (update_stats) {
            for (int c = 0; c < ch; ++c) {
                stats.mean[c] = momentum * stats.mean[c] + (1.0 - momentum) * mu[c];
                stats.var[c] = momentum * stats.var[c] + (1.0 - momentum) * var[c];
            }
        }
    } else {
        mu = stats.mean;
        var = stats.var;
    }

    std::vector<double> inv_sigma(ch);
    for (int c = 0; c < ch; ++c) inv_sigma[c] = 1.0 / std::sqrt(var[c] + eps);

    std::vector<double> y(x.data().size());
    std::vector<double> xhat(x.data().size());
#pragma omp parallel for
    for (int c = 0; c < ch; ++c)
        for (int bb = 0; bb < batch; ++bb) {
            const long off = (static_cast<long>(bb) * ch + c) * len;
            for (int i = 0; i < len; ++i) {
                const double h = (x.data()[off + i] - mu[c]) * inv_sigma[c];
                xhat[off + i] = h;
                y[off + i] = gamma.data()[c] * h + beta.data()[c];
            }
        }

    auto node = make_node(x.shape(), std::move(y), false);
    if (grad_enabled() && (x.requires_grad() || gamma.requires_grad() || beta.requires_grad())) {
        node->requires_grad = true;
        node->parents = {x.node(), gamma.node(), beta.node()};
        auto xp = x.node(), gp = gamma.node(), bp = beta.node();
        auto xh = std::make_shared<std::vector<double>>(std::move(xhat));
        auto isig = std::make_shared<std::vector<double>>(std::move(inv_sigma));
        node->backprop = [xp, gp, bp, xh, isig, batch, ch, len, n,
                          training](detail::Node& self) {
            std::vector<double> dgamma(static_cast<size_t>(ch), 0.0);
            std::vector<double> dbeta(static_cast<size_t>(ch), 0.0);
            for (int c = 0; c < ch; ++c)
                for (int bb = 0; bb < batch; ++bb) {
                    const long off = (static_cast<long>(bb) * ch + c) * len;
                    for (int i = 0; i < len; ++i) {
                        dgamma[c] += self.grad[off + i] * (*xh)[off + i];
                        dbeta[c] += self.grad[off + i];
                    }
                }
            accumulate_grad(*gp, dgamma);
            accumulate_grad(*bp, dbeta);
            if (!xp->requires_grad) return;
            std::vector<double> dx(xp->value.size());
            if (!training) {
                // Running stats are constants in inference mode.
#pragma omp parallel for
                for (int c = 0; c < ch; ++c)
                    for (int bb = 0; bb < batch; ++bb) {
                        const long off = (static_cast<long>(bb) * ch + c) * len;
                        for (int i = 0; i < len; ++i)
                            dx[off + i] = self.grad[off + i] * gp->value[c] * (*isig)[c];
                    }
            } else {
#pragma omp parallel for
                for (int c = 0; c < ch; ++c) {
                    // dxhat reductions over the (batch, length) slice.
                    double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
                    for (int bb = 0; bb < batch; ++bb) {
                        const long off = (static_cast<long>(bb) * ch + c) * len;
                        for (int i = 0; i < len; ++i) {
                            const double dxh = self.grad[off + i] * gp->value[c];
                            sum_dxhat += dxh;
                            sum_dxhat_xhat += dxh * (*xh)[off + i];
                        }
                    }
                    const double inv_n = 1.0 / static_cast<double>(n);
                    for (int bb = 0; bb < batch; ++bb) {
                        const long off = (static_cast<long>(bb) * ch + c) * len;
                        for (int i = 0; i < len; ++i) {
                            const double dxh = self.grad[off + i] * gp->value[c];
                            dx[off + i] = (*isig)[c] * (dxh - inv_n * sum_dxhat -
                                                        (*xh)[off + i] * inv_n * sum_dxhat_xhat);
                        }
                    }
                }
            }
            accumulate_grad(*xp, dx);
        };
    }
    return Tensor(node);
}

Tensor flatten(const Tensor& x) {
    require_3d(x, "flatten");
    auto node = make_node({x.shape()[0], x.shape()[1] * x.shape()[2]}, x.data(), false);
    if (grad_enabled() && x.requires_grad()) {
        node->requires_grad = true;
        node->parents = {x.node()};
        auto xp = x.node();
        node->backprop = [xp](detail::Node& self) { accumulate_grad(*xp, self.grad); };
    }
    return Tensor(node);
}

Tensor concat_channels(const std::vector<Tensor>& xs) {
    if (xs.empty()) throw std::invalid_argument("concat: no inputs");
    const int batch = xs[0].shape()[0];
    const int len = xs[0].shape()[2];
    int total_ch = 0;
    for (const auto& t : xs) {
        require_3d(t, "concat");
        if (t.shape()[0] != batch || t.shape()[2] != len)
            throw std::invalid_argument("concat: batch/length mismatch");
        total_ch += t.shape()[1];
    }
    std::vector<double> y(static_cast<size_t>(batch) * total_ch * len);
    int ch_off = 0;
    for (const auto& t : xs) {
        const int ch = t.shape()[1];
        for (int bb = 0; bb < batch; ++bb)
            std::memcpy(y.data() + ((static_cast<long>(bb) * total_ch + ch_off)) * len,
                        t.data().data() + (static_cast<long>(bb) * ch) * len,
                        sizeof(double) * static_cast<size_t>(ch) * len);
        ch_off += ch;
    }
    auto node = make_node({batch, total_ch, len}, std::move(y), false);
    bool any = false;
    for (const auto& t : xs) any = any || t.requires_grad();
    if (grad_enabled() && any) {
        node->requires_grad = true;
        std::vector<std::shared_ptr<detail::Node>> parents;
        std::vector<int> chs;
        for (const auto& t : xs) {
            parents.push_back(t.node());
            chs.push_back(t.shape()[1]);
        }
        node->parents = parents;
        node->backprop = [parents, chs, batch, total_ch, len](detail::Node& self) {
            int off = 0;
            for (size_t i = 0; i < parents.size(); ++i) {
                if (parents[i]->requires_grad) {
                    std::vector<double> g(parents[i]->value.size());
                    for (int bb = 0; bb < batch; ++bb)
                        std::memcpy(
                            g.data() + (static_cast<long>(bb) * chs[i]) * len,
                            self.grad.data() + ((static_cast<long>(bb) * total_ch + off)) * len,
                            sizeof(double) * static_cast<size_t>(chs[i]) * len);
                    accumulate_grad(*parents[i], g);
                }
                off += chs[i];
            }
        };
    }
    return Tensor(node);
}

}  // namespace phishgan
