#include "phishgan/kernels.hpp"

#include <cblas.h>

#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phishgan::kernels {

int conv_out_len(int l_in, int k, int stride, int pad) {
    return (l_in + 2 * pad - k) / stride + 1;
}

int tconv_out_len(int l_in, int k, int stride, int pad, int out_pad) {
    return (l_in - 1) * stride - 2 * pad + k + out_pad;
}

namespace {

// col[(c*k + t), b*l_out + o] = x[b, c, o*stride + t - pad], zero outside.
void im2col(const double* x, double* col, const ConvGeom& g) {
    const int n = g.batch * g.l_out;
#pragma omp parallel for
    for (int c = 0; c < g.c_in; ++c) {
        for (int t = 0; t < g.k; ++t) {
            double* row = col + (static_cast<long>(c) * g.k + t) * n;
            for (int b = 0; b < g.batch; ++b) {
                const double* xc = x + (static_cast<long>(b) * g.c_in + c) * g.l_in;
                double* out = row + static_cast<long>(b) * g.l_out;
                for (int o = 0; o < g.l_out; ++o) {
                    const int i = o * g.stride + t - g.pad;
                    out[o] = (i >= 0 && i < g.l_in) ? xc[i] : 0.0;
                }
            }
        }
    }
}

// Scatter-add transpose of im2col. Parallel over input channels so writes
// never collide and results stay bit-deterministic.
void col2im_add(const double* col, double* dx, const ConvGeom& g) {
    const int n = g.batch * g.l_out;
#pragma omp parallel for
    for (int c = 0; c < g.c_in; ++c) {
        for (int t = 0; t < g.k; ++t) {
            const double* row = col + (static_cast<long>(c) * g.k + t) * n;
            for (int b = 0; b < g.batch; ++b) {
                double* dxc = dx + (static_cast<long>(b) * g.c_in + c) * g.l_in;
                const double* in = row + static_cast<long>(b) * g.l_out;
                for (int o = 0; o < g.l_out; ++o) {
                    const int i = o * g.stride + t - g.pad;
                    if (i >= 0 && i < g.l_in) dxc[i] += in[o];
                }
            }
        }
    }
}

// y is [batch, c_out, l_out] but GEMM produces [c_out, batch*l_out]; the
// batch and position axes have to be interleaved back.
void scatter_rows(const double* ymat, const double* bias, double* y, const ConvGeom& g) {
#pragma omp parallel for
    for (int b = 0; b < g.batch; ++b) {
        for (int c = 0; c < g.c_out; ++c) {
            const double* src = ymat + static_cast<long>(c) * g.batch * g.l_out +
                                static_cast<long>(b) * g.l_out;
            double* dst = y + (static_cast<long>(b) * g.c_out + c) * g.l_out;
            const double add = bias ? bias[c] : 0.0;
            for (int o = 0; o < g.l_out; ++o) dst[o] = src[o] + add;
        }
    }
}

void gather_rows(const double* y, double* ymat, const ConvGeom& g) {
#pragma omp parallel for
    for (int b = 0; b < g.batch; ++b) {
        for (int c = 0; c < g.c_out; ++c) {
            const double* src = y + (static_cast<long>(b) * g.c_out + c) * g.l_out;
            double* dst = ymat + static_cast<long>(c) * g.batch * g.l_out +
                          static_cast<long>(b) * g.l_out;
            std::memcpy(dst, src, sizeof(double) * static_cast<size_t>(g.l_out));
        }
    }
}

}  // namespace

void conv_forward(const double* x, const double* w, const double* b, double* y,
                  const ConvGeom& g) {
    const int n = g.batch * g.l_out;
    const int kk = g.c_in * g.k;
    std::vector<double> col(static_cast<size_t>(kk) * n);
    std::vector<double> ymat(static_cast<size_t>(g.c_out) * n);
    im2col(x, col.data(), g);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, g.c_out, n, kk, 1.0, w, kk,
                col.data(), n, 0.0, ymat.data(), n);
    scatter_rows(ymat.data(), b, y, g);
}

void conv_backward_data(const double* dy, const double* w, double* dx, const ConvGeom& g) {
    const int n = g.batch * g.l_out;
    const int kk = g.c_in * g.k;
    std::vector<double> dymat(static_cast<size_t>(g.c_out) * n);
    std::vector<double> dcol(static_cast<size_t>(kk) * n);
    gather_rows(dy, dymat.data(), g);
    cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, kk, n, g.c_out, 1.0, w, kk,
                dymat.data(), n, 0.0, dcol.data(), n);
    std::memset(dx, 0, sizeof(double) * static_cast<size_t>(g.batch) * g.c_in * g.l_in);
    col2im_add(dcol.data(), dx, g);
}

void conv_backward_filter(const double* dy, const double* x, double* dw, double* db,
                          const ConvGeom& g) {
    const int n = g.batch * g.l_out;
    const int kk = g.c_in * g.k;
    std::vector<double> col(static_cast<size_t>(kk) * n);
    std::vector<double> dymat(static_cast<size_t>(g.c_out) * n);
    im2col(x, col.data(), g);
    gather_rows(dy, dymat.data(), g);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, g.c_out, kk, n, 1.0, dymat.data(),
                n, col.data(), n, 0.0, dw, kk);
    if (db) {
#pragma omp parallel for
        for (int c = 0; c < g.c_out; ++c) {
            double s = 0.0;
            const double* row = dymat.data() + static_cast<long>(c) * n;
            for (int i = 0; i < n; ++i) s += row[i];
            db[c] = s;
        }
    }
}

namespace ref {

void conv_forward(const double* x, const double* w, const double* b, double* y,
                  const ConvGeom& g) {
    for (int bb = 0; bb < g.batch; ++bb)
        for (int co = 0; co < g.c_out; ++co)
            for (int o = 0; o < g.l_out; ++o) {
                double acc = b ? b[co] : 0.0;
                for (int ci = 0; ci < g.c_in; ++ci)
                    for (int t = 0; t < g.k; ++t) {
                        const int i = o * g.stride + t - g.pad;
                        if (i >= 0 && i < g.l_in)
                            acc += w[(static_cast<long>(co) * g.c_in + ci) * g.k + t] *
                                   x[(static_cast<long>(bb) * g.c_in + ci) * g.l_in + i];
                    }
                y[(static_cast<long>(bb) * g.c_out + co) * g.l_out + o] = acc;
            }
}

void conv_backward_data(const double* dy, const double* w, double* dx, const ConvGeom& g) {
    std::memset(dx, 0, sizeof(double) * static_cast<size_t>(g.batch) * g.c_in * g.l_in);
    for (int bb = 0; bb < g.batch; ++bb)
        for (int co = 0; co < g.c_out; ++co)
            for (int o = 0; o < g.l_out; ++o) {
                const double gy = dy[(static_cast<long>(bb) * g.c_out + co) * g.l_out + o];
                for (int ci = 0; ci < g.c_in; ++ci)
                    for (int t = 0; t < g.k; ++t) {
                        const int i = o * g.stride + t - g.pad;
                        if (i >= 0 && i < g.l_in)
                            dx[(static_cast<long>(bb) * g.c_in + ci) * g.l_in + i] +=
                                gy * w[(static_cast<long>(co) * g.c_in + ci) * g.k + t];
                    }
            }
}

void conv_backward_filter(const double* dy, const double* x, double* dw, double* db,
                          const ConvGeom& g) {
    std::memset(dw, 0, sizeof(double) * static_cast<size_t>(g.c_out) * g.c_in * g.k);
    if (db) std::memset(db, 0, sizeof(double) * static_cast<size_t>(g.c_out));
    for (int bb = 0; bb < g.batch; ++bb)
        for (int co = 0; co < g.c_out; ++co)
            for (int o = 0; o < g.l_out; ++o) {
                const double gy = dy[(static_cast<long>(bb) * g.c_out + co) * g.l_out + o];
                if (db) db[co] += gy;
                for (int ci = 0; ci < g.c_in; ++ci)
                    for (int t = 0; t < g.k; ++t) {
                        const int i = o * g.stride + t - g.pad;
                        if (i >= 0 && i < g.l_in)
                            dw[(static_cast<long>(co) * g.c_in + ci) * g.k + t] +=
                                gy * x[(static_cast<long>(bb) * g.c_in + ci) * g.l_in + i];
                    }
            }
}

}  // namespace ref

}  // namespace phishgan::kernels
