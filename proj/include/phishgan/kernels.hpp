#pragma once

namespace phishgan::kernels {

// Geometry of a 1-D convolution. Tensors are row-major:
//   x  [batch, c_in,  l_in]
//   w  [c_out, c_in,  k]
//   y  [batch, c_out, l_out]
struct ConvGeom {
    int batch = 1;
    int c_in = 0;
    int c_out = 0;
    int k = 3;
    int stride = 1;
    int pad = 1;
    int l_in = 0;
    int l_out = 0;
};

int conv_out_len(int l_in, int k, int stride, int pad);
int tconv_out_len(int l_in, int k, int stride, int pad, int out_pad);

// Fast path: im2col + BLAS GEMM, OpenMP in the packing loops.
void conv_forward(const double* x, const double* w, const double* b, double* y,
                  const ConvGeom& g);
void conv_backward_data(const double* dy, const double* w, double* dx, const ConvGeom& g);
void conv_backward_filter(const double* dy, const double* x, double* dw, double* db,
                          const ConvGeom& g);

// Serial reference kernels, kept for testing and benchmarking the fast path.
namespace ref {
void conv_forward(const double* x, const double* w, const double* b, double* y,
                  const ConvGeom& g);
void conv_backward_data(const double* dy, const double* w, double* dx, const ConvGeom& g);
void conv_backward_filter(const double* dy, const double* x, double* dw, double* db,
                          const ConvGeom& g);
}  // namespace ref

}  // namespace phishgan::kernels
