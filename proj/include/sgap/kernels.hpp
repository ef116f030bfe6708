#pragma once

// Inner loops shared by the spectral, heat and gradient code. Every kernel has a
// serial reference in `serial` and an OpenMP version in `parallel` with identical
// results: each output entry is owned by one iteration, so no reduction order
// depends on the thread count.

#include <array>
#include <cstddef>
#include <span>

namespace sgap::kernels {

/// Compressed sparse row view (0-based, sorted columns not required).
struct CsrView {
    std::size_t rows = 0;
    std::span<const int> row_ptr;  // rows + 1
    std::span<const int> cols;
    std::span<const double> values;
};

/// Column-major dense block, rows x cols.
struct DenseView {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::span<const double> data;

    double operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
};

/// Triangle faces with per-face intrinsic edge lengths and a vertex-to-face
/// incidence list (CSR layout).
struct FaceMeshView {
    std::size_t vertices = 0;
    std::span<const std::array<int, 3>> faces;
    /// lengths[f] = {|v0 v1|, |v1 v2|, |v2 v0|}
    std::span<const std::array<double, 3>> lengths;
    std::span<const double> areas;
    std::span<const int> vertex_face_ptr;
    std::span<const int> vertex_faces;
};

namespace serial {

/// y = A x
void spmv(const CsrView& A, std::span<const double> x, std::span<double> y);

/// out = basis * coeff * weight-per-column (weights may be empty for all ones)
void synthesize(const DenseView& basis, std::span<const double> coeff,
                std::span<const double> weights, std::span<double> out);

/// coeff[j] = sum_i basis(i, j) mass[i] f[i]
void analyze(const DenseView& basis, std::span<const double> mass, std::span<const double> f,
             std::span<double> coeff);

/// Per-face gradient magnitude of the piecewise-linear interpolant.
void face_gradient_norms(const FaceMeshView& mesh, std::span<const double> f,
                         std::span<double> face_grad);

/// Area-weighted average of face values onto vertices.
void vertex_average(const FaceMeshView& mesh, std::span<const double> face_values,
                    std::span<double> out);

/// Centered differences on a uniform path (one-sided at the ends) or cycle.
void graph_gradient_norms(std::span<const double> f, double spacing, bool periodic,
                          std::span<double> out);

}  // namespace serial

namespace parallel {

void spmv(const CsrView& A, std::span<const double> x, std::span<double> y);
void synthesize(const DenseView& basis, std::span<const double> coeff,
                std::span<const double> weights, std::span<double> out);
void analyze(const DenseView& basis, std::span<const double> mass, std::span<const double> f,
             std::span<double> coeff);
void face_gradient_norms(const FaceMeshView& mesh, std::span<const double> f,
                         std::span<double> face_grad);
void vertex_average(const FaceMeshView& mesh, std::span<const double> face_values,
                    std::span<double> out);
void graph_gradient_norms(std::span<const double> f, double spacing, bool periodic,
                          std::span<double> out);

}  // namespace parallel

/// Gradient of the linear interpolant on one triangle laid out in the plane from
/// its edge lengths. Shared by both variants.
double triangle_gradient_norm(const std::array<double, 3>& lengths, double f0, double f1,
                              double f2);

}  // namespace sgap::kernels
