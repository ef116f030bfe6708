#include "sgap/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sgap::kernels {

double triangle_gradient_norm(const std::array<double, 3>& lengths, double f0, double f1,
                              double f2) {
    const double l01 = lengths[0];
    const double l12 = lengths[1];
    const double l20 = lengths[2];
    // p0 = (0, 0), p1 = (l01, 0), p2 = (x, y)
    const double x = (l01 * l01 + l20 * l20 - l12 * l12) / (2.0 * l01);
    const double y = std::sqrt(std::max(l20 * l20 - x * x, 0.0));
    const double gx = (f1 - f0) / l01;
    const double gy = y > 0.0 ? ((f2 - f0) - gx * x) / y : 0.0;
    return std::hypot(gx, gy);
}

namespace {

inline double spmv_row(const CsrView& A, std::span<const double> x, std::size_t r) {
    double acc = 0.0;
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) acc += A.values[k] * x[A.cols[k]];
    return acc;
}

inline double synthesize_row(const DenseView& B, std::span<const double> c,
                             std::span<const double> w, std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < B.cols; ++j) acc += B(i, j) * c[j] * (w.empty() ? 1.0 : w[j]);
    return acc;
}

inline double analyze_col(const DenseView& B, std::span<const double> mass,
                          std::span<const double> f, std::size_t j) {
    const double* col = B.data.data() + j * B.rows;
    double acc = 0.0;
    for (std::size_t i = 0; i < B.rows; ++i) acc += col[i] * mass[i] * f[i];
    return acc;
}

inline double face_grad(const FaceMeshView& m, std::span<const double> f, std::size_t t) {
    const auto& tri = m.faces[t];
    return triangle_gradient_norm(m.lengths[t], f[tri[0]], f[tri[1]], f[tri[2]]);
}

inline double vertex_avg(const FaceMeshView& m, std::span<const double> fv, std::size_t v) {
    double num = 0.0;
    double den = 0.0;
    for (int k = m.vertex_face_ptr[v]; k < m.vertex_face_ptr[v + 1]; ++k) {
        const int t = m.vertex_faces[k];
        num += m.areas[t] * fv[t];
        den += m.areas[t];
    }
    return den > 0.0 ? num / den : 0.0;
}

inline double graph_grad(std::span<const double> f, double h, bool periodic, std::size_t i) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (periodic) {
        const double next = f[(i + 1) % n];
        const double prev = f[(i + n - 1) % n];
        return std::abs(next - prev) / (2.0 * h);
    }
    if (i == 0) return std::abs(f[1] - f[0]) / h;
    if (i == n - 1) return std::abs(f[n - 1] - f[n - 2]) / h;
    return std::abs(f[i + 1] - f[i - 1]) / (2.0 * h);
}

}  // namespace

namespace serial {

void spmv(const CsrView& A, std::span<const double> x, std::span<double> y) {
    for (std::size_t r = 0; r < A.rows; ++r) y[r] = spmv_row(A, x, r);
}

void synthesize(const DenseView& basis, std::span<const double> coeff,
                std::span<const double> weights, std::span<double> out) {
    for (std::size_t i = 0; i < basis.rows; ++i) out[i] = synthesize_row(basis, coeff, weights, i);
}

void analyze(const DenseView& basis, std::span<const double> mass, std::span<const double> f,
             std::span<double> coeff) {
    for (std::size_t j = 0; j < basis.cols; ++j) coeff[j] = analyze_col(basis, mass, f, j);
}

void face_gradient_norms(const FaceMeshView& mesh, std::span<const double> f,
                         std::span<double> out) {
    for (std::size_t t = 0; t < mesh.faces.size(); ++t) out[t] = face_grad(mesh, f, t);
}

void vertex_average(const FaceMeshView& mesh, std::span<const double> fv,
                    std::span<double> out) {
    for (std::size_t v = 0; v < mesh.vertices; ++v) out[v] = vertex_avg(mesh, fv, v);
}

void graph_gradient_norms(std::span<const double> f, double spacing, bool periodic,
                          std::span<double> out) {
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = graph_grad(f, spacing, periodic, i);
}

}  // namespace serial

namespace parallel {

void spmv(const CsrView& A, std::span<const double> x, std::span<double> y) {
    const auto rows = static_cast<long>(A.rows);
#pragma omp parallel for schedule(static)
    for (long r = 0; r < rows; ++r) y[r] = spmv_row(A, x, r);
}

void synthesize(const DenseView& basis, std::span<const double> coeff,
                std::span<const double> weights, std::span<double> out) {
    const auto rows = static_cast<long>(basis.rows);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) out[i] = synthesize_row(basis, coeff, weights, i);
}

void analyze(const DenseView& basis, std::span<const double> mass, std::span<const double> f,
             std::span<double> coeff) {
    const auto cols = static_cast<long>(basis.cols);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < cols; ++j) coeff[j] = analyze_col(basis, mass, f, j);
}

void face_gradient_norms(const FaceMeshView& mesh, std::span<const double> f,
                         std::span<double> out) {
    const auto faces = static_cast<long>(mesh.faces.size());
#pragma omp parallel for schedule(static)
    for (long t = 0; t < faces; ++t) out[t] = face_grad(mesh, f, t);
}

void vertex_average(const FaceMeshView& mesh, std::span<const double> fv,
                    std::span<double> out) {
    const auto verts = static_cast<long>(mesh.vertices);
#pragma omp parallel for schedule(static)
    for (long v = 0; v < verts; ++v) out[v] = vertex_avg(mesh, fv, v);
}

void graph_gradient_norms(std::span<const double> f, double spacing, bool periodic,
                          std::span<double> out) {
    const auto n = static_cast<long>(f.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = graph_grad(f, spacing, periodic, i);
}

}  // namespace parallel
}  // namespace sgap::kernels
