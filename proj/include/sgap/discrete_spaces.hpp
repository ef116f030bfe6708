#pragma once

#include "sgap/kernels.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sgap {

enum class SpaceKind { Path, Cycle, TriangleMesh };

/// Per-fixture discretization allowances used by the comparison and heat checks.
struct DiscretizationBudget {
    double eigen = 0.03;     // relative, eigenvalue and maximum checks
    double gradient = 0.05;  // relative to max of the model side
    double li_yau = 0.05;    // relative to n / (2t)
    double harnack = 0.05;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// A discretized model geometry. Immutable once built.
struct DiscreteSpace {
    std::string name;
    SpaceKind kind = SpaceKind::TriangleMesh;
    int n_dim = 2;
    double K = 0.0;
    double diameter = 0.0;
    bool has_boundary = false;

    // Path/Cycle: (arc length, 0, 0). Icosphere and loaded meshes: embedding.
    // Football: (r, theta, 0) in the warped-product chart.
    std::vector<Eigen::Vector3d> positions;
    Eigen::VectorXd mass;  // lumped, one weight per vertex
    SparseMatrix stiffness;

    // Triangle meshes only.
    std::vector<std::array<int, 3>> faces;
    std::vector<std::array<double, 3>> edge_lengths;  // {|v0v1|, |v1v2|, |v2v0|}
    std::vector<double> face_areas;
    std::vector<int> vertex_face_ptr;
    std::vector<int> vertex_faces;
    std::vector<int> singular_vertices;  // cone points

    double spacing = 0.0;  // Path/Cycle only
    DiscretizationBudget budget;
    std::function<double(int, int)> distance;

    std::size_t vertex_count() const { return static_cast<std::size_t>(mass.size()); }
    double volume() const { return mass.sum(); }
    kernels::FaceMeshView face_view() const;
    kernels::CsrView stiffness_view() const;
};

/// Path graph on [0, d] with N + 1 nodes. n_dim = 1, K = 0, has a boundary.
DiscreteSpace build_interval(double d, int N);

/// Cycle graph of length L with N nodes. n_dim = 1, K = 0, diameter L / 2.
DiscreteSpace build_circle(double L, int N);

/// Unit sphere from a subdivided icosahedron, 0 <= subdivisions <= 7.
DiscreteSpace build_icosphere(int subdivisions);

/// Spherical suspension over a circle of circumference c in (0, 2 pi]:
/// dr^2 + (c / 2 pi)^2 sin^2 r dtheta^2. Poles are single vertices and are
/// reported as singular when c < 2 pi. Geometry comes from intrinsic edge lengths.
DiscreteSpace build_football(double c, int N_r, int N_theta);

struct MeshMetadata {
    int n_dim = 2;
    double K = 0.0;
    std::optional<double> diameter;  // nullopt: estimate from graph geodesics, capped at pi/sqrt(K) when K > 0
};

/// Reads an OFF triangle mesh. Metadata defaults to `path + ".meta.json"`.
DiscreteSpace load_mesh(const std::filesystem::path& path,
                        std::optional<MeshMetadata> metadata = std::nullopt);

/// Parses the sidecar JSON record {"n_dim", "K", "diameter" | "estimate"}.
MeshMetadata read_mesh_metadata(const std::filesystem::path& path);

void write_off(const std::filesystem::path& path, const std::vector<Eigen::Vector3d>& positions,
               const std::vector<std::array<int, 3>>& faces);

/// |grad f| at every vertex. Meshes: area-weighted mean of per-face gradients;
/// graphs: centered differences, one-sided at path ends.
Eigen::VectorXd discrete_gradient_norm(const DiscreteSpace& space, const Eigen::VectorXd& f);

}  // namespace sgap
