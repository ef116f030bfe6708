#include "sgap/discrete_spaces.hpp"

#include "sgap/errors.hpp"

#include <Eigen/Geometry>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <queue>
#include <span>
#include <sstream>
#include <unordered_map>

namespace sgap {
namespace {

constexpr double kPi = std::numbers::pi;

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(std::size_t n, const std::vector<Triplet>& t) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

// Heron's formula in the cancellation-free ordering.
double triangle_area(const std::array<double, 3>& l) {
    std::array<double, 3> s = l;
    std::sort(s.begin(), s.end(), std::greater<>());
    const double a = s[0], b = s[1], c = s[2];
    const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    return p > 0.0 ? 0.25 * std::sqrt(p) : 0.0;
}

// Cotangent stiffness, lumped barycentric mass and vertex-face incidence from
// faces and intrinsic edge lengths.
void assemble_mesh(DiscreteSpace& s, std::size_t nv) {
    const std::size_t nf = s.faces.size();
    s.face_areas.resize(nf);
    s.mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv));
    std::vector<double> diag(nv, 0.0);
    std::vector<Triplet> trips;
    trips.reserve(nf * 6 + nv);

    for (std::size_t t = 0; t < nf; ++t) {
        const auto& f = s.faces[t];
        const auto& l = s.edge_lengths[t];
        const double area = triangle_area(l);
        const double scale = std::max({l[0], l[1], l[2]});
        if (!(area > 1e-14 * scale * scale)) {
            std::ostringstream msg;
            msg << "zero-area triangle " << t << " (" << f[0] << ", " << f[1] << ", " << f[2] << ")";
            s.face_areas.clear();
            throw MeshError(msg.str());
        }
        s.face_areas[t] = area;
        const double a2 = l[0] * l[0], b2 = l[1] * l[1], c2 = l[2] * l[2];
        // cot of the angle opposite each edge
        const double cot01 = (b2 + c2 - a2) / (4.0 * area);
        const double cot12 = (a2 + c2 - b2) / (4.0 * area);
        const double cot20 = (a2 + b2 - c2) / (4.0 * area);
        const std::array<std::pair<int, int>, 3> edges{{{f[0], f[1]}, {f[1], f[2]}, {f[2], f[0]}}};
        const std::array<double, 3> w{0.5 * cot01, 0.5 * cot12, 0.5 * cot20};
        for (int e = 0; e < 3; ++e) {
            const auto [i, j] = edges[e];
            trips.emplace_back(i, j, -w[e]);
            trips.emplace_back(j, i, -w[e]);
            diag[i] += w[e];
            diag[j] += w[e];
        }
        for (int v : f) s.mass[v] += area / 3.0;
    }
    for (std::size_t i = 0; i < nv; ++i) trips.emplace_back(i, i, diag[i]);
    s.stiffness = from_triplets(nv, trips);

    s.vertex_face_ptr.assign(nv + 1, 0);
    for (const auto& f : s.faces)
        for (int v : f) ++s.vertex_face_ptr[v + 1];
    for (std::size_t i = 0; i < nv; ++i) s.vertex_face_ptr[i + 1] += s.vertex_face_ptr[i];
    s.vertex_faces.resize(nf * 3);
    std::vector<int> fill(s.vertex_face_ptr.begin(), s.vertex_face_ptr.end() - 1);
    for (std::size_t t = 0; t < nf; ++t)
        for (int v : s.faces[t]) s.vertex_faces[fill[v]++] = static_cast<int>(t);
}

std::vector<std::array<double, 3>> euclidean_lengths(const std::vector<Eigen::Vector3d>& p,
                                                     const std::vector<std::array<int, 3>>& faces) {
    std::vector<std::array<double, 3>> out(faces.size());
    for (std::size_t t = 0; t < faces.size(); ++t) {
        const auto& f = faces[t];
        out[t] = {(p[f[0]] - p[f[1]]).norm(), (p[f[1]] - p[f[2]]).norm(),
                  (p[f[2]] - p[f[0]]).norm()};
    }
    return out;
}

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

Adjacency edge_graph(const DiscreteSpace& s) {
    Adjacency adj(s.vertex_count());
    std::map<std::pair<int, int>, double> seen;
    for (std::size_t t = 0; t < s.faces.size(); ++t) {
        const auto& f = s.faces[t];
        for (int e = 0; e < 3; ++e) {
            int i = f[e], j = f[(e + 1) % 3];
            if (i > j) std::swap(i, j);
            seen.emplace(std::make_pair(i, j), s.edge_lengths[t][e]);
        }
    }
    for (const auto& [key, len] : seen) {
        adj[key.first].emplace_back(key.second, len);
        adj[key.second].emplace_back(key.first, len);
    }
    return adj;
}

std::vector<double> dijkstra(const Adjacency& adj, int source) {
    std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > dist[u]) continue;
        for (const auto& [v, w] : adj[u]) {
            if (du + w < dist[v]) {
                dist[v] = du + w;
                heap.emplace(dist[v], v);
            }
        }
    }
    return dist;
}

// Repeated double sweep: start anywhere, jump to the farthest vertex, keep the
// largest eccentricity seen.
double estimate_diameter(const Adjacency& adj) {
    int source = 0;
    double best = 0.0;
    for (int sweep = 0; sweep < 4; ++sweep) {
        const auto dist = dijkstra(adj, source);
        const auto far = std::max_element(dist.begin(), dist.end());
        if (!std::isfinite(*far)) throw MeshError("mesh is not connected");
        if (*far <= best && sweep > 0) break;
        best = std::max(best, *far);
        source = static_cast<int>(far - dist.begin());
    }
    return best;
}

void check_manifold(const std::vector<std::array<int, 3>>& faces) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& f : faces) {
        for (int e = 0; e < 3; ++e) {
            int i = f[e], j = f[(e + 1) % 3];
            if (i > j) std::swap(i, j);
            if (++count[{i, j}] > 2) {
                std::ostringstream msg;
                msg << "non-manifold edge (" << i << ", " << j << ") shared by more than two faces";
                throw MeshError(msg.str());
            }
        }
    }
}

// Angle between unit vectors; atan2 keeps accuracy for nearby and antipodal points.
double arc_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

double one_d_eigen_budget(int N) {
    return N >= 1000 ? 1e-4 : 1e-4 * std::pow(1000.0 / N, 2);
}

DiscretizationBudget one_d_budget(int N) {
    return {one_d_eigen_budget(N), 1e-3, 0.01, 0.05};
}

}  // namespace

kernels::FaceMeshView DiscreteSpace::face_view() const {
    return {vertex_count(), faces, edge_lengths, face_areas, vertex_face_ptr, vertex_faces};
}

kernels::CsrView DiscreteSpace::stiffness_view() const {
    const auto rows = static_cast<std::size_t>(stiffness.rows());
    const auto nnz = static_cast<std::size_t>(stiffness.nonZeros());
    return {rows,
            {stiffness.outerIndexPtr(), rows + 1},
            {stiffness.innerIndexPtr(), nnz},
            {stiffness.valuePtr(), nnz}};
}

DiscreteSpace build_interval(double d, int N) {
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("d must be positive");
    if (N < 10) throw DomainError("N must be at least 10");
    DiscreteSpace s;
    s.name = "interval";
    s.kind = SpaceKind::Path;
    s.n_dim = 1;
    s.K = 0.0;
    s.diameter = d;
    s.has_boundary = true;
    const double h = d / N;
    s.spacing = h;
    const int nv = N + 1;
    s.mass = Eigen::VectorXd::Constant(nv, h);
    s.mass[0] = s.mass[N] = h / 2.0;
    std::vector<Triplet> t;
    for (int i = 0; i < nv; ++i) {
        s.positions.emplace_back(i * h, 0.0, 0.0);
        const double deg = (i == 0 || i == N) ? 1.0 : 2.0;
        t.emplace_back(i, i, deg / h);
        if (i > 0) t.emplace_back(i, i - 1, -1.0 / h);
        if (i < N) t.emplace_back(i, i + 1, -1.0 / h);
    }
    s.stiffness = from_triplets(nv, t);
    s.budget = one_d_budget(N);
    s.distance = [h](int i, int j) { return std::abs(i - j) * h; };
    return s;
}

DiscreteSpace build_circle(double L, int N) {
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("L must be positive");
    if (N < 10) throw DomainError("N must be at least 10");
    DiscreteSpace s;
    s.name = "circle";
    s.kind = SpaceKind::Cycle;
    s.n_dim = 1;
    s.K = 0.0;
    s.diameter = L / 2.0;
    const double h = L / N;
    s.spacing = h;
    s.mass = Eigen::VectorXd::Constant(N, h);
    std::vector<Triplet> t;
    for (int i = 0; i < N; ++i) {
        s.positions.emplace_back(i * h, 0.0, 0.0);
        t.emplace_back(i, i, 2.0 / h);
        t.emplace_back(i, (i + 1) % N, -1.0 / h);
        t.emplace_back(i, (i + N - 1) % N, -1.0 / h);
    }
    s.stiffness = from_triplets(N, t);
    s.budget = one_d_budget(N);
    s.distance = [h, N](int i, int j) {
        const int k = std::abs(i - j);
        return std::min(k, N - k) * h;
    };
    return s;
}

DiscreteSpace build_icosphere(int subdivisions) {
    if (subdivisions < 0 || subdivisions > 7)
        throw DomainError("subdivisions must lie in [0, 7]");
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> p{{-1, g, 0}, {1, g, 0},  {-1, -g, 0}, {1, -g, 0},
                                   {0, -1, g}, {0, 1, g},  {0, -1, -g}, {0, 1, -g},
                                   {g, 0, -1}, {g, 0, 1},  {-g, 0, -1}, {-g, 0, 1}};
    for (auto& v : p) v.normalize();
    std::vector<std::array<int, 3>> faces{
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::unordered_map<std::uint64_t, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                             static_cast<std::uint32_t>(std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            p.push_back((p[a] + p[b]).normalized());
            const int idx = static_cast<int>(p.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    DiscreteSpace s;
    s.name = "icosphere";
    s.kind = SpaceKind::TriangleMesh;
    s.n_dim = 2;
    s.K = 1.0;
    s.diameter = kPi;
    s.edge_lengths = euclidean_lengths(p, faces);
    s.faces = std::move(faces);
    s.positions = p;
    assemble_mesh(s, p.size());
    s.distance = [p = std::move(p)](int i, int j) {
        return arc_between(p[i], p[j]);
    };
    return s;
}

DiscreteSpace build_football(double c, int N_r, int N_theta) {
    if (!(c > 0.0) || c > 2.0 * kPi * (1.0 + 1e-12))
        throw DomainError("c must lie in (0, 2π]");
    if (N_r < 8 || N_theta < 8) throw DomainError("N_r and N_theta must be at least 8");

    const double base = c / (2.0 * kPi);
    // Exact suspension distance: the base circle distance is capped at pi.
    auto dist_rt = [base](double r1, double t1, double r2, double t2) {
        double dt = std::fmod(std::abs(t1 - t2), 2.0 * kPi);
        dt = std::min(dt, 2.0 * kPi - dt);
        const double ds = std::min(base * dt, kPi);
        // the two meridians, unrolled onto the unit sphere at angle ds
        const Eigen::Vector3d a(std::sin(r1), 0.0, std::cos(r1));
        const Eigen::Vector3d b(std::sin(r2) * std::cos(ds), std::sin(r2) * std::sin(ds), std::cos(r2));
        return arc_between(a, b);
    };

    std::vector<Eigen::Vector3d> rt;
    rt.emplace_back(0.0, 0.0, 0.0);
    for (int i = 1; i < N_r; ++i)
        for (int j = 0; j < N_theta; ++j)
            rt.emplace_back(i * kPi / N_r, 2.0 * kPi * j / N_theta, 0.0);
    rt.emplace_back(kPi, 0.0, 0.0);
    const int south = static_cast<int>(rt.size()) - 1;
    auto ring = [N_theta](int i, int j) { return 1 + (i - 1) * N_theta + (j % N_theta); };

    std::vector<std::array<int, 3>> faces;
    for (int j = 0; j < N_theta; ++j) faces.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i < N_r - 1; ++i) {
        for (int j = 0; j < N_theta; ++j) {
            const int a = ring(i, j), b = ring(i, j + 1), cc = ring(i + 1, j + 1), d = ring(i + 1, j);
            faces.push_back({a, d, cc});
            faces.push_back({a, cc, b});
        }
    }
    for (int j = 0; j < N_theta; ++j) faces.push_back({ring(N_r - 1, j), south, ring(N_r - 1, j + 1)});

    DiscreteSpace s;
    s.name = "football";
    s.kind = SpaceKind::TriangleMesh;
    s.n_dim = 2;
    s.K = 1.0;
    s.diameter = kPi;
    s.edge_lengths.resize(faces.size());
    for (std::size_t t = 0; t < faces.size(); ++t) {
        const auto& f = faces[t];
        for (int e = 0; e < 3; ++e) {
            const auto& u = rt[f[e]];
            const auto& v = rt[f[(e + 1) % 3]];
            // chord of the geodesic distance, so c = 2 pi reproduces the inscribed sphere mesh
            s.edge_lengths[t][e] = 2.0 * std::sin(dist_rt(u[0], u[1], v[0], v[1]) / 2.0);
        }
    }
    s.faces = std::move(faces);
    s.positions = rt;
    assemble_mesh(s, rt.size());
    if (c < 2.0 * kPi * (1.0 - 1e-12)) s.singular_vertices = {0, south};
    s.distance = [rt = std::move(rt), dist_rt](int i, int j) {
        return dist_rt(rt[i][0], rt[i][1], rt[j][0], rt[j][1]);
    };
    return s;
}

MeshMetadata read_mesh_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open mesh metadata " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(1, std::string("metadata: ") + e.what());
    }
    MeshMetadata meta;
    try {
        meta.n_dim = j.at("n_dim").get<int>();
        meta.K = j.at("K").get<double>();
        const auto& d = j.at("diameter");
        if (d.is_string()) {
            if (d.get<std::string>() != "estimate")
                throw DomainError("metadata diameter must be a number or \"estimate\"");
        } else {
            meta.diameter = d.get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("metadata: ") + e.what());
    }
    if (meta.n_dim < 1) throw DomainError("metadata n_dim must be positive");
    if (meta.diameter && !(*meta.diameter > 0.0)) throw DomainError("metadata diameter must be positive");
    return meta;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
std::vector<T> parse_numbers(std::string_view line, std::size_t lineno, std::size_t expected) {
    std::vector<T> out;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        if (p == end) break;
        T value{};
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc()) throw ParseError(lineno, "malformed number in \"" + std::string(line) + "\"");
        out.push_back(value);
        p = next;
        if (p < end && *p != ' ' && *p != '\t')
            throw ParseError(lineno, "malformed number in \"" + std::string(line) + "\"");
    }
    if (out.size() != expected) {
        std::ostringstream msg;
        msg << "expected " << expected << " fields, found " << out.size();
        throw ParseError(lineno, msg.str());
    }
    return out;
}

}  // namespace

DiscreteSpace load_mesh(const std::filesystem::path& path, std::optional<MeshMetadata> metadata) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open mesh " + path.string());
    const MeshMetadata meta =
        metadata ? *metadata : read_mesh_metadata(path.string() + ".meta.json");

    std::string raw;
    std::size_t lineno = 0;
    auto next_line = [&](const char* what) -> std::string_view {
        if (!std::getline(in, raw)) throw ParseError(lineno + 1, std::string("unexpected end of file, expected ") + what);
        ++lineno;
        return trim(raw);
    };

    if (next_line("header") != "OFF") throw ParseError(1, "missing OFF header");
    std::string_view line = next_line("counts");
    const auto counts = parse_numbers<long>(line, lineno, 3);
    if (counts[0] < 3 || counts[1] < 1 || counts[2] < 0)
        throw ParseError(lineno, "invalid vertex/face counts");
    const auto nv = static_cast<std::size_t>(counts[0]);
    const auto nf = static_cast<std::size_t>(counts[1]);

    std::vector<Eigen::Vector3d> p(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        line = next_line("vertex");
        const auto xyz = parse_numbers<double>(line, lineno, 3);
        p[i] = {xyz[0], xyz[1], xyz[2]};
    }
    std::vector<std::array<int, 3>> faces(nf);
    for (std::size_t t = 0; t < nf; ++t) {
        line = next_line("face");
        const auto f = parse_numbers<long>(line, lineno, 4);
        if (f[0] != 3) throw ParseError(lineno, "only triangular faces are supported");
        for (int k = 0; k < 3; ++k) {
            if (f[k + 1] < 0 || f[k + 1] >= counts[0])
                throw ParseError(lineno, "vertex index out of range");
            faces[t][k] = static_cast<int>(f[k + 1]);
        }
        if (faces[t][0] == faces[t][1] || faces[t][1] == faces[t][2] || faces[t][0] == faces[t][2])
            throw MeshError("zero-area triangle " + std::to_string(t) + " (repeated vertex)");
    }
    while (std::getline(in, raw)) {
        ++lineno;
        if (!trim(raw).empty()) throw ParseError(lineno, "trailing content after the last face");
    }
    check_manifold(faces);

    DiscreteSpace s;
    s.name = path.stem().string();
    s.kind = SpaceKind::TriangleMesh;
    s.n_dim = meta.n_dim;
    s.K = meta.K;
    s.edge_lengths = euclidean_lengths(p, faces);
    s.faces = std::move(faces);
    s.positions = std::move(p);
    assemble_mesh(s, nv);

    auto adj = std::make_shared<const Adjacency>(edge_graph(s));
    if (meta.diameter) {
        s.diameter = *meta.diameter;
    } else {
        // edge paths zigzag and overshoot; Myers caps the diameter at pi / sqrt(K)
        s.diameter = estimate_diameter(*adj);
        if (meta.K > 0.0) s.diameter = std::min(s.diameter, kPi / std::sqrt(meta.K));
    }
    s.distance = [adj](int i, int j) { return dijkstra(*adj, i)[j]; };
    return s;
}

void write_off(const std::filesystem::path& path, const std::vector<Eigen::Vector3d>& positions,
               const std::vector<std::array<int, 3>>& faces) {
    std::ofstream out(path);
    if (!out) throw NotFoundError("cannot write " + path.string());
    out.precision(17);
    out << "OFF\n" << positions.size() << ' ' << faces.size() << " 0\n";
    for (const auto& v : positions) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& f : faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

Eigen::VectorXd discrete_gradient_norm(const DiscreteSpace& space, const Eigen::VectorXd& f) {
    if (static_cast<std::size_t>(f.size()) != space.vertex_count())
        throw DomainError("vertex function has the wrong length");
    Eigen::VectorXd out(f.size());
    const std::span<const double> fs(f.data(), f.size());
    if (space.kind != SpaceKind::TriangleMesh) {
        kernels::parallel::graph_gradient_norms(fs, space.spacing, space.kind == SpaceKind::Cycle,
                                                {out.data(), static_cast<std::size_t>(out.size())});
        return out;
    }
    std::vector<double> face_grad(space.faces.size());
    const auto view = space.face_view();
    kernels::parallel::face_gradient_norms(view, fs, face_grad);
    kernels::parallel::vertex_average(view, face_grad,
                                      {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

}  // namespace sgap
