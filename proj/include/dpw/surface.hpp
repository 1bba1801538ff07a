#ifndef DPW_SURFACE_HPP
#define DPW_SURFACE_HPP

// From unitary frames to surfaces in R^3: Sym-Bobenko formula, the full pipeline
// (frame ODE, Iwasawa, Sym) over an annulus, mesh diagnostics.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "flow.hpp"
#include "geometry.hpp"
#include "iwasawa.hpp"
#include "loop.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "potential.hpp"

namespace dpw {

/// Annulus rho_min <= |z| <= rho_max sampled at z = exp(u_j + i theta_k),
/// u uniform on [log rho_min, log rho_max], theta_k = 2 pi k / n_angular.
struct DomainGrid {
    double rho_min = 0.1;
    double rho_max = 5.0;
    int n_radial = 128;
    int n_angular = 64;

    void validate() const {
        if (!(rho_min > 0.0) || !(rho_max > rho_min) || !std::isfinite(rho_max))
            throw DomainError("annulus needs 0 < rho_min < rho_max");
        if (n_radial < 2) throw DomainError("annulus needs n_radial >= 2");
        if (n_angular < 8) throw DomainError("annulus needs n_angular >= 8");
    }
    double u(int j) const {
        const double a = std::log(rho_min), b = std::log(rho_max);
        return a + (b - a) * j / (n_radial - 1);
    }
    double theta(int k) const { return 2.0 * pi * k / n_angular; }
    cplx z(int j, int k) const { return std::exp(cplx(u(j), theta(k))); }
};

struct SymResult {
    Vec3 point;
    /// |S - S^*| + |tr S| for S = (dF/dlambda) F^-1 at lambda = 1.
    double hermitian_defect = 0.0;
    bool flagged = false;
};

/// f = (dF/dlambda) F^-1 at lambda = 1 (grid index 0), in Pauli coordinates.
/// dF/dlambda comes from the Fourier coefficients of F on the grid.
inline SymResult sym_bobenko(std::span<const ComplexMatrix2> F, double flag_tol = 1e-5) {
    if (F.empty() || !is_power_of_two(F.size())) throw GridError("Sym formula needs samples on a lambda grid");
    const ComplexMatrix2 S = spectral_derivative_at_one(F) * inverse(F[0]);
    SymResult out;
    out.hermitian_defect = norm_inf(S - adjoint(S)) + std::abs(trace(S));
    out.point = pauli_coordinates((S + adjoint(S)) * 0.5);
    out.flagged = out.hermitian_defect > flag_tol;
    return out;
}

/// Unit normal N = F sigma_3 F^-1 at lambda = 1, in Pauli coordinates.
inline Vec3 frame_normal(std::span<const ComplexMatrix2> F) {
    return pauli_coordinates(F[0] * pauli3 * inverse(F[0]));
}

struct MeanCurvatureStats {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
    std::size_t degenerate = 0;

    double relative_spread() const {
        return mean != 0.0 ? stddev / std::abs(mean) : std::numeric_limits<double>::infinity();
    }
};

struct SurfaceDiagnostics {
    MonodromyReport monodromy{};          // of the frame actually used (after unitarizing)
    MonodromyReport raw_monodromy{};      // with Phi0 = I
    double unitarizer_defect = 0.0;
    IwasawaResiduals iwasawa_max{};
    double sym_defect_max = 0.0;
    std::size_t sym_flagged = 0;
};

/// Grid-structured surface: vertex (j, k) at index j * n_angular + k, seam welded
/// (theta = 2 pi maps to k = 0). `seam` holds the separately computed theta = 2 pi ring.
struct SurfaceMesh {
    int n_radial = 0;
    int n_angular = 0;
    std::vector<double> u;
    std::vector<double> theta;
    std::vector<Vec3> vertices;
    std::vector<Vec3> seam;
    std::vector<std::array<int, 4>> faces;
    std::vector<Vec3> normals;
    MeanCurvatureStats H_stats;
    SurfaceDiagnostics diagnostics;

    int index(int j, int k) const { return j * n_angular + ((k % n_angular) + n_angular) % n_angular; }
    const Vec3& at(int j, int k) const { return vertices[index(j, k)]; }

    double bbox_diagonal() const {
        Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
        for (const auto& v : vertices) {
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
        }
        return norm(hi - lo);
    }

    /// max_j |x(u_j, 2 pi) - x(u_j, 0)| relative to the bounding-box diagonal; 0 without a seam ring.
    double seam_mismatch() const {
        if (seam.empty()) return 0.0;
        double e = 0.0;
        for (int j = 0; j < n_radial; ++j) e = std::max(e, norm(seam[j] - at(j, 0)));
        return e / bbox_diagonal();
    }
};

/// Quad faces (j,k) (j,k+1) (j+1,k+1) (j+1,k) with welded seam and centered-difference normals.
inline void assemble_topology(SurfaceMesh& mesh) {
    const int nr = mesh.n_radial, na = mesh.n_angular;
    mesh.faces.clear();
    for (int j = 0; j + 1 < nr; ++j)
        for (int k = 0; k < na; ++k)
            mesh.faces.push_back({mesh.index(j, k), mesh.index(j, k + 1), mesh.index(j + 1, k + 1), mesh.index(j + 1, k)});
    mesh.normals.assign(mesh.vertices.size(), Vec3{});
    for (int j = 0; j < nr; ++j) {
        const int j0 = std::max(j - 1, 0), j1 = std::min(j + 1, nr - 1);
        for (int k = 0; k < na; ++k) {
            const Vec3 du = mesh.at(j1, k) - mesh.at(j0, k);
            const Vec3 dt = mesh.at(j, k + 1) - mesh.at(j, k - 1);
            mesh.normals[mesh.index(j, k)] = normalized(cross(du, dt));
        }
    }
}

inline SurfaceMesh make_grid_mesh(int n_radial, int n_angular, std::vector<Vec3> vertices,
                                  std::vector<double> u = {}, std::vector<double> theta = {}) {
    if (n_radial < 1 || n_angular < 1 || vertices.size() != static_cast<std::size_t>(n_radial * n_angular))
        throw DomainError("vertex count does not match the grid shape");
    SurfaceMesh mesh;
    mesh.n_radial = n_radial;
    mesh.n_angular = n_angular;
    mesh.vertices = std::move(vertices);
    mesh.u = std::move(u);
    mesh.theta = std::move(theta);
    assemble_topology(mesh);
    return mesh;
}

/// Discrete mean curvature H = |Delta x| / 2 from the cotangent Laplacian with mixed Voronoi
/// areas (quads split along the (j,k)-(j+1,k+1) diagonal). H > 0 when Delta x points against
/// the vertex normal. Rings within two of either end are excluded.
inline MeanCurvatureStats mean_curvature_stats(const SurfaceMesh& mesh) {
    const int nr = mesh.n_radial, na = mesh.n_angular;
    const std::size_t nv = mesh.vertices.size();
    std::vector<Vec3> lap(nv);
    std::vector<double> area(nv, 0.0);
    std::vector<char> touches_degenerate(nv, 0);
    MeanCurvatureStats st;
    auto triangle = [&](int a, int b, int c) {
        const std::array<int, 3> v{a, b, c};
        const std::array<Vec3, 3> p{mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]};
        const double A = 0.5 * norm(cross(p[1] - p[0], p[2] - p[0]));
        if (A < 1e-14) {
            ++st.degenerate;
            for (int i : v) touches_degenerate[i] = 1;
            return;
        }
        std::array<double, 3> cot{};
        bool obtuse = false;
        int obtuse_at = -1;
        for (int i = 0; i < 3; ++i) {
            const Vec3 e1 = p[(i + 1) % 3] - p[i], e2 = p[(i + 2) % 3] - p[i];
            cot[i] = dot(e1, e2) / norm(cross(e1, e2));
            if (dot(e1, e2) < 0.0) {
                obtuse = true;
                obtuse_at = i;
            }
        }
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            // Edge (j, k) is opposite vertex i.
            lap[v[j]] += (p[k] - p[j]) * cot[i];
            lap[v[k]] += (p[j] - p[k]) * cot[i];
        }
        for (int i = 0; i < 3; ++i) {
            if (!obtuse) {
                const int j = (i + 1) % 3, k = (i + 2) % 3;
                const Vec3 eij = p[j] - p[i], eik = p[k] - p[i];
                area[v[i]] += (dot(eij, eij) * cot[k] + dot(eik, eik) * cot[j]) / 8.0;
            } else {
                area[v[i]] += (i == obtuse_at) ? A / 2.0 : A / 4.0;
            }
        }
    };
    for (int j = 0; j + 1 < nr; ++j)
        for (int k = 0; k < na; ++k) {
            const int a = mesh.index(j, k), b = mesh.index(j + 1, k), c = mesh.index(j + 1, k + 1),
                      d = mesh.index(j, k + 1);
            triangle(a, b, c);
            triangle(a, c, d);
        }
    double sum = 0.0, sum2 = 0.0;
    for (int j = 2; j <= nr - 3; ++j)
        for (int k = 0; k < na; ++k) {
            const int i = mesh.index(j, k);
            if (touches_degenerate[i] || area[i] <= 0.0) continue;
            const Vec3 dx = lap[i] * (1.0 / (2.0 * area[i]));
            double h = 0.5 * norm(dx);
            if (dot(dx, mesh.normals[i]) > 0.0) h = -h;
            sum += h;
            sum2 += h * h;
            ++st.count;
        }
    if (st.count > 0) {
        st.mean = sum / st.count;
        st.stddev = std::sqrt(std::max(0.0, sum2 / st.count - st.mean * st.mean));
    }
    return st;
}

struct SurfaceConfig {
    FlowConfig flow{};
    IwasawaConfig iwasawa{};
    /// Start the frame at Phi0 = D (real diagonal unitarizer of the monodromy) instead of I.
    bool unitarize = true;
    double sym_flag_tol = 1e-5;
};

namespace detail {

struct RayResult {
    std::vector<Vec3> points;
    IwasawaResiduals iwasawa{};
    double sym_defect = 0.0;
    std::size_t sym_flagged = 0;
};

inline IwasawaResiduals max_residuals(const IwasawaResiduals& a, const IwasawaResiduals& b) {
    return {std::max(a.unitarity, b.unitarity), std::max(a.plus_loop_tail, b.plus_loop_tail),
            std::max(a.reconstruction, b.reconstruction)};
}

} // namespace detail

/// Frame ODE from z0 = 1 along a spanning tree (the unit circle, then radial rays), Iwasawa
/// splitting at every node, Sym formula. Vertex rings at theta = 0 and theta = 2 pi are computed
/// independently; their distance is the seam mismatch.
inline SurfaceMesh build_surface_from_potential(const PotentialSpec& xi, const DomainGrid& dom,
                                                const LambdaGrid& grid, const SurfaceConfig& cfg = {}) {
    dom.validate();
    const std::size_t m = grid.size();
    const int nr = dom.n_radial, na = dom.n_angular;

    // Angular sweep on |z| = 1 with a tighter tolerance: the monodromy feeds the unitarizer.
    FlowConfig sweep_cfg = cfg.flow;
    sweep_cfg.ode.rtol = std::min(sweep_cfg.ode.rtol, 1e-12);
    sweep_cfg.ode.atol = std::min(sweep_cfg.ode.atol, 1e-14);
    PathSpec circle;
    {
        std::vector<PathSpec::Segment> segs;
        for (int k = 0; k < na; ++k) segs.push_back({cplx(0.0, dom.theta(k)), cplx(0.0, dom.theta(k + 1))});
        circle = PathSpec(std::move(segs));
    }
    const auto sweep = integrate_frame(xi, circle, identity_samples(grid), grid, sweep_cfg);

    SurfaceMesh mesh;
    mesh.n_radial = nr;
    mesh.n_angular = na;
    for (int j = 0; j < nr; ++j) mesh.u.push_back(dom.u(j));
    for (int k = 0; k < na; ++k) mesh.theta.push_back(dom.theta(k));

    const LoopSamples& M_raw = sweep.final();
    mesh.diagnostics.raw_monodromy = closing_report(M_raw);
    LoopSamples D = identity_samples(grid);
    if (cfg.unitarize) {
        auto unit = diagonal_unitarizer(M_raw);
        D = std::move(unit.D);
        mesh.diagnostics.unitarizer_defect = unit.structure_defect;
    }
    mesh.diagnostics.monodromy = closing_report(conjugate_samples(D, M_raw));

    // Radial order: outward from u = 0 through u_j > 0, inward through u_j < 0.
    std::vector<int> outward, inward;
    for (int j = 0; j < nr; ++j) (dom.u(j) >= 0.0 ? outward : inward).push_back(j);
    std::sort(outward.begin(), outward.end(), [&](int a, int b) { return dom.u(a) < dom.u(b); });
    std::sort(inward.begin(), inward.end(), [&](int a, int b) { return dom.u(a) > dom.u(b); });

    std::vector<detail::RayResult> rays(static_cast<std::size_t>(na + 1));
    parallel_for(rays.size(), [&](std::size_t k) {
        const double th = dom.theta(static_cast<int>(k));
        std::vector<LoopSamples> phi(nr, LoopSamples(m));
        for (std::size_t l = 0; l < m; ++l) {
            for (const auto* order : {&outward, &inward}) {
                ComplexMatrix2 cur = sweep.frames[k][l];
                double u0 = 0.0;
                for (int j : *order) {
                    cur = detail::integrate_segment(xi, grid[l], cplx(u0, th), cplx(dom.u(j), th), cur, cfg.flow.ode,
                                                    nullptr);
                    u0 = dom.u(j);
                    phi[j][l] = D[l] * cur;
                }
            }
        }
        auto& ray = rays[k];
        ray.points.resize(nr);
        for (int j = 0; j < nr; ++j) {
            const auto pair = iwasawa_factor(phi[j], grid, cfg.iwasawa);
            ray.iwasawa = detail::max_residuals(ray.iwasawa, pair.residuals);
            const auto sym = sym_bobenko(pair.F, cfg.sym_flag_tol);
            ray.points[j] = sym.point;
            ray.sym_defect = std::max(ray.sym_defect, sym.hermitian_defect);
            ray.sym_flagged += sym.flagged ? 1 : 0;
        }
    });

    mesh.vertices.resize(static_cast<std::size_t>(nr * na));
    mesh.seam.resize(nr);
    for (int k = 0; k <= na; ++k) {
        const auto& ray = rays[k];
        for (int j = 0; j < nr; ++j) (k < na ? mesh.vertices[mesh.index(j, k)] : mesh.seam[j]) = ray.points[j];
        mesh.diagnostics.iwasawa_max = detail::max_residuals(mesh.diagnostics.iwasawa_max, ray.iwasawa);
        mesh.diagnostics.sym_defect_max = std::max(mesh.diagnostics.sym_defect_max, ray.sym_defect);
        mesh.diagnostics.sym_flagged += ray.sym_flagged;
    }
    assemble_topology(mesh);
    mesh.H_stats = mean_curvature_stats(mesh);
    return mesh;
}

inline SurfaceMesh build_surface(const CylinderParams& p, const DomainGrid& dom, const LambdaGrid& grid,
                                 const SurfaceConfig& cfg = {}) {
    return build_surface_from_potential(make_cylinder_potential(p), dom, grid, cfg);
}

/// Delaunay surface of the pure residue potential xi = A dz/z (its monodromy exp(2 pi i A) is
/// already unitary, so the frame starts at Phi0 = I).
inline SurfaceMesh delaunay_reference(const DelaunayResidue& res, const DomainGrid& dom, const LambdaGrid& grid,
                                      SurfaceConfig cfg = {}) {
    if (std::abs(res.a + res.b - 0.5) > 1e-12) throw DomainError("Delaunay residue violates a + b = 1/2");
    cfg.unitarize = false;
    return build_surface_from_potential(make_delaunay_potential(res), dom, grid, cfg);
}

// ---------------------------------------------------------------------------------------------
// Reflection symmetry

struct SymmetryReport {
    Vec3 plane_normal;
    double plane_offset = 0.0;
    /// max |Refl(x(u, theta)) - x(u, -theta)| over vertices, relative to the bbox diagonal.
    double max_deviation = 0.0;
    /// max |Refl(Refl(x)) - x| relative to the bbox diagonal.
    double involution_residual = 0.0;
};

inline Vec3 reflect(const Vec3& x, const Vec3& n, double c) { return x - n * (2.0 * (dot(n, x) - c)); }

/// Pairs (u, theta) with (u, -theta) and fits the plane whose reflection best maps one onto the
/// other: normal along the dominant direction of the pair differences, offset from the midpoints.
inline SymmetryReport reflection_symmetry_check(const SurfaceMesh& mesh) {
    const int nr = mesh.n_radial, na = mesh.n_angular;
    Sym3 scatter{};
    Vec3 any_diff{};
    for (int j = 0; j < nr; ++j)
        for (int k = 0; k < na; ++k) {
            const Vec3 d = mesh.at(j, na - k) - mesh.at(j, k);
            add_outer(scatter, d);
            if (norm(d) > norm(any_diff)) any_diff = d;
        }
    SymmetryReport rep;
    Vec3 n = symmetric_eigen(scatter).vectors[2];
    if (norm(any_diff) == 0.0) {
        // All pairs coincide: every plane through the points works; use the ring-0 PCA normal.
        Sym3 s{};
        Vec3 c{};
        for (const auto& v : mesh.vertices) c += v;
        c *= 1.0 / mesh.vertices.size();
        for (const auto& v : mesh.vertices) add_outer(s, v - c);
        n = symmetric_eigen(s).vectors[0];
    }
    n = normalized(n);
    double offset = 0.0;
    for (int j = 0; j < nr; ++j)
        for (int k = 0; k < na; ++k) offset += dot(n, (mesh.at(j, k) + mesh.at(j, na - k)) * 0.5);
    offset /= static_cast<double>(nr * na);
    const double diag = mesh.bbox_diagonal();
    double dev = 0.0, inv = 0.0;
    for (int j = 0; j < nr; ++j)
        for (int k = 0; k < na; ++k) {
            const Vec3 x = mesh.at(j, k);
            dev = std::max(dev, norm(reflect(x, n, offset) - mesh.at(j, na - k)));
            inv = std::max(inv, norm(reflect(reflect(x, n, offset), n, offset) - x));
        }
    rep.plane_normal = n;
    rep.plane_offset = offset;
    rep.max_deviation = dev / diag;
    rep.involution_residual = inv / diag;
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Axis fits and radial profiles for tubular surfaces

struct Axis {
    Vec3 point;
    Vec3 direction;
};

inline Vec3 ring_centroid(const SurfaceMesh& mesh, int j) {
    Vec3 c{};
    for (int k = 0; k < mesh.n_angular; ++k) c += mesh.at(j, k);
    return c * (1.0 / mesh.n_angular);
}

/// Line through the ring centroids of rings [begin, end) (principal direction).
inline Axis fit_axis(const SurfaceMesh& mesh, int begin = 0, int end = -1) {
    if (end < 0) end = mesh.n_radial;
    if (end - begin < 2) throw DomainError("axis fit needs at least two rings");
    std::vector<Vec3> cs;
    Vec3 mean{};
    for (int j = begin; j < end; ++j) {
        cs.push_back(ring_centroid(mesh, j));
        mean += cs.back();
    }
    mean *= 1.0 / cs.size();
    Sym3 s{};
    for (const auto& c : cs) add_outer(s, c - mean);
    const auto eig = symmetric_eigen(s);
    double ring_scale = 0.0;
    for (int k = 0; k < mesh.n_angular; ++k) ring_scale = std::max(ring_scale, norm(mesh.at(begin, k) - cs.front()));
    if (!(eig.values[2] > 1e-20 * std::max(1.0, ring_scale * ring_scale)) || !std::isfinite(eig.values[2]))
        throw DomainError("axis fit failed: ring centroids do not spread along a line");
    return {mean, normalized(eig.vectors[2])};
}

inline double axis_distance(const Vec3& x, const Axis& axis) {
    const Vec3 d = x - axis.point;
    return norm(d - axis.direction * dot(d, axis.direction));
}

/// stddev / mean of the distances of all vertices to the axis.
inline double axis_distance_spread(const SurfaceMesh& mesh, const Axis& axis) {
    double s = 0.0, s2 = 0.0;
    for (const auto& v : mesh.vertices) {
        const double d = axis_distance(v, axis);
        s += d;
        s2 += d * d;
    }
    const double n = static_cast<double>(mesh.vertices.size());
    const double mean = s / n;
    return std::sqrt(std::max(0.0, s2 / n - mean * mean)) / mean;
}

struct RadialProfile {
    std::vector<double> u;
    std::vector<double> axial;
    std::vector<double> radius;
    /// Radius with the sign of the outward component of the surface normal.
    std::vector<double> signed_radius;
};

inline RadialProfile radial_profile(const SurfaceMesh& mesh, const Axis& axis, int begin = 0, int end = -1) {
    if (end < 0) end = mesh.n_radial;
    RadialProfile p;
    // Orientation of the normal field relative to "outward" is fixed once, on the first ring.
    double orient = 0.0;
    for (int j = begin; j < end; ++j) {
        double r = 0.0, outward = 0.0;
        for (int k = 0; k < mesh.n_angular; ++k) {
            const Vec3 x = mesh.at(j, k);
            const Vec3 d = x - axis.point;
            const Vec3 radial = d - axis.direction * dot(d, axis.direction);
            r += norm(radial);
            outward += dot(normalized(radial), mesh.normals[mesh.index(j, k)]);
        }
        r /= mesh.n_angular;
        if (orient == 0.0) orient = outward >= 0.0 ? 1.0 : -1.0;
        p.u.push_back(j < static_cast<int>(mesh.u.size()) ? mesh.u[j] : j);
        p.axial.push_back(dot(ring_centroid(mesh, j) - axis.point, axis.direction));
        p.radius.push_back(r);
        p.signed_radius.push_back(outward * orient >= 0.0 ? r : -r);
    }
    return p;
}

/// Smallest lag (in units of x) at which the autocorrelation of the mean-free samples has a
/// local maximum after its first zero crossing. x must be increasing and uniformly spaced.
inline double detect_period(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 8 || x.size() != n) return 0.0;
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    std::vector<double> c(n / 2 + 1, 0.0);
    for (std::size_t lag = 0; lag < c.size(); ++lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) s += (y[i] - mean) * (y[i + lag] - mean);
        c[lag] = s / (n - lag);
    }
    if (c[0] <= 0.0) return 0.0;
    std::size_t lag = 1;
    while (lag < c.size() && c[lag] > 0.0) ++lag;
    if (lag >= c.size()) return 0.0;
    std::size_t best = 0;
    for (std::size_t l = lag; l + 1 < c.size() && best == 0; ++l)
        if (c[l] > 0.0 && c[l] >= c[l - 1] && c[l] >= c[l + 1]) best = l;
    if (best == 0) return 0.0;
    // Parabolic refinement of the peak.
    double frac = 0.0;
    if (best > 0 && best + 1 < c.size()) {
        const double den = c[best - 1] - 2.0 * c[best] + c[best + 1];
        if (den < 0.0) frac = 0.5 * (c[best - 1] - c[best + 1]) / den;
    }
    return (static_cast<double>(best) + frac) * (x[1] - x[0]);
}

struct ProfileDiagnostics {
    double period_u = 0.0;
    bool axial_reversal = false;
    bool signed_radius_change = false;
    double min_radius = 0.0;
    double max_radius = 0.0;
};

inline ProfileDiagnostics analyze_profile(const RadialProfile& p) {
    ProfileDiagnostics d;
    d.period_u = detect_period(p.u, p.radius);
    d.min_radius = *std::min_element(p.radius.begin(), p.radius.end());
    d.max_radius = *std::max_element(p.radius.begin(), p.radius.end());
    int dir = 0;
    for (std::size_t i = 1; i < p.axial.size(); ++i) {
        const double step = p.axial[i] - p.axial[i - 1];
        const int s = step > 0 ? 1 : (step < 0 ? -1 : 0);
        if (s != 0 && dir != 0 && s != dir) d.axial_reversal = true;
        if (s != 0) dir = s;
    }
    for (std::size_t i = 1; i < p.signed_radius.size(); ++i)
        if ((p.signed_radius[i] > 0) != (p.signed_radius[0] > 0)) d.signed_radius_change = true;
    return d;
}

struct EndComparison {
    double deviation = 0.0;  // sup |R_cyl - R_ref| / mean R_ref over the window
    double period_u = 0.0;   // reference period in u
    double window_u = 0.0;   // length of the compared window
    double best_shift = 0.0; // phase shift in u of the best match
};

/// Compares the radial profile of the cylinder's z -> 0 end with the reference Delaunay profile.
/// The window starts at the innermost ring and has length min(n_periods * period, max_window_u)
/// in u; the reference is matched up to a shift in u, and the sup-deviation is taken relative to
/// the reference's mean radius. The reference must cover at least two periods.
inline EndComparison end_comparison_detail(const SurfaceMesh& cylinder, const SurfaceMesh& reference,
                                           double n_periods = 1.0,
                                           double max_window_u = std::numeric_limits<double>::infinity()) {
    if (!(n_periods > 0.0)) throw DomainError("end comparison needs a positive number of periods");
    const Axis ref_axis = fit_axis(reference);
    const auto ref = radial_profile(reference, ref_axis);
    const double period = detect_period(ref.u, ref.radius);
    if (!(period > 0.0)) throw DomainError("axis fit failed: reference profile has no detectable period");

    EndComparison out;
    out.period_u = period;
    out.window_u = std::min(n_periods * period, max_window_u);
    const double u_begin = cylinder.u.front();
    int end = 0;
    while (end < cylinder.n_radial && cylinder.u[end] <= u_begin + out.window_u + 1e-12) ++end;
    if (end < 3) throw DomainError("end window holds fewer than three rings");
    const Axis cyl_axis = fit_axis(cylinder, 0, end);
    const auto cyl = radial_profile(cylinder, cyl_axis, 0, end);

    // The reference is sampled directly (no periodic wrap, so the period estimate only sets the
    // window): the shift ranges over all placements of the window inside the reference domain.
    const double mean_r = std::accumulate(ref.radius.begin(), ref.radius.end(), 0.0) / ref.radius.size();
    const double u0 = ref.u.front();
    const double du = ref.u[1] - ref.u[0];
    auto ref_at = [&](double x) {
        const double pos = std::clamp((x - u0) / du, 0.0, static_cast<double>(ref.u.size() - 1));
        const std::size_t i = std::min(static_cast<std::size_t>(pos), ref.u.size() - 2);
        const double f = pos - static_cast<double>(i);
        return ref.radius[i] * (1.0 - f) + ref.radius[i + 1] * f;
    };
    const double lo = ref.u.front() - cyl.u.front(), hi = ref.u.back() - cyl.u.back();
    if (hi < lo) throw DomainError("reference shorter than the end window");
    const int shifts = std::max(1, static_cast<int>(std::ceil((hi - lo) / (0.125 * du))));
    out.deviation = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= shifts; ++s) {
        const double delta = lo + (hi - lo) * s / shifts;
        double dev = 0.0;
        for (std::size_t i = 0; i < cyl.u.size(); ++i)
            dev = std::max(dev, std::abs(cyl.radius[i] - ref_at(cyl.u[i] + delta)));
        if (dev < out.deviation) {
            out.deviation = dev;
            out.best_shift = delta;
        }
    }
    out.deviation /= mean_r;
    return out;
}

inline double end_comparison(const SurfaceMesh& cylinder, const SurfaceMesh& reference, double n_periods = 1.0,
                             double max_window_u = std::numeric_limits<double>::infinity()) {
    return end_comparison_detail(cylinder, reference, n_periods, max_window_u).deviation;
}

} // namespace dpw

#endif // DPW_SURFACE_HPP
