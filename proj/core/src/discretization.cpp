#include "rodsim/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "general_element.hpp"
#include "parallel.hpp"
#include "rodsim/errors.hpp"
#include "ti_element.hpp"

namespace rodsim {

LoadCase LoadCase::effective() const {
    LoadCase c;
    c.distributed_force = factor * distributed_force;
    c.distributed_tangent_moment = factor * distributed_tangent_moment;
    c.tip_force = factor * tip_force;
    c.tip_tangent_moment = factor * tip_tangent_moment;
    c.tip_moment = factor * tip_moment;
    return c;
}

LoadCase LoadCase::scaled(double lambda) const {
    LoadCase c = *this;
    c.factor *= lambda;
    return c;
}

LoadCase LoadCase::rotated(const Mat3& Q) const {
    LoadCase c = *this;
    c.distributed_force = Q * distributed_force;
    c.tip_force = Q * tip_force;
    c.tip_moment = Q * tip_moment;
    return c;
}

void LoadCase::validate() const {
    if (!distributed_force.allFinite() || !tip_force.allFinite() || !tip_moment.allFinite() ||
        !std::isfinite(distributed_tangent_moment) || !std::isfinite(tip_tangent_moment) ||
        !std::isfinite(factor)) {
        throw ValidationError("loads: non-finite entry");
    }
}

}  // namespace rodsim

namespace rodsim::fem {

using detail::Vec14;

Grid::Grid(std::vector<double> nodes, int gauss_points)
    : nodes_(std::move(nodes)), rule_(gauss_legendre(gauss_points)) {
    if (nodes_.size() < 2) throw ValidationError("grid: need at least one element");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i + 1] > nodes_[i])) {
            throw ValidationError("grid: breakpoints must increase strictly");
        }
    }
}

Grid Grid::uniform(double length, int elements, int gauss_points) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError("geometry.length must be positive");
    }
    if (elements < 1) throw ValidationError("geometry.elements must be at least 1");
    std::vector<double> s(elements + 1);
    for (int i = 0; i <= elements; ++i) s[i] = length * i / elements;
    return Grid(std::move(s), gauss_points);
}

int Grid::locate(double s) const {
    const double tol = 1e-12 * length();
    if (s < nodes_.front() - tol || s > nodes_.back() + tol) {
        throw ValidationError("interpolate: s = " + std::to_string(s) + " outside [0, L]");
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
    int e = static_cast<int>(it - nodes_.begin()) - 1;
    return std::clamp(e, 0, elements() - 1);
}

VecX DofVector::pack() const {
    VecX x(kNodeDofs * nodes());
    for (int i = 0; i < nodes(); ++i) {
        x.segment<3>(kNodeDofs * i) = r[i];
        x.segment<3>(kNodeDofs * i + 3) = t[i];
        x[kNodeDofs * i + 6] = psi[i];
    }
    return x;
}

void DofVector::unpack(const VecX& x) {
    const int n = static_cast<int>(x.size()) / kNodeDofs;
    r.resize(n);
    t.resize(n);
    psi.resize(n);
    for (int i = 0; i < n; ++i) {
        r[i] = x.segment<3>(kNodeDofs * i);
        t[i] = x.segment<3>(kNodeDofs * i + 3);
        psi[i] = x[kNodeDofs * i + 6];
    }
}

DofVector DofVector::from_packed(const VecX& x) {
    DofVector d;
    d.unpack(x);
    return d;
}

DofVector DofVector::straight(const Grid& grid, const Clamp& clamp) {
    DofVector d;
    const int n = grid.nodes();
    const Vec3 dir = clamp.direction();
    d.r.resize(n);
    d.t.assign(n, dir);
    d.psi.assign(n, 0.0);
    for (int i = 0; i < n; ++i) d.r[i] = clamp.position + (grid.s(i) - grid.s(0)) * dir;
    return d;
}

void DofVector::check(const Grid& grid) const {
    const std::size_t n = static_cast<std::size_t>(grid.nodes());
    if (r.size() != n || t.size() != n || psi.size() != n) {
        throw ValidationError("dofs: node count does not match the grid");
    }
    if (!rotations.empty() && rotations.size() != n) {
        throw ValidationError("dofs: rotation count does not match the grid");
    }
}

FieldPoint interpolate(const Grid& grid, const DofVector& dofs, double s) {
    dofs.check(grid);
    const int e = grid.locate(s);
    const double h = grid.h(e);
    const double x = std::clamp((s - grid.s(e)) / h, 0.0, 1.0);
    const detail::HermiteT<double> H(x);
    const double ddd[4] = {12.0, 6.0, -12.0, 6.0};
    const Vec3 c[4] = {dofs.r[e], h * dofs.t[e], dofs.r[e + 1], h * dofs.t[e + 1]};
    FieldPoint p;
    p.r = p.rp = p.rpp = p.rppp = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        p.r += H.N[k] * c[k];
        p.rp += H.dN[k] / h * c[k];
        p.rpp += H.ddN[k] / (h * h) * c[k];
        p.rppp += ddd[k] / (h * h * h) * c[k];
    }
    p.psi = (1.0 - x) * dofs.psi[e] + x * dofs.psi[e + 1];
    p.psi_p = (dofs.psi[e + 1] - dofs.psi[e]) / h;
    return p;
}

namespace {

detail::TiElementData element_data(const Grid& grid, int e, const rod::MaterialLaw& law,
                                   const LoadCase& loads) {
    detail::TiElementData d;
    d.h = grid.h(e);
    d.rule = &grid.rule();
    d.EA = law.EA;
    d.EI = law.EI1;
    d.GJ = law.GJ;
    d.nbar = loads.distributed_force;
    d.mbar = loads.distributed_tangent_moment;
    return d;
}

}  // namespace

double assemble_energy(const Grid& grid, const DofVector& dofs, const rod::MaterialLaw& law,
                       const LoadCase& loads_in, const AssemblyOptions& opt) {
    dofs.check(grid);
    const LoadCase loads = loads_in.effective();
    const VecX x = dofs.pack();
    std::vector<double> parts(grid.elements());
    rodsim::detail::parallel_for(grid.elements(), opt.threads, [&](int e) {
        const Vec14<double> xe = x.segment<14>(kNodeDofs * e);
        parts[e] = detail::ti_element_energy<double>(xe, element_data(grid, e, law, loads));
    });
    double E = 0.0;
    for (double p : parts) E += p;
    const int n = grid.nodes() - 1;
    E -= loads.tip_force.dot(dofs.r[n]) + loads.tip_tangent_moment * dofs.psi[n];
    return E;
}

VecX assemble_gradient(const Grid& grid, const DofVector& dofs, const rod::MaterialLaw& law,
                       const LoadCase& loads_in, const AssemblyOptions& opt) {
    dofs.check(grid);
    const LoadCase loads = loads_in.effective();
    const VecX x = dofs.pack();
    std::vector<Vec14<double>> parts(grid.elements());
    rodsim::detail::parallel_for(grid.elements(), opt.threads, [&](int e) {
        const Vec14<double> xe = x.segment<14>(kNodeDofs * e);
        parts[e] = detail::ti_element_gradient<double>(xe, element_data(grid, e, law, loads));
    });
    VecX g = VecX::Zero(x.size());
    for (int e = 0; e < grid.elements(); ++e) g.segment<14>(kNodeDofs * e) += parts[e];
    const int n = grid.nodes() - 1;
    g.segment<3>(kNodeDofs * n) -= loads.tip_force;
    g[kNodeDofs * n + 6] -= loads.tip_tangent_moment;
    return g;
}

SparseMatrix assemble_hessian(const Grid& grid, const DofVector& dofs,
                              const rod::MaterialLaw& law, const AssemblyOptions& opt) {
    dofs.check(grid);
    const VecX x = dofs.pack();
    const LoadCase none;
    std::vector<Eigen::Matrix<double, 14, 14>> parts(grid.elements());
    rodsim::detail::parallel_for(grid.elements(), opt.threads, [&](int e) {
        const Vec14<double> xe = x.segment<14>(kNodeDofs * e);
        const detail::TiElementData data = element_data(grid, e, law, none);
        ad::jacobian<14, 14>(
            [&](const Vec14<ad::Grad<14>>& xs) { return detail::ti_element_gradient(xs, data); }, xe,
            parts[e]);
    });
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(grid.elements()) * 196);
    for (int e = 0; e < grid.elements(); ++e) {
        const int base = kNodeDofs * e;
        for (int i = 0; i < 14; ++i) {
            for (int j = 0; j < 14; ++j) {
                const double v = 0.5 * (parts[e](i, j) + parts[e](j, i));
                if (v != 0.0) trip.emplace_back(base + i, base + j, v);
            }
        }
    }
    SparseMatrix H(x.size(), x.size());
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

VecX assemble_load_vector(const Grid& grid, const LoadCase& loads_in) {
    const LoadCase loads = loads_in.effective();
    VecX f = VecX::Zero(kNodeDofs * grid.nodes());
    const QuadRule& q = grid.rule();
    for (int e = 0; e < grid.elements(); ++e) {
        const double h = grid.h(e);
        const int base = kNodeDofs * e;
        for (std::size_t k = 0; k < q.xi.size(); ++k) {
            const detail::Hermite H(q.xi[k]);
            const double wh = q.w[k] * h;
            for (int a = 0; a < 4; ++a) {
                const double hs = (a % 2 == 1) ? h : 1.0;
                f.segment<3>(base + detail::kSlot[a]) += (wh * H.N[a] * hs) * loads.distributed_force;
            }
            f[base + detail::kPsiA] += wh * (1.0 - q.xi[k]) * loads.distributed_tangent_moment;
            f[base + detail::kPsiB] += wh * q.xi[k] * loads.distributed_tangent_moment;
        }
    }
    const int n = grid.nodes() - 1;
    f.segment<3>(kNodeDofs * n) += loads.tip_force;
    f[kNodeDofs * n + 6] += loads.tip_tangent_moment;
    return f;
}

double ConstraintResiduals::max_abs() const {
    double m = 0.0;
    for (const Vec2& c : shear) m = std::max(m, c.cwiseAbs().maxCoeff());
    for (double c : twist) m = std::max(m, std::abs(c));
    return m;
}

ConstraintResiduals assemble_constraints(const Grid& grid, const DofVector& dofs) {
    dofs.check(grid);
    if (!dofs.has_rotations()) {
        throw ValidationError("assemble_constraints: rotation dofs are required");
    }
    ConstraintResiduals out;
    out.shear.resize(grid.nodes());
    for (int i = 0; i < grid.nodes(); ++i) {
        const Vec3 x = dofs.rotations[i].transpose() * dofs.t[i];
        out.shear[i] = Vec2(x[1], -x[0]);
    }
    out.twist.resize(grid.elements());
    for (int e = 0; e < grid.elements(); ++e) {
        const double phi = detail::relative_twist<double>(dofs.rotations[e], dofs.rotations[e + 1]);
        out.twist[e] = so3::wrap_angle((dofs.psi[e + 1] - dofs.psi[e]) - phi);
    }
    return out;
}

DofMap DofMap::clamped(const Grid& grid, const Clamp& clamp) {
    const int full = kNodeDofs * grid.nodes();
    DofMap m;
    m.offset_ = VecX::Zero(full);
    if (clamp.free) {
        m.B_.resize(full, full);
        m.B_.setIdentity();
        return m;
    }
    const int free = full - kNodeDofs + 1;
    std::vector<Eigen::Triplet<double>> trip;
    const Vec3 dir = clamp.direction();
    for (int k = 0; k < 3; ++k) {
        if (dir[k] != 0.0) trip.emplace_back(3 + k, 0, dir[k]);
    }
    for (int i = kNodeDofs; i < full; ++i) trip.emplace_back(i, i - kNodeDofs + 1, 1.0);
    m.B_.resize(full, free);
    m.B_.setFromTriplets(trip.begin(), trip.end());
    m.offset_.segment<3>(0) = clamp.position;
    return m;
}

SparseMatrix DofMap::reduce(const SparseMatrix& H) const {
    SparseMatrix BtHB = B_.transpose() * H * B_;
    BtHB.makeCompressed();
    return BtHB;
}

}  // namespace rodsim::fem
