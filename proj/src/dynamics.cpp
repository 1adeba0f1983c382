#include "qsense/dynamics.hpp"

#include <cmath>
#include <memory>
#include <thread>

namespace qsense {

namespace {

using M4 = Eigen::Matrix4cd;
using V4 = Eigen::Vector4cd;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Realization-independent data for one RK4 substep time: pulse envelopes,
/// carrier rotors and the eigenbasis interaction-picture phase factors
/// ph(k,l) = e^{i(Ek - El)t}.
struct Substep {
    double ep, es;
    Complex u20, u12;
    Complex ph01, ph02, ph03, ph12, ph13, ph23;
};

struct Grid {
    double t0 = 0.0;
    double dt = 0.0;
    int nsteps = 0;
};

Grid make_grid(const DriveSpec& d, double dt_request) {
    Grid g;
    g.t0 = d.t_start;
    g.nsteps = static_cast<int>(std::ceil((d.t_final - d.t_start) / dt_request));
    g.dt = (d.t_final - d.t_start) / g.nsteps;
    return g;
}

}  // namespace

void IntegratorConfig::validate(const DriveSpec& drive) const {
    if (!(dt > 0.0)) throw StepTooLarge("IntegratorConfig: dt must be > 0");
    if (backend == Backend::LabFrame) {
        const double bound = 0.02 * kTwoPi / drive.omega_20;
        if (dt > bound) throw StepTooLarge("lab-frame dt exceeds 0.02 * (2 pi / omega_20)");
    } else {
        const double peak = std::max(drive.stokes.peak, drive.pump.peak);
        if (peak > 0.0 && dt > 0.05 / peak)
            throw StepTooLarge("rotating-frame dt exceeds 0.05 / max pulse peak");
    }
}

namespace detail {

/// Shared per-(system, drive, dt) machinery; const and reusable across
/// realizations and threads.
class Solver {
  public:
    Solver(const SystemParams& p, const DriveSpec& d, const IntegratorConfig& cfg)
        : drive_(d), cfg_(cfg), frame_(build_eigenframe(p)), grid_(make_grid(d, cfg.dt)) {
        cfg.validate(d);
        drive_.validate();
        const Matrix vd = frame_.basis.adjoint();
        z1_ = (vd * sigma1z() * frame_.basis).eval();
        z2_ = (vd * sigma2z() * frame_.basis).eval();
        const Matrix x = (vd * sigma_x_total() * frame_.basis).eval();
        x02_ = x(0, 2);
        x12_ = x(1, 2);
        h0_lab_ = build_h_sys(p);
        if (cfg.backend == Backend::RotatingFrame) build_table();
    }

    const EigenFrame& frame() const { return frame_; }
    const Grid& grid() const { return grid_; }

    RunResult run_pure(double d1, double d2, int stride, std::vector<TraceRow>* trace) const {
        return cfg_.backend == Backend::RotatingFrame
                   ? run_pure_rotating(d1, d2, stride, trace, nullptr, 0.0, nullptr)
                   : run_pure_lab(d1, d2, stride, trace);
    }

    RunResult run_lindblad(const MarkovSpec& spec, int stride, std::vector<TraceRow>* trace) const;
    RunResult run_trajectories(const MarkovSpec& spec, int m, std::uint64_t seed) const;
    XiEstimate xi_trajectories(const MarkovSpec& spec, int m, std::uint64_t seed,
                               bool parallel) const;

  private:
    RunResult run_pure_rotating(double d1, double d2, int stride, std::vector<TraceRow>* trace,
                                const M4* jump_eig, double jump_scale, RngStream* rng) const;
    RunResult run_pure_lab(double d1, double d2, int stride, std::vector<TraceRow>* trace) const;

    void build_table() {
        const int n = 2 * grid_.nsteps + 1;
        table_.resize(n);
        const double half = 0.5 * grid_.dt;
        const auto& e = frame_.energies;
        for (int i = 0; i < n; ++i) {
            const double t = grid_.t0 + half * i;
            Substep& s = table_[i];
            s.ep = envelope(drive_.pump, t);
            s.es = envelope(drive_.stokes, t);
            s.u20 = std::polar(1.0, drive_.omega_20 * t);
            s.u12 = std::polar(1.0, drive_.omega_12 * t);
            const Complex r0 = std::polar(1.0, e(0) * t), r1 = std::polar(1.0, e(1) * t);
            const Complex r2 = std::polar(1.0, e(2) * t), r3 = std::polar(1.0, e(3) * t);
            s.ph01 = r0 * std::conj(r1);
            s.ph02 = r0 * std::conj(r2);
            s.ph03 = r0 * std::conj(r3);
            s.ph12 = r1 * std::conj(r2);
            s.ph13 = r1 * std::conj(r3);
            s.ph23 = r2 * std::conj(r3);
        }
    }

    /// Interaction-picture Hamiltonian at substep i for a (constant)
    /// eigenbasis noise matrix `noise`.
    inline void assemble(int i, const M4& noise, M4& h) const {
        const Substep& s = table_[i];
        h(0, 0) = noise(0, 0);
        h(1, 1) = noise(1, 1);
        h(2, 2) = noise(2, 2);
        h(3, 3) = noise(3, 3);
        h(0, 1) = noise(0, 1) * s.ph01;
        h(0, 2) = noise(0, 2) * s.ph02;
        h(0, 3) = noise(0, 3) * s.ph03;
        h(1, 2) = noise(1, 2) * s.ph12;
        h(1, 3) = noise(1, 3) * s.ph13;
        h(2, 3) = noise(2, 3) * s.ph23;
        const double w = s.ep * s.u20.real() + s.es * s.u12.real();
        h(0, 2) += w * x02_ * s.ph02;
        h(1, 2) += w * x12_ * s.ph12;
        h(1, 0) = std::conj(h(0, 1));
        h(2, 0) = std::conj(h(0, 2));
        h(3, 0) = std::conj(h(0, 3));
        h(2, 1) = std::conj(h(1, 2));
        h(3, 1) = std::conj(h(1, 3));
        h(3, 2) = std::conj(h(2, 3));
    }

    /// Eigenbasis noise matrix of a quasistatic draw.
    M4 noise_eig(double d1, double d2) const {
        return (-0.5 * d1 * z1_ - 0.5 * d2 * z2_);
    }

    RunResult finish_pure(const V4& psi, double max_p3) const {
        const double norm = psi.norm();
        if (std::abs(norm - 1.0) > 1e-6)
            throw NormDrift("propagation: state norm drifted beyond 1e-6");
        RunResult out;
        out.max_p3 = max_p3;
        for (int k = 0; k < 4; ++k) out.populations(k) = std::norm(psi(k));
        // Undo the interaction picture, rotate to the product basis.
        const double tf = grid_.t0 + grid_.dt * grid_.nsteps;
        V4 lab;
        for (int k = 0; k < 4; ++k)
            lab(k) = psi(k) * std::polar(1.0, -frame_.energies(k) * tf);
        const V4 prod = frame_.basis * lab;
        out.xi = std::norm(prod(3));
        out.final_state = prod * prod.adjoint();
        return out;
    }

    DriveSpec drive_;
    IntegratorConfig cfg_;
    EigenFrame frame_;
    Grid grid_;
    M4 z1_, z2_;  // sigma_i^z in the eigenbasis
    Complex x02_, x12_;
    Matrix h0_lab_;
    std::vector<Substep> table_;
};

RunResult Solver::run_pure_rotating(double d1, double d2, int stride,
                                    std::vector<TraceRow>* trace, const M4* jump_eig,
                                    double jump_scale, RngStream* rng) const {
    const M4 base = noise_eig(d1, d2);
    V4 psi = V4::Zero();
    psi(0) = 1.0;
    double max_p3 = 0.0;
    const double dt = grid_.dt;
    M4 h1, h2, h3;
    M4 noise = base;
    auto record = [&](int step) {
        if (!trace || stride <= 0 || step % stride != 0) return;
        TraceRow row;
        row.t = grid_.t0 + dt * step;
        for (int k = 0; k < 4; ++k) row.p[k] = std::norm(psi(k));
        V4 lab;
        for (int k = 0; k < 4; ++k)
            lab(k) = psi(k) * std::polar(1.0, -frame_.energies(k) * row.t);
        row.p_ee = std::norm((frame_.basis * lab)(3));
        trace->push_back(row);
    };
    record(0);
    if (!jump_eig) assemble(0, noise, h3);  // reused as h1 of the first step
    for (int n = 0; n < grid_.nsteps; ++n) {
        if (jump_eig) {
            noise = base + (jump_scale * rng->normal()) * (*jump_eig);
            assemble(2 * n, noise, h1);
        } else {
            h1 = h3;  // same substep index (2n) as the previous step's 2n + 2
        }
        assemble(2 * n + 1, noise, h2);
        assemble(2 * n + 2, noise, h3);
        const Complex mi(0.0, -1.0);
        const V4 k1 = mi * (h1 * psi);
        const V4 k2 = mi * (h2 * (psi + (0.5 * dt) * k1));
        const V4 k3 = mi * (h2 * (psi + (0.5 * dt) * k2));
        const V4 k4 = mi * (h3 * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // The Hamiltonian is Hermitian at every instant, so the exact step
        // is unitary; projecting back onto the sphere removes the only
        // secular error RK4 accumulates (its radial component), keeping the
        // norm invariant satisfied for strong noise draws at coarse steps.
        psi /= psi.norm();
        max_p3 = std::max(max_p3, std::norm(psi(3)));
        record(n + 1);
    }
    return finish_pure(psi, max_p3);
}

RunResult Solver::run_pure_lab(double d1, double d2, int stride,
                               std::vector<TraceRow>* trace) const {
    const Matrix h0 = h0_lab_ + build_h_noise(d1, d2);
    const Matrix x = sigma_x_total();
    V4 psi = frame_.basis.col(0);
    const Matrix vd = frame_.basis.adjoint();
    double max_p3 = 0.0;
    const double dt = grid_.dt;
    auto hamil = [&](double t) -> M4 {
        const double w = envelope(drive_.pump, t) * std::cos(drive_.omega_20 * t) +
                         envelope(drive_.stokes, t) * std::cos(drive_.omega_12 * t);
        return h0 + w * x;
    };
    auto record = [&](int step) {
        if (!trace || stride <= 0 || step % stride != 0) return;
        TraceRow row;
        row.t = grid_.t0 + dt * step;
        const V4 eig = vd * psi;
        for (int k = 0; k < 4; ++k) row.p[k] = std::norm(eig(k));
        row.p_ee = std::norm(psi(3));
        trace->push_back(row);
    };
    record(0);
    for (int n = 0; n < grid_.nsteps; ++n) {
        const double t = grid_.t0 + dt * n;
        const M4 h1 = hamil(t), h2 = hamil(t + 0.5 * dt), h3 = hamil(t + dt);
        const Complex mi(0.0, -1.0);
        const V4 k1 = mi * (h1 * psi);
        const V4 k2 = mi * (h2 * (psi + (0.5 * dt) * k1));
        const V4 k3 = mi * (h2 * (psi + (0.5 * dt) * k2));
        const V4 k4 = mi * (h3 * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        psi /= psi.norm();  // exact step is unitary; see run_pure_rotating
        max_p3 = std::max(max_p3, std::norm((vd * psi)(3)));
        record(n + 1);
    }
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-6)
        throw NormDrift("propagation: state norm drifted beyond 1e-6");
    RunResult out;
    out.max_p3 = max_p3;
    const V4 eig = vd * psi;
    for (int k = 0; k < 4; ++k) out.populations(k) = std::norm(eig(k));
    out.xi = std::norm(psi(3));
    out.final_state = psi * psi.adjoint();
    return out;
}

RunResult Solver::run_lindblad(const MarkovSpec& spec, int stride,
                               std::vector<TraceRow>* trace) const {
    spec.validate();
    const Dissipator dis = build_dissipator(spec);
    if (cfg_.backend == Backend::LabFrame)
        throw ConfigError("propagate_lindblad: lab-frame backend not supported");
    const M4 a_eig = (frame_.basis.adjoint() * dis.op * frame_.basis).eval();
    const M4 a2_eig = (a_eig * a_eig).eval();
    const double rate = dis.rate;

    const M4 zero = M4::Zero();
    M4 rho = M4::Zero();
    rho(0, 0) = 1.0;
    const double dt = grid_.dt;

    // A and A^2 conjugated into the interaction picture: both transform
    // elementwise as M(k,l) e^{i(Ek - El)t} because the frame is diagonal.
    auto phase_conj = [&](int i, const M4& m, M4& out) {
        const Substep& s = table_[i];
        out(0, 0) = m(0, 0); out(1, 1) = m(1, 1);
        out(2, 2) = m(2, 2); out(3, 3) = m(3, 3);
        out(0, 1) = m(0, 1) * s.ph01;
        out(0, 2) = m(0, 2) * s.ph02;
        out(0, 3) = m(0, 3) * s.ph03;
        out(1, 2) = m(1, 2) * s.ph12;
        out(1, 3) = m(1, 3) * s.ph13;
        out(2, 3) = m(2, 3) * s.ph23;
        out(1, 0) = std::conj(out(0, 1));
        out(2, 0) = std::conj(out(0, 2));
        out(3, 0) = std::conj(out(0, 3));
        out(2, 1) = std::conj(out(1, 2));
        out(3, 2) = std::conj(out(2, 3));
        out(3, 1) = std::conj(out(1, 3));
    };

    M4 h, at, a2t;
    auto rhs = [&](int i, const M4& r) -> M4 {
        assemble(i, zero, h);
        phase_conj(i, a_eig, at);
        phase_conj(i, a2_eig, a2t);
        const Complex mi(0.0, -1.0);
        M4 out = mi * (h * r - r * h);
        out += rate * (at * r * at - 0.5 * (a2t * r + r * a2t));
        return out;
    };
    auto record = [&](int step) {
        if (!trace || stride <= 0 || step % stride != 0) return;
        TraceRow row;
        row.t = grid_.t0 + dt * step;
        for (int k = 0; k < 4; ++k) row.p[k] = rho(k, k).real();
        V4 phases;
        for (int k = 0; k < 4; ++k)
            phases(k) = std::polar(1.0, -frame_.energies(k) * row.t);
        const M4 prod = frame_.basis *
                        (phases.asDiagonal() * rho * phases.conjugate().asDiagonal()) *
                        frame_.basis.adjoint();
        row.p_ee = prod(3, 3).real();
        trace->push_back(row);
    };
    record(0);
    for (int n = 0; n < grid_.nsteps; ++n) {
        const M4 k1 = rhs(2 * n, rho);
        const M4 k2 = rhs(2 * n + 1, rho + (0.5 * dt) * k1);
        const M4 k3 = rhs(2 * n + 1, rho + (0.5 * dt) * k2);
        const M4 k4 = rhs(2 * n + 2, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        record(n + 1);
    }

    const double tf = grid_.t0 + dt * grid_.nsteps;
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
        throw PositivityLoss("lindblad: trace drifted beyond 1e-8");
    Eigen::SelfAdjointEigenSolver<M4> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-6)
        throw PositivityLoss("lindblad: eigenvalue below -1e-6");

    RunResult out;
    for (int k = 0; k < 4; ++k) out.populations(k) = rho(k, k).real();
    out.max_p3 = out.populations(3);
    V4 phases;
    for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -frame_.energies(k) * tf);
    const M4 lab = phases.asDiagonal() * rho * phases.conjugate().asDiagonal();
    const M4 prod = frame_.basis * lab * frame_.basis.adjoint();
    out.final_state = prod;
    out.xi = prod(3, 3).real();
    return out;
}

RunResult Solver::run_trajectories(const MarkovSpec& spec, int m, std::uint64_t seed) const {
    spec.validate();
    if (m < 1) throw BadRange("propagate_trajectories: m must be >= 1");
    if (cfg_.backend == Backend::LabFrame)
        throw ConfigError("propagate_trajectories: lab-frame backend not supported");
    const Dissipator dis = build_dissipator(spec);
    const M4 a_eig = (frame_.basis.adjoint() * dis.op * frame_.basis).eval();
    // White noise, piecewise constant per step: delta_n = sqrt(2 gamma / dt) n,
    // coupling -delta_n A.
    const double scale = -std::sqrt(2.0 * spec.gamma / grid_.dt);

    Matrix rho_sum = Matrix::Zero(4, 4);
    Eigen::Vector4d pops = Eigen::Vector4d::Zero();
    double max_p3 = 0.0;
    for (int j = 0; j < m; ++j) {
        RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
        const RunResult one =
            run_pure_rotating(0.0, 0.0, 0, nullptr, &a_eig, scale, &rng);
        rho_sum += one.final_state;
        pops += one.populations;
        max_p3 = std::max(max_p3, one.max_p3);
    }
    RunResult out;
    out.final_state = rho_sum / static_cast<double>(m);
    out.populations = pops / static_cast<double>(m);
    out.max_p3 = max_p3;
    out.xi = out.final_state(3, 3).real();
    return out;
}

XiEstimate Solver::xi_trajectories(const MarkovSpec& spec, int m, std::uint64_t seed,
                                   bool parallel) const {
    spec.validate();
    if (m < 1) throw BadRange("xi_trajectories: N must be >= 1");
    if (cfg_.backend == Backend::LabFrame)
        throw ConfigError("xi_trajectories: lab-frame backend not supported");
    const Dissipator dis = build_dissipator(spec);
    const M4 a_eig = (frame_.basis.adjoint() * dis.op * frame_.basis).eval();
    const double scale = -std::sqrt(2.0 * spec.gamma / grid_.dt);

    std::vector<double> xi(static_cast<std::size_t>(m));
    auto work = [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j) {
            RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
            xi[static_cast<std::size_t>(j)] =
                run_pure_rotating(0.0, 0.0, 0, nullptr, &a_eig, scale, &rng).xi;
        }
    };
    unsigned hw = std::thread::hardware_concurrency();
    if (!parallel || hw < 2 || m < 4) {
        work(0, m);
    } else {
        const int nthreads = static_cast<int>(std::min<unsigned>(hw, 16));
        std::vector<std::thread> pool;
        const int chunk = (m + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int lo = t * chunk, hi = std::min(m, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    double mean = 0.0;
    for (int j = 0; j < m; ++j) mean += xi[static_cast<std::size_t>(j)];
    mean /= m;
    double var = 0.0;
    for (int j = 0; j < m; ++j) {
        const double dlt = xi[static_cast<std::size_t>(j)] - mean;
        var += dlt * dlt;
    }
    const double stderr_ = m > 1 ? std::sqrt(var / (static_cast<double>(m) * (m - 1))) : 0.0;
    return {mean, stderr_};
}

}  // namespace detail

using detail::Solver;

TransferEngine::TransferEngine(const SystemParams& p, const DriveSpec& d,
                               const IntegratorConfig& cfg)
    : impl_(std::make_unique<Solver>(p, d, cfg)) {}

TransferEngine::~TransferEngine() = default;
TransferEngine::TransferEngine(TransferEngine&&) noexcept = default;
TransferEngine& TransferEngine::operator=(TransferEngine&&) noexcept = default;

const EigenFrame& TransferEngine::frame() const { return impl_->frame(); }

RunResult TransferEngine::run_quasistatic(const QuasistaticRealization& r) const {
    return impl_->run_pure(r.delta1, r.delta2, 0, nullptr);
}

RunResult TransferEngine::run_lindblad(const MarkovSpec& spec) const {
    return impl_->run_lindblad(spec, 0, nullptr);
}

RunResult TransferEngine::run_trajectories(const MarkovSpec& spec, int m,
                                           std::uint64_t seed) const {
    return impl_->run_trajectories(spec, m, seed);
}

XiEstimate TransferEngine::xi_trajectories(const MarkovSpec& spec,
                                           const MonteCarloConfig& mc) const {
    return impl_->xi_trajectories(spec, mc.n_realizations, mc.master_seed, mc.parallel);
}

XiEstimate TransferEngine::xi_estimate(const ClassParams& params,
                                       const MonteCarloConfig& mc) const {
    if (mc.n_realizations < 1) throw BadRange("xi_estimate: N must be >= 1");
    if (const auto* mk = std::get_if<MarkovSpec>(&params)) {
        const RunResult r = impl_->run_lindblad(*mk, 0, nullptr);
        return {r.xi, 0.0};
    }
    const auto& qs = std::get<QuasistaticSpec>(params);
    if (qs.sigma == 0.0) {
        // Every draw is (0, 0); one solve gives the exact ensemble value.
        qs.validate();
        return {impl_->run_pure(0.0, 0.0, 0, nullptr).xi, 0.0};
    }
    const int n = mc.n_realizations;
    std::vector<double> xi(static_cast<std::size_t>(n));
    auto work = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            RngStream rng(derive_seed(mc.master_seed, static_cast<std::uint64_t>(r)));
            const QuasistaticRealization real = sample_quasistatic(qs, rng);
            xi[static_cast<std::size_t>(r)] =
                impl_->run_pure(real.delta1, real.delta2, 0, nullptr).xi;
        }
    };
    unsigned hw = std::thread::hardware_concurrency();
    if (!mc.parallel || hw < 2 || n < 4) {
        work(0, n);
    } else {
        const int nthreads = static_cast<int>(std::min<unsigned>(hw, 16));
        std::vector<std::thread> pool;
        const int chunk = (n + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int lo = t * chunk, hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    // Accumulate in realization order so the result is independent of the
    // execution schedule.
    double mean = 0.0;
    for (int r = 0; r < n; ++r) mean += xi[static_cast<std::size_t>(r)];
    mean /= n;
    double var = 0.0;
    for (int r = 0; r < n; ++r) {
        const double dlt = xi[static_cast<std::size_t>(r)] - mean;
        var += dlt * dlt;
    }
    const double stderr_ = n > 1 ? std::sqrt(var / (static_cast<double>(n) * (n - 1))) : 0.0;
    return {mean, stderr_};
}

RunResult propagate_quasistatic(const SystemParams& p, const DriveSpec& d,
                                const QuasistaticRealization& r,
                                const IntegratorConfig& cfg) {
    return Solver(p, d, cfg).run_pure(r.delta1, r.delta2, 0, nullptr);
}

RunResult propagate_quasistatic_traced(const SystemParams& p, const DriveSpec& d,
                                       const QuasistaticRealization& r,
                                       const IntegratorConfig& cfg, int sample_stride,
                                       std::vector<TraceRow>& trace) {
    return Solver(p, d, cfg).run_pure(r.delta1, r.delta2, sample_stride, &trace);
}

RunResult propagate_lindblad(const SystemParams& p, const DriveSpec& d,
                             const MarkovSpec& spec, const IntegratorConfig& cfg) {
    return Solver(p, d, cfg).run_lindblad(spec, 0, nullptr);
}

RunResult propagate_lindblad_traced(const SystemParams& p, const DriveSpec& d,
                                    const MarkovSpec& spec, const IntegratorConfig& cfg,
                                    int sample_stride, std::vector<TraceRow>& trace) {
    return Solver(p, d, cfg).run_lindblad(spec, sample_stride, &trace);
}

RunResult propagate_trajectories(const SystemParams& p, const DriveSpec& d,
                                 const MarkovSpec& spec, int m,
                                 const IntegratorConfig& cfg, std::uint64_t seed) {
    return Solver(p, d, cfg).run_trajectories(spec, m, seed);
}

XiEstimate monte_carlo_xi(const SystemParams& p, const DriveSpec& d,
                          const ClassParams& params, const MonteCarloConfig& mc,
                          const IntegratorConfig& cfg) {
    return TransferEngine(p, d, cfg).xi_estimate(params, mc);
}

}  // namespace qsense
