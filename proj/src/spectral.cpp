#include "stratwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace stratwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(int k, int n) { return ((k % n) + n) % n; }

// FFTW plans are created once per resolution under a lock and executed with
// the new-array interface; FFTW_UNALIGNED lets us run them on plain vectors.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan forward(const Resolution& res) { return get(res, true); }
    fftw_plan backward(const Resolution& res) { return get(res, false); }

  private:
    fftw_plan get(const Resolution& res, bool fwd) {
        std::scoped_lock lock(mu_);
        auto key = std::make_tuple(res.nx, res.ny, res.nz, fwd);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<double> real(res.grid_count());
        std::vector<cplx> spec(res.coeff_count());
        fftw_plan p;
        if (fwd) {
            p = fftw_plan_dft_r2c_3d(
                res.nx, res.ny, res.nz, real.data(),
                reinterpret_cast<fftw_complex*>(spec.data()),
                FFTW_ESTIMATE | FFTW_UNALIGNED);
        } else {
            p = fftw_plan_dft_c2r_3d(
                res.nx, res.ny, res.nz,
                reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        if (!p) throw Error("fftw plan creation failed");
        plans_[key] = p;
        return p;
    }

    std::mutex mu_;
    std::map<std::tuple<int, int, int, bool>, fftw_plan> plans_;
};

}  // namespace

double WaveIndex::kh1() const { return kTwoPi * kx; }
double WaveIndex::kh2() const { return kTwoPi * ky; }
double WaveIndex::kh_norm() const {
    return kTwoPi * std::sqrt(double(kx) * kx + double(ky) * ky);
}
double WaveIndex::kz_phys() const { return kTwoPi * kz; }
double WaveIndex::k_norm() const {
    return kTwoPi *
           std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
}
int WaveIndex::max_abs() const {
    return std::max({std::abs(kx), std::abs(ky), std::abs(kz)});
}

Parity product_parity(Parity a, Parity b) {
    return a == b ? Parity::EvenInZ : Parity::OddInZ;
}

Parity flip(Parity p) {
    return p == Parity::EvenInZ ? Parity::OddInZ : Parity::EvenInZ;
}

Resolution make_resolution(int nx, int ny, int nz) {
    if (nx < 4 || ny < 4 || nz < 4)
        throw DomainError("resolution must be at least 4 per axis");
    if (nx % 2 || ny % 2 || nz % 2)
        throw DomainError("resolution must be even per axis");
    return Resolution{nx, ny, nz};
}

SpectralField::SpectralField(Resolution res, Parity parity)
    : res_(res), parity_(parity), c_(res.coeff_count(), cplx{0.0, 0.0}) {}

std::size_t SpectralField::flat_index(int kx, int ky, int kz) const {
    return (static_cast<std::size_t>(wrap(kx, res_.nx)) * res_.ny +
            wrap(ky, res_.ny)) *
               res_.nzh() +
           kz;
}

cplx& SpectralField::at(int kx, int ky, int kz) {
    return c_[flat_index(kx, ky, kz)];
}

const cplx& SpectralField::at(int kx, int ky, int kz) const {
    return c_[flat_index(kx, ky, kz)];
}

void SpectralField::set_zero() {
    std::fill(c_.begin(), c_.end(), cplx{0.0, 0.0});
}

bool SpectralField::is_zero() const {
    return std::all_of(c_.begin(), c_.end(),
                       [](const cplx& z) { return z == cplx{0.0, 0.0}; });
}

void SpectralField::enforce_invariants() {
    // Zero Nyquist rows; the named indices never address them.
    for (int ix = 0; ix < res_.nx; ++ix)
        for (int iy = 0; iy < res_.ny; ++iy) {
            bool nyq_h = (ix == res_.nx / 2) || (iy == res_.ny / 2);
            for (int kz = 0; kz < res_.nzh(); ++kz) {
                if (nyq_h || kz == res_.nz / 2)
                    c_[(static_cast<std::size_t>(ix) * res_.ny + iy) *
                           res_.nzh() +
                       kz] = 0.0;
            }
        }
    if (parity_ == Parity::OddInZ) {
        for_each_index(res_, [&](const WaveIndex& k, std::size_t flat) {
            if (k.kz == 0) c_[flat] = 0.0;
        });
    }
    // Hermitian symmetrization c(k) <- (c(k) + conj(c(-k)))/2.
    for_each_index(res_, [&](const WaveIndex& k, std::size_t flat) {
        if (k.kx < 0 || (k.kx == 0 && k.ky < 0)) return;
        std::size_t mflat = flat_index(-k.kx, -k.ky, k.kz);
        cplx avg = 0.5 * (c_[flat] + std::conj(c_[mflat]));
        c_[flat] = avg;
        c_[mflat] = std::conj(avg);
    });
}

double SpectralField::hermitian_residual() const {
    double r = 0.0;
    for_each_index(res_, [&](const WaveIndex& k, std::size_t flat) {
        std::size_t mflat = flat_index(-k.kx, -k.ky, k.kz);
        r = std::max(r, std::abs(c_[flat] - std::conj(c_[mflat])));
    });
    return r;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (res_ != o.res_) throw ResolutionMismatch("field +=");
    if (parity_ != o.parity_) throw ParityViolation("field += parity");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (res_ != o.res_) throw ResolutionMismatch("field -=");
    if (parity_ != o.parity_) throw ParityViolation("field -= parity");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& z : c_) z *= s;
    return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
    for (auto& z : c_) z *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
    a += b;
    return a;
}
SpectralField operator-(SpectralField a, const SpectralField& b) {
    a -= b;
    return a;
}
SpectralField operator*(double s, SpectralField a) {
    a *= s;
    return a;
}

PhysicalField to_physical(const SpectralField& f) {
    const Resolution& res = f.res();
    std::vector<cplx> half(res.coeff_count(), cplx{0.0, 0.0});
    const int nzh = res.nzh();
    // Build the half-spectrum of the real field: cos -> (C/2, C/2) split,
    // sin -> (-iS/2, +iS/2); only kz >= 0 is stored, the kz < 0 part is
    // implied by full-vector Hermitian symmetry.
    for_each_index(res, [&](const WaveIndex& k, std::size_t flat) {
        const cplx c = f.raw()[flat];
        std::size_t slot =
            (static_cast<std::size_t>(wrap(k.kx, res.nx)) * res.ny +
             wrap(k.ky, res.ny)) *
                nzh +
            k.kz;
        if (f.parity() == Parity::EvenInZ) {
            half[slot] = (k.kz == 0) ? c : 0.5 * c;
        } else {
            half[slot] = (k.kz == 0) ? cplx{0.0, 0.0}
                                     : cplx{0.0, -0.5} * c;
        }
    });
    PhysicalField out;
    out.res = res;
    out.v.resize(res.grid_count());
    fftw_execute_dft_c2r(PlanCache::instance().backward(res),
                         reinterpret_cast<fftw_complex*>(half.data()),
                         out.v.data());
    return out;
}

SpectralField to_spectral(const PhysicalField& grid, Parity parity,
                          double parity_tol) {
    Resolution res = grid.res;
    if (grid.v.size() != res.grid_count())
        throw ResolutionMismatch("to_spectral grid size");
    std::vector<double> in(grid.v);
    std::vector<cplx> half(res.coeff_count());
    fftw_execute_dft_r2c(PlanCache::instance().forward(res), in.data(),
                         reinterpret_cast<fftw_complex*>(half.data()));
    const double scale = 1.0 / double(res.grid_count());
    for (auto& z : half) z *= scale;

    SpectralField out(res, parity);
    const int nzh = res.nzh();
    auto slot = [&](int kx, int ky, int kz) {
        return (static_cast<std::size_t>(wrap(kx, res.nx)) * res.ny +
                wrap(ky, res.ny)) *
                   nzh +
               kz;
    };
    double keep2 = 0.0, drop2 = 0.0;
    for_each_index(res, [&](const WaveIndex& k, std::size_t flat) {
        const cplx fp = half[slot(k.kx, k.ky, k.kz)];
        const cplx fm = std::conj(half[slot(-k.kx, -k.ky, k.kz)]);
        cplx even, odd;
        if (k.kz == 0) {
            even = 0.5 * (fp + fm);
            odd = 0.0;
        } else {
            even = fp + fm;
            odd = cplx{0.0, 1.0} * (fp - fm);
        }
        const double wz = (k.kz == 0) ? 1.0 : 0.5;
        if (parity == Parity::EvenInZ) {
            out.raw()[flat] = even;
            keep2 += wz * std::norm(even);
            drop2 += wz * std::norm(odd);
        } else {
            out.raw()[flat] = odd;
            keep2 += wz * std::norm(odd);
            drop2 += wz * std::norm(even);
        }
    });
    const double total = std::sqrt(keep2 + drop2);
    if (std::sqrt(drop2) > parity_tol * std::max(total, 1e-300) &&
        std::sqrt(drop2) > 1e-280)
        throw ParityViolation("grid parity residual " +
                              std::to_string(std::sqrt(drop2)) +
                              " exceeds tolerance");
    return out;
}

SpectralField derivative(const SpectralField& f, Axis axis) {
    const Resolution& res = f.res();
    if (axis == Axis::X || axis == Axis::Y) {
        SpectralField out(res, f.parity());
        for_each_index(res, [&](const WaveIndex& k, std::size_t flat) {
            const double kp = (axis == Axis::X) ? k.kh1() : k.kh2();
            out.raw()[flat] = cplx{0.0, kp} * f.raw()[flat];
        });
        return out;
    }
    SpectralField out(res, flip(f.parity()));
    const double sign = (f.parity() == Parity::EvenInZ) ? -1.0 : 1.0;
    for_each_index(res, [&](const WaveIndex& k, std::size_t flat) {
        out.raw()[flat] = sign * k.kz_phys() * f.raw()[flat];
    });
    return out;
}

void dealias_mask(SpectralField& f) {
    const Resolution& res = f.res();
    const int bx = res.dealias_kx(), by = res.dealias_ky(),
              bz = res.dealias_kz();
    // Zero everything first, then this pass keeps only the band; Nyquist rows
    // are outside for_each_index and are untouched but already zero on valid
    // fields, so clear them explicitly too.
    for (int ix = 0; ix < res.nx; ++ix)
        for (int iy = 0; iy < res.ny; ++iy) {
            int kx = ix <= res.nx / 2 ? ix : ix - res.nx;
            int ky = iy <= res.ny / 2 ? iy : iy - res.ny;
            for (int kz = 0; kz < res.nzh(); ++kz) {
                if (std::abs(kx) > bx || std::abs(ky) > by || kz > bz)
                    f.raw()[(static_cast<std::size_t>(ix) * res.ny + iy) *
                                res.nzh() +
                            kz] = 0.0;
            }
        }
}

SpectralField dealiased_product(const SpectralField& a,
                                const SpectralField& b) {
    if (a.res() != b.res()) throw ResolutionMismatch("dealiased_product");
    SpectralField am = a, bm = b;
    dealias_mask(am);
    dealias_mask(bm);
    PhysicalField pa = to_physical(am);
    PhysicalField pb = to_physical(bm);
    for (std::size_t i = 0; i < pa.v.size(); ++i) pa.v[i] *= pb.v[i];
    SpectralField out =
        to_spectral(pa, product_parity(a.parity(), b.parity()), 1e-8);
    dealias_mask(out);
    return out;
}

double field_inner_product(const SpectralField& a, const SpectralField& b) {
    if (a.res() != b.res()) throw ResolutionMismatch("field_inner_product");
    if (a.parity() != b.parity()) return 0.0;  // orthogonal parity classes
    double acc = 0.0;
    if (a.parity() == Parity::EvenInZ) {
        for_each_index(a.res(), [&](const WaveIndex& k, std::size_t flat) {
            const double wz = (k.kz == 0) ? 1.0 : 0.5;
            acc += wz * std::real(a.raw()[flat] * std::conj(b.raw()[flat]));
        });
    } else {
        for_each_index(a.res(), [&](const WaveIndex& k, std::size_t flat) {
            if (k.kz == 0) return;
            acc += 0.5 * std::real(a.raw()[flat] * std::conj(b.raw()[flat]));
        });
    }
    return acc;
}

double field_norm(const SpectralField& f) {
    return std::sqrt(std::max(0.0, field_inner_product(f, f)));
}

State::State(Resolution res)
    : q(res, Parity::EvenInZ),
      h(res, Parity::OddInZ),
      v1(res, Parity::EvenInZ),
      v2(res, Parity::EvenInZ),
      w(res, Parity::OddInZ) {}

void State::set_zero() {
    q.set_zero();
    h.set_zero();
    v1.set_zero();
    v2.set_zero();
    w.set_zero();
}

void State::enforce_invariants() {
    q.enforce_invariants();
    h.enforce_invariants();
    v1.enforce_invariants();
    v2.enforce_invariants();
    w.enforce_invariants();
}

State& State::operator+=(const State& o) {
    q += o.q; h += o.h; v1 += o.v1; v2 += o.v2; w += o.w;
    return *this;
}
State& State::operator-=(const State& o) {
    q -= o.q; h -= o.h; v1 -= o.v1; v2 -= o.v2; w -= o.w;
    return *this;
}
State& State::operator*=(double s) {
    q *= s; h *= s; v1 *= s; v2 *= s; w *= s;
    return *this;
}

SpectralField& State::component(int i) {
    switch (i) {
        case 0: return q;
        case 1: return h;
        case 2: return v1;
        case 3: return v2;
        default: return w;
    }
}
const SpectralField& State::component(int i) const {
    return const_cast<State*>(this)->component(i);
}

State operator+(State a, const State& b) { a += b; return a; }
State operator-(State a, const State& b) { a -= b; return a; }
State operator*(double s, State a) { a *= s; return a; }

ReducedState::ReducedState(Resolution res)
    : h(res, Parity::OddInZ),
      v1(res, Parity::EvenInZ),
      v2(res, Parity::EvenInZ),
      w(res, Parity::OddInZ) {}

void ReducedState::set_zero() {
    h.set_zero();
    v1.set_zero();
    v2.set_zero();
    w.set_zero();
}

ReducedState& ReducedState::operator+=(const ReducedState& o) {
    h += o.h; v1 += o.v1; v2 += o.v2; w += o.w;
    return *this;
}
ReducedState& ReducedState::operator-=(const ReducedState& o) {
    h -= o.h; v1 -= o.v1; v2 -= o.v2; w -= o.w;
    return *this;
}
ReducedState& ReducedState::operator*=(double s) {
    h *= s; v1 *= s; v2 *= s; w *= s;
    return *this;
}

SpectralField& ReducedState::component(int i) {
    switch (i) {
        case 0: return h;
        case 1: return v1;
        case 2: return v2;
        default: return w;
    }
}
const SpectralField& ReducedState::component(int i) const {
    return const_cast<ReducedState*>(this)->component(i);
}

ReducedState operator+(ReducedState a, const ReducedState& b) { a += b; return a; }
ReducedState operator-(ReducedState a, const ReducedState& b) { a -= b; return a; }
ReducedState operator*(double s, ReducedState a) { a *= s; return a; }

double inner_product(const State& a, const State& b) {
    if (a.res() != b.res()) throw ResolutionMismatch("inner_product(State)");
    return field_inner_product(a.q, b.q) + field_inner_product(a.h, b.h) +
           field_inner_product(a.v1, b.v1) + field_inner_product(a.v2, b.v2) +
           field_inner_product(a.w, b.w);
}

double inner_product(const ReducedState& a, const ReducedState& b) {
    if (a.res() != b.res())
        throw ResolutionMismatch("inner_product(ReducedState)");
    return field_inner_product(a.h, b.h) + field_inner_product(a.v1, b.v1) +
           field_inner_product(a.v2, b.v2) + field_inner_product(a.w, b.w);
}

double norm(const State& a) {
    return std::sqrt(std::max(0.0, inner_product(a, a)));
}
double norm(const ReducedState& a) {
    return std::sqrt(std::max(0.0, inner_product(a, a)));
}

SpectralField velocity_divergence(const SpectralField& v1,
                                  const SpectralField& v2,
                                  const SpectralField& w) {
    SpectralField d = derivative(v1, Axis::X);
    d += derivative(v2, Axis::Y);
    d += derivative(w, Axis::Z);
    return d;
}

void leray_project(SpectralField& v1, SpectralField& v2, SpectralField& w) {
    if (v1.parity() != Parity::EvenInZ || v2.parity() != Parity::EvenInZ ||
        w.parity() != Parity::OddInZ)
        throw ParityViolation("leray_project expects (even, even, odd)");
    if (v1.res() != v2.res() || v1.res() != w.res())
        throw ResolutionMismatch("leray_project");
    for_each_index(v1.res(), [&](const WaveIndex& k, std::size_t flat) {
        const double k1 = k.kh1(), k2 = k.kh2(), kzp = k.kz_phys();
        const double k2norm = k1 * k1 + k2 * k2 + kzp * kzp;
        if (k2norm == 0.0) return;  // constants are divergence-free
        // div at this index: i kh.V + kz W  (w carries sin, dz w -> +kz cos)
        const cplx div = cplx{0.0, 1.0} * (k1 * v1.raw()[flat] +
                                           k2 * v2.raw()[flat]) +
                         kzp * w.raw()[flat];
        const cplx phi = -div / k2norm;  // -lap phi = -div
        v1.raw()[flat] -= cplx{0.0, k1} * phi;
        v2.raw()[flat] -= cplx{0.0, k2} * phi;
        w.raw()[flat] -= -kzp * phi;  // dz of even phi is -kz sin
    });
}

ReducedState leray_project(ReducedState s) {
    leray_project(s.v1, s.v2, s.w);
    return s;
}

}  // namespace stratwave
