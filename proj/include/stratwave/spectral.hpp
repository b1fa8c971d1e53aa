#pragma once

// Fourier representation on the periodic unit box [0,1)^3 with a z-parity
// class per field: even fields are cosine series in z, odd fields sine
// series, both times e^{2*pi*i*kh.xh} horizontally. Physical wavenumbers are
// 2*pi times the stored integer indices.

#include <array>
#include <complex>
#include <vector>

#include "stratwave/errors.hpp"

namespace stratwave {

using cplx = std::complex<double>;

struct WaveIndex {
    int kx = 0;
    int ky = 0;
    int kz = 0;  // kz >= 0 always

    bool is_zero() const { return kx == 0 && ky == 0 && kz == 0; }
    bool horizontal_zero() const { return kx == 0 && ky == 0; }
    // Physical wavenumbers.
    double kh1() const;
    double kh2() const;
    double kh_norm() const;    // |k_h| = 2*pi*sqrt(kx^2+ky^2)
    double kz_phys() const;    // 2*pi*kz
    double k_norm() const;     // 2*pi*sqrt(kx^2+ky^2+kz^2)
    int max_abs() const;
};

enum class Parity { EvenInZ, OddInZ };

Parity product_parity(Parity a, Parity b);
Parity flip(Parity p);

struct Resolution {
    int nx = 0, ny = 0, nz = 0;

    int nzh() const { return nz / 2 + 1; }
    std::size_t coeff_count() const {
        return static_cast<std::size_t>(nx) * ny * nzh();
    }
    std::size_t grid_count() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    // Largest representable index per axis (Nyquist rows are kept zero).
    int max_kx() const { return nx / 2 - 1; }
    int max_ky() const { return ny / 2 - 1; }
    int max_kz() const { return nz / 2 - 1; }
    // 2/3-rule dealiasing band.
    int dealias_kx() const { return (nx - 1) / 3; }
    int dealias_ky() const { return (ny - 1) / 3; }
    int dealias_kz() const { return (nz - 1) / 3; }

    bool operator==(const Resolution& o) const {
        return nx == o.nx && ny == o.ny && nz == o.nz;
    }
    bool operator!=(const Resolution& o) const { return !(*this == o); }
};

Resolution make_resolution(int nx, int ny, int nz);
inline Resolution make_resolution(int n) { return make_resolution(n, n, n); }

// Complex coefficient array over (kx, ky, kz>=0), kx-major, kz fastest.
// Horizontal indices are stored in wrapped FFT order; at(kx, ky, kz) accepts
// signed indices. Invariants: Hermitian horizontal symmetry
// c(-kx,-ky,kz) = conj(c(kx,ky,kz)); odd fields have zero kz = 0 rows;
// Nyquist rows are zero.
class SpectralField {
  public:
    SpectralField(Resolution res, Parity parity);

    const Resolution& res() const { return res_; }
    Parity parity() const { return parity_; }

    cplx& at(int kx, int ky, int kz);
    const cplx& at(int kx, int ky, int kz) const;
    cplx& at(const WaveIndex& k) { return at(k.kx, k.ky, k.kz); }
    const cplx& at(const WaveIndex& k) const { return at(k.kx, k.ky, k.kz); }

    std::vector<cplx>& raw() { return c_; }
    const std::vector<cplx>& raw() const { return c_; }
    std::size_t flat_index(int kx, int ky, int kz) const;

    void set_zero();
    bool is_zero() const;

    // Enforce the Hermitian/parity/Nyquist invariants in place (exact
    // symmetrization; a no-op up to round-off on valid fields).
    void enforce_invariants();
    // Max Hermitian asymmetry |c(-kh,kz) - conj(c(kh,kz))|.
    double hermitian_residual() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    SpectralField& operator*=(cplx s);

  private:
    Resolution res_;
    Parity parity_;
    std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Real values on the collocation lattice, (ix, iy, iz) with iz fastest,
// x_i = i/N.
struct PhysicalField {
    Resolution res;
    std::vector<double> v;
};

PhysicalField to_physical(const SpectralField& f);
// Inverse transform; throws ParityViolation if the grid's z-parity residual
// relative to its norm exceeds `parity_tol`.
SpectralField to_spectral(const PhysicalField& grid, Parity parity,
                          double parity_tol = 1e-10);

enum class Axis { X, Y, Z };

// x,y derivatives preserve parity; the z derivative flips it
// (d/dz cos = -k sin, d/dz sin = +k cos).
SpectralField derivative(const SpectralField& f, Axis axis);

// Zero all modes outside the 2/3 band (and Nyquist rows).
void dealias_mask(SpectralField& f);

// Pointwise physical product with the 2/3 rule: inputs are masked, multiplied
// on the grid, transformed back and masked again. Exact convolution on the
// retained band for band-limited inputs.
SpectralField dealiased_product(const SpectralField& a,
                                const SpectralField& b);

// L2 inner products over the unit box (fields must be real-valued, i.e.
// Hermitian). field_inner_product(f, f) = ||f||^2.
double field_inner_product(const SpectralField& a, const SpectralField& b);
double field_norm(const SpectralField& f);

// The 5-component unknown (q, H, v1, v2, w) with parities (E, O, E, E, O).
struct State {
    SpectralField q, h, v1, v2, w;

    explicit State(Resolution res);
    const Resolution& res() const { return q.res(); }

    void set_zero();
    void enforce_invariants();
    State& operator+=(const State& o);
    State& operator-=(const State& o);
    State& operator*=(double s);

    SpectralField& component(int i);
    const SpectralField& component(int i) const;
};

State operator+(State a, const State& b);
State operator-(State a, const State& b);
State operator*(double s, State a);

// Reduced 4-component state (H, v1, v2, w) used by the soundproof and
// intermediate models.
struct ReducedState {
    SpectralField h, v1, v2, w;

    explicit ReducedState(Resolution res);
    const Resolution& res() const { return h.res(); }

    void set_zero();
    ReducedState& operator+=(const ReducedState& o);
    ReducedState& operator-=(const ReducedState& o);
    ReducedState& operator*=(double s);

    SpectralField& component(int i);
    const SpectralField& component(int i) const;
};

ReducedState operator+(ReducedState a, const ReducedState& b);
ReducedState operator-(ReducedState a, const ReducedState& b);
ReducedState operator*(double s, ReducedState a);

double inner_product(const State& a, const State& b);
double inner_product(const ReducedState& a, const ReducedState& b);
double norm(const State& a);
double norm(const ReducedState& a);

// div_h v + dz w of a velocity triple with parities (E, E, O); even output.
SpectralField velocity_divergence(const SpectralField& v1,
                                  const SpectralField& v2,
                                  const SpectralField& w);

// Coefficientwise removal of the gradient part so that div_h v + dz w = 0.
// Idempotent and self-adjoint in the velocity L2 inner product.
void leray_project(SpectralField& v1, SpectralField& v2, SpectralField& w);
ReducedState leray_project(ReducedState s);

// Iterate over all stored coefficient slots. fn(WaveIndex, flat) is called
// with kx, ky in signed convention and kz >= 0, Nyquist rows excluded.
template <typename Fn>
void for_each_index(const Resolution& res, Fn&& fn) {
    const int nzh = res.nzh();
    for (int ix = 0; ix < res.nx; ++ix) {
        int kx = ix <= res.nx / 2 ? ix : ix - res.nx;
        if (std::abs(kx) > res.max_kx()) continue;
        for (int iy = 0; iy < res.ny; ++iy) {
            int ky = iy <= res.ny / 2 ? iy : iy - res.ny;
            if (std::abs(ky) > res.max_ky()) continue;
            for (int kz = 0; kz <= res.max_kz(); ++kz) {
                std::size_t flat =
                    (static_cast<std::size_t>(ix) * res.ny + iy) * nzh + kz;
                fn(WaveIndex{kx, ky, kz}, flat);
            }
        }
    }
}

}  // namespace stratwave
