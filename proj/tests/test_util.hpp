#pragma once

// Shared helpers for the test suites: deterministic random fields and the
// independent oracles (coefficient convolution, operator assembly from
// derivative ops, dense per-block eigensolves).

#include <complex>
#include <random>
#include <vector>

#include "stratwave/spectral.hpp"

namespace testutil {

using stratwave::Axis;
using stratwave::cplx;
using stratwave::Parity;
using stratwave::Resolution;
using stratwave::SpectralField;
using stratwave::State;
using stratwave::WaveIndex;

inline double unit_real(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

inline SpectralField random_field(const Resolution& res, Parity p,
                                  std::mt19937_64& rng, double amp = 1.0) {
    SpectralField f(res, p);
    stratwave::for_each_index(res, [&](const WaveIndex& k, std::size_t flat) {
        double decay = 1.0 / (1.0 + k.kx * k.kx + k.ky * k.ky + k.kz * k.kz);
        f.raw()[flat] = amp * decay *
                        cplx{2.0 * unit_real(rng) - 1.0,
                             2.0 * unit_real(rng) - 1.0};
    });
    f.enforce_invariants();
    return f;
}

inline State random_state(const Resolution& res, std::mt19937_64& rng,
                          double amp = 1.0) {
    State u(res);
    for (int i = 0; i < 5; ++i)
        u.component(i) =
            random_field(res, u.component(i).parity(), rng, amp);
    return u;
}

inline stratwave::ReducedState random_reduced(const Resolution& res,
                                              std::mt19937_64& rng,
                                              double amp = 1.0) {
    stratwave::ReducedState s(res);
    for (int i = 0; i < 4; ++i)
        s.component(i) =
            random_field(res, s.component(i).parity(), rng, amp);
    return s;
}

// Direct coefficient convolution of two parity fields, restricted to the
// representable band. Quadratic cost; test-only.
inline SpectralField convolution_oracle(const SpectralField& a,
                                        const SpectralField& b,
                                        Parity out_parity) {
    const Resolution& res = a.res();
    SpectralField out(res, out_parity);

    // Expand each field into full Fourier coefficients over kz in Z.
    struct FullCoeff {
        int kx, ky, kz;
        cplx c;
    };
    auto expand = [&](const SpectralField& f) {
        std::vector<FullCoeff> v;
        stratwave::for_each_index(
            res, [&](const WaveIndex& k, std::size_t flat) {
                cplx c = f.raw()[flat];
                if (c == cplx{0.0, 0.0}) return;
                if (f.parity() == Parity::EvenInZ) {
                    if (k.kz == 0) {
                        v.push_back({k.kx, k.ky, 0, c});
                    } else {
                        v.push_back({k.kx, k.ky, k.kz, 0.5 * c});
                        v.push_back({k.kx, k.ky, -k.kz, 0.5 * c});
                    }
                } else {
                    if (k.kz == 0) return;
                    v.push_back({k.kx, k.ky, k.kz, cplx{0.0, -0.5} * c});
                    v.push_back({k.kx, k.ky, -k.kz, cplx{0.0, 0.5} * c});
                }
            });
        return v;
    };
    auto fa = expand(a), fb = expand(b);

    // Accumulate products into full coefficients, then fold into parity form.
    std::map<std::tuple<int, int, int>, cplx> full;
    for (const auto& x : fa)
        for (const auto& y : fb) {
            int kx = x.kx + y.kx, ky = x.ky + y.ky, kz = x.kz + y.kz;
            if (std::abs(kx) > res.max_kx() || std::abs(ky) > res.max_ky() ||
                std::abs(kz) > res.max_kz())
                continue;
            full[{kx, ky, kz}] += x.c * y.c;
        }
    for (const auto& [key, c] : full) {
        auto [kx, ky, kz] = key;
        if (kz < 0) continue;  // folded below via the kz >= 0 partner
        cplx cm = 0.0;
        if (kz > 0) {
            auto it = full.find({kx, ky, -kz});
            if (it != full.end()) cm = it->second;
        }
        if (out_parity == Parity::EvenInZ) {
            out.at(kx, ky, kz) = (kz == 0) ? c : (c + cm);
        } else {
            if (kz == 0) continue;
            out.at(kx, ky, kz) = cplx{0.0, 1.0} * (c - cm);
        }
    }
    return out;
}

// Operators assembled from the public derivative ops.
inline State apply_La(const State& u) {
    State out(u.res());
    out.q = stratwave::velocity_divergence(u.v1, u.v2, u.w);
    out.v1 = derivative(u.q, Axis::X);
    out.v2 = derivative(u.q, Axis::Y);
    out.w = derivative(u.q, Axis::Z);
    return out;
}

inline State apply_Lg(const State& u) {
    State out(u.res());
    out.h = -1.0 * u.w;
    out.w = u.h;
    return out;
}

inline State apply_Leps(const State& u, double eta) {
    State out = apply_La(u);
    out.h += -eta * u.w;
    out.w += eta * u.h;
    return out;
}

// Soundproof flavor: Leray-projected eta * L_sp on reduced states.
inline stratwave::ReducedState apply_Lsp_projected(
    const stratwave::ReducedState& s, double eta) {
    stratwave::ReducedState out(s.res());
    out.h = -eta * s.w;
    out.w = eta * s.h;
    stratwave::leray_project(out.v1, out.v2, out.w);
    return out;
}

}  // namespace testutil
