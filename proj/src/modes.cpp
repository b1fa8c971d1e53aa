#include "stratwave/modes.hpp"

#include <cmath>

namespace stratwave {

namespace {

constexpr cplx kI{0.0, 1.0};

// Subtraction-free pieces of the per-index quartic
//   w^4 - S w^2 + e*P = 0,  S = P + Z + e,
// with P = |k_h|^2, Z = |k_z|^2, e = eta^2 (all physical wavenumbers).
struct QuarticAlgebra {
    double P = 0.0, Z = 0.0, e = 0.0;
    double S = 0.0, sqrtA = 0.0;
    double omega_aw = 0.0, omega_gw = 0.0;

    double knorm2() const { return P + Z; }
    // omega_aw^2 - omega_a^2 = 2 e Z / (sqrtA + P + Z - e), >= 0.
    double aw_sq_excess() const {
        return 2.0 * e * Z / (sqrtA + P + Z - e);
    }
    // omega_sp^2 - omega_gw^2 = 4 e^2 P Z / ((sqrtA+P+Z-e)(P+Z)(S+sqrtA)).
    double gw_sq_gap() const {
        return 4.0 * e * e * P * Z /
               ((sqrtA + P + Z - e) * (P + Z) * (S + sqrtA));
    }
};

QuarticAlgebra quartic(const WaveIndex& k, double eta) {
    QuarticAlgebra q;
    q.P = k.kh_norm() * k.kh_norm();
    q.Z = k.kz_phys() * k.kz_phys();
    q.e = eta * eta;
    q.S = q.P + q.Z + q.e;
    // A = S^2 - 4eP regrouped so no leading cancellation occurs:
    // A = (P - e)^2 + Z^2 + 2PZ + 2eZ.
    double A = (q.P - q.e) * (q.P - q.e) + q.Z * q.Z + 2.0 * q.P * q.Z +
               2.0 * q.e * q.Z;
    q.sqrtA = std::sqrt(A);
    q.omega_aw = std::sqrt(0.5 * (q.S + q.sqrtA));
    q.omega_gw = (q.P == 0.0)
                     ? 0.0
                     : std::sqrt(2.0 * q.e * q.P / (q.S + q.sqrtA));
    return q;
}

}  // namespace

double Eta::epsilon() const {
    return std::pow(value, 1.0 / (1.0 - nu));
}

Eta Eta::from_epsilon(double epsilon, double nu) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("epsilon must lie in (0,1)");
    if (!(nu > 0.0 && 2.0 * nu < 1.0))
        throw DomainError("nu must satisfy 0 < 2 nu < 1");
    return Eta{std::pow(epsilon, 1.0 - nu), nu};
}

Eta Eta::from_value(double value, double nu) {
    if (!(value >= 0.0 && value < 1.0))
        throw DomainError("eta must lie in [0,1)");
    if (!(nu > 0.0 && 2.0 * nu < 1.0))
        throw DomainError("nu must satisfy 0 < 2 nu < 1");
    return Eta{value, nu};
}

ModeKind ModeKind::mean_flow(int family, Flavor f) {
    if (family < 1 || family > 4)
        throw InadmissibleMode("mean flow family must be 1..4");
    if (f == Flavor::PureAcoustic)
        throw InadmissibleMode("pure acoustic flavor has no mean-flow tag");
    ModeKind k;
    k.branch = Branch::MeanFlow;
    k.flavor = f;
    k.mf_family = family;
    return k;
}

ModeKind ModeKind::internal_wave(int sign, Flavor f) {
    if (sign != 1 && sign != -1)
        throw InadmissibleMode("wave sign must be +1 or -1");
    if (f == Flavor::PureAcoustic)
        throw InadmissibleMode("pure acoustic flavor has no internal waves");
    ModeKind k;
    k.branch = Branch::InternalWave;
    k.flavor = f;
    k.sign = sign;
    return k;
}

ModeKind ModeKind::acoustic_wave(int sign, Flavor f) {
    if (sign != 1 && sign != -1)
        throw InadmissibleMode("wave sign must be +1 or -1");
    if (f == Flavor::Soundproof)
        throw InadmissibleMode("soundproof flavor has no acoustic waves");
    ModeKind k;
    k.branch = Branch::AcousticWave;
    k.flavor = f;
    k.sign = sign;
    return k;
}

bool mode_admissible(const ModeKind& kind, const WaveIndex& k) {
    if (k.kz < 0) return false;
    switch (kind.branch) {
        case Branch::MeanFlow:
            if (kind.flavor == Flavor::PureAcoustic) return false;
            if (kind.mf_family == 1) return !k.horizontal_zero();
            if (!k.horizontal_zero()) return false;
            if (kind.mf_family == 2 && kind.flavor == Flavor::Soundproof)
                return k.kz != 0;  // the kz = 0 slot is the zero vector
            return true;
        case Branch::InternalWave:
            return kind.flavor != Flavor::PureAcoustic &&
                   !k.horizontal_zero() && k.kz != 0;
        case Branch::AcousticWave:
            return kind.flavor != Flavor::Soundproof && !k.is_zero();
    }
    return false;
}

double acoustic_frequency(const WaveIndex& k) {
    if (k.is_zero()) throw ZeroMode("acoustic frequency at the zero mode");
    return k.k_norm();
}

FastFrequencies fast_frequencies(const WaveIndex& k, const Eta& eta) {
    if (k.is_zero()) throw ZeroMode("fast frequencies at the zero mode");
    auto q = quartic(k, eta.value);
    return FastFrequencies{q.omega_gw, q.omega_aw};
}

double gw_frequency(const WaveIndex& k, const Eta& eta) {
    if (k.is_zero()) throw ZeroMode("gw frequency at the zero mode");
    if (k.horizontal_zero() || k.kz == 0)
        throw DomainError("internal-wave branch needs k_h != 0 and kz != 0");
    return quartic(k, eta.value).omega_gw;
}

double soundproof_gw_frequency(const WaveIndex& k, const Eta& eta) {
    if (k.horizontal_zero() || k.kz == 0)
        throw DomainError("soundproof gw frequency needs k_h != 0, kz != 0");
    double kh = k.kh_norm(), kz = k.kz_phys();
    return eta.value * kh / std::sqrt(kh * kh + kz * kz);
}

EigenPair eigenvector(const ModeKind& kind, const WaveIndex& k,
                      const Eta& eta) {
    if (!mode_admissible(kind, k))
        throw InadmissibleMode("mode not admissible at this index");
    EigenPair p;
    p.kind = kind;
    p.index = k;
    p.eta = eta;

    const double kh1 = k.kh1(), kh2 = k.kh2(), kzp = k.kz_phys();
    const double khn = k.kh_norm();
    const double ev = eta.value;
    const double s = double(kind.sign);

    if (kind.branch == Branch::MeanFlow) {
        switch (kind.mf_family) {
            case 1:
                p.vec[2] = -kh2 / khn;
                p.vec[3] = kh1 / khn;
                break;
            case 2:
                if (kind.flavor != Flavor::Soundproof) p.vec[0] = 1.0;
                if (k.kz != 0) {
                    if (ev <= 0.0)
                        throw DomainError("mf_2 at kz != 0 needs eta > 0");
                    p.vec[1] = kzp / ev;
                }
                if (kind.flavor == Flavor::Soundproof) p.pressure = 1.0;
                break;
            case 3:
                p.vec[2] = 1.0;
                break;
            case 4:
                p.vec[3] = 1.0;
                break;
        }
        return p;
    }

    if (kind.flavor == Flavor::PureAcoustic) {
        const double w = acoustic_frequency(k);
        p.omega = s * w;
        p.vec[0] = 1.0;
        p.vec[2] = s * kh1 / w;
        p.vec[3] = s * kh2 / w;
        p.vec[4] = s * kI * (kzp / w);
        return p;
    }

    if (kind.flavor == Flavor::Soundproof) {
        const double w = soundproof_gw_frequency(k, eta);
        p.omega = s * w;
        p.vec[1] = ev * khn * khn / (kzp * w * w);
        p.vec[2] = s * kh1 / w;
        p.vec[3] = s * kh2 / w;
        p.vec[4] = -s * kI * khn * khn / (kzp * w);
        p.pressure = 1.0;
        return p;
    }

    // Perturbed internal or acoustic wave.
    auto q = quartic(k, ev);
    const double w = (kind.branch == Branch::InternalWave) ? q.omega_gw
                                                           : q.omega_aw;
    p.omega = s * w;
    p.vec[0] = 1.0;
    p.vec[2] = s * kh1 / w;
    p.vec[3] = s * kh2 / w;
    if (k.kz != 0) {
        const double r = q.P / (w * w) - 1.0;
        p.vec[1] = ev * r / kzp;
        p.vec[4] = -s * kI * (w * r / kzp);
    }
    return p;
}

State place_mode(const EigenPair& mode, const Resolution& res) {
    State u(res);
    const WaveIndex& k = mode.index;
    if (std::abs(k.kx) > res.max_kx() || std::abs(k.ky) > res.max_ky() ||
        k.kz > res.max_kz())
        throw DomainError("mode index outside resolution band");
    for (int i = 0; i < 5; ++i) u.component(i).at(k.kx, k.ky, k.kz) = mode.vec[i];
    return u;
}

ModalDecomposition::ModalDecomposition(Resolution res, Eta eta)
    : res_(res), eta_(eta), a_(res.coeff_count()) {}

std::size_t ModalDecomposition::flat_index(const WaveIndex& k) const {
    auto wrapi = [](int v, int n) { return ((v % n) + n) % n; };
    return (static_cast<std::size_t>(wrapi(k.kx, res_.nx)) * res_.ny +
            wrapi(k.ky, res_.ny)) *
               res_.nzh() +
           k.kz;
}

cplx ModalDecomposition::amplitude(const ModeKind& kind,
                                   const WaveIndex& k) const {
    if (!mode_admissible(kind, k)) return cplx{0.0, 0.0};
    const Amps& a = a_[flat_index(k)];
    switch (kind.branch) {
        case Branch::MeanFlow: return a.mf[kind.mf_family - 1];
        case Branch::InternalWave: return a.gw[kind.sign > 0 ? 0 : 1];
        case Branch::AcousticWave: return a.aw[kind.sign > 0 ? 0 : 1];
    }
    return cplx{0.0, 0.0};
}

bool ModalDecomposition::renormalized_slot(const ModeKind& kind,
                                           const WaveIndex& k) {
    if (kind.branch == Branch::InternalWave) return true;
    return kind.branch == Branch::MeanFlow && kind.mf_family == 2 &&
           k.kz != 0;
}

cplx ModalDecomposition::renormalized_amplitude(const ModeKind& kind,
                                                const WaveIndex& k) const {
    cplx a = amplitude(kind, k);
    return renormalized_slot(kind, k) ? a / eta_.value : a;
}

ModalDecomposition decompose(const State& u, const Eta& eta) {
    if (!(eta.value > 0.0)) throw DomainError("decompose needs eta > 0");
    ModalDecomposition dec(u.res(), eta);
    const double ev = eta.value;
    for_each_index(u.res(), [&](const WaveIndex& k, std::size_t flat) {
        const cplx Q = u.q.raw()[flat];
        const cplx H = u.h.raw()[flat];
        const cplx V1 = u.v1.raw()[flat];
        const cplx V2 = u.v2.raw()[flat];
        const cplx W = u.w.raw()[flat];
        auto& A = dec.at(flat);
        const double kh1 = k.kh1(), kh2 = k.kh2(), kzp = k.kz_phys();

        if (k.is_zero()) {
            A.mf[1] = Q;
            A.mf[2] = V1;
            A.mf[3] = V2;
            return;
        }
        if (k.horizontal_zero()) {  // kz > 0
            A.mf[1] = ev * (ev * Q + kzp * H) / (ev * ev + kzp * kzp);
            A.mf[2] = V1;
            A.mf[3] = V2;
            const double w = quartic(k, ev).omega_aw;  // r = -1 at k_h = 0
            const double den = 2.0 + 2.0 * ev * ev / (kzp * kzp);
            A.aw[0] = (Q - (ev * H + kI * w * W) / kzp) / den;
            A.aw[1] = (Q - (ev * H - kI * w * W) / kzp) / den;
            return;
        }
        const double khn = k.kh_norm();
        A.mf[0] = (-kh2 * V1 + kh1 * V2) / khn;
        const cplx vk = kh1 * V1 + kh2 * V2;
        if (k.kz == 0) {
            const double w = quartic(k, ev).omega_aw;  // = |k_h|
            const double den = 1.0 + khn * khn / (w * w);
            A.aw[0] = (Q + vk / w) / den;
            A.aw[1] = (Q - vk / w) / den;
            return;
        }
        auto q = quartic(k, ev);
        for (int b = 0; b < 2; ++b) {
            const double w = (b == 0) ? q.omega_gw : q.omega_aw;
            const double r = q.P / (w * w) - 1.0;
            const double den = 2.0 + 2.0 * ev * ev * r * r / (kzp * kzp);
            cplx plus = (Q + vk / w + (ev * H + kI * w * W) * (r / kzp)) / den;
            cplx minus =
                (Q - vk / w + (ev * H - kI * w * W) * (r / kzp)) / den;
            if (b == 0) {
                A.gw[0] = plus;
                A.gw[1] = minus;
            } else {
                A.aw[0] = plus;
                A.aw[1] = minus;
            }
        }
    });
    return dec;
}

namespace {

State reconstruct_branches(const ModalDecomposition& dec,
                           const BranchSet& keep) {
    State u(dec.res());
    const double ev = dec.eta().value;
    for_each_index(dec.res(), [&](const WaveIndex& k, std::size_t flat) {
        const auto& A = dec.at(flat);
        cplx Q{}, H{}, V1{}, V2{}, W{};
        const double kh1 = k.kh1(), kh2 = k.kh2(), kzp = k.kz_phys();

        if (k.is_zero()) {
            if (keep.mf) {
                Q = A.mf[1];
                V1 = A.mf[2];
                V2 = A.mf[3];
            }
        } else if (k.horizontal_zero()) {
            if (keep.mf) {
                Q += A.mf[1];
                H += A.mf[1] * (kzp / ev);
                V1 += A.mf[2];
                V2 += A.mf[3];
            }
            if (keep.aw) {
                const double w = quartic(k, ev).omega_aw;
                const cplx sum = A.aw[0] + A.aw[1];
                const cplx dif = A.aw[0] - A.aw[1];
                Q += sum;
                H += sum * (-ev / kzp);
                W += dif * (kI * w / kzp);
            }
        } else if (k.kz == 0) {
            const double khn = k.kh_norm();
            if (keep.mf) {
                V1 += A.mf[0] * (-kh2 / khn);
                V2 += A.mf[0] * (kh1 / khn);
            }
            if (keep.aw) {
                const double w = quartic(k, ev).omega_aw;
                const cplx sum = A.aw[0] + A.aw[1];
                const cplx dif = A.aw[0] - A.aw[1];
                Q += sum;
                V1 += dif * (kh1 / w);
                V2 += dif * (kh2 / w);
            }
        } else {
            const double khn = k.kh_norm();
            if (keep.mf) {
                V1 += A.mf[0] * (-kh2 / khn);
                V2 += A.mf[0] * (kh1 / khn);
            }
            auto q = quartic(k, ev);
            for (int b = 0; b < 2; ++b) {
                if (b == 0 && !keep.gw) continue;
                if (b == 1 && !keep.aw) continue;
                const double w = (b == 0) ? q.omega_gw : q.omega_aw;
                const double r = q.P / (w * w) - 1.0;
                const cplx sum =
                    (b == 0) ? A.gw[0] + A.gw[1] : A.aw[0] + A.aw[1];
                const cplx dif =
                    (b == 0) ? A.gw[0] - A.gw[1] : A.aw[0] - A.aw[1];
                Q += sum;
                H += sum * (ev * r / kzp);
                V1 += dif * (kh1 / w);
                V2 += dif * (kh2 / w);
                W += dif * (-kI * w * r / kzp);
            }
        }
        u.q.raw()[flat] = Q;
        u.h.raw()[flat] = H;
        u.v1.raw()[flat] = V1;
        u.v2.raw()[flat] = V2;
        u.w.raw()[flat] = W;
    });
    return u;
}

}  // namespace

State reconstruct(const ModalDecomposition& dec) {
    return reconstruct_branches(dec, BranchSet::all());
}

State project(const State& u, const Eta& eta, const BranchSet& branches) {
    return reconstruct_branches(decompose(u, eta), branches);
}

ReducedState reduce_dimension(const State& u) {
    ReducedState s(u.res());
    s.h = u.h;
    s.v1 = u.v1;
    s.v2 = u.v2;
    s.w = u.w;
    return s;
}

namespace {
template <typename S>
void truncate_impl(S& u, int K, int ncomp) {
    if (K < 0) throw DomainError("truncation order must be non-negative");
    for (int i = 0; i < ncomp; ++i) {
        auto& f = u.component(i);
        for_each_index(f.res(), [&](const WaveIndex& k, std::size_t flat) {
            if (std::max(std::abs(k.kx), std::abs(k.ky)) > K || k.kz > K)
                f.raw()[flat] = 0.0;
        });
    }
}
}  // namespace

void truncate(State& u, int K) { truncate_impl(u, K, 5); }
void truncate(ReducedState& u, int K) { truncate_impl(u, K, 4); }
State truncated(State u, int K) {
    truncate(u, K);
    return u;
}
ReducedState truncated(ReducedState u, int K) {
    truncate(u, K);
    return u;
}

SoundproofDecomposition::SoundproofDecomposition(Resolution res, Eta eta)
    : res_(res), eta_(eta), a_(res.coeff_count()) {}

SoundproofDecomposition sp_decompose(const ReducedState& s, const Eta& eta) {
    if (!(eta.value > 0.0)) throw DomainError("sp_decompose needs eta > 0");
    SoundproofDecomposition dec(s.res(), eta);
    const double ev = eta.value;
    for_each_index(s.res(), [&](const WaveIndex& k, std::size_t flat) {
        const cplx H = s.h.raw()[flat];
        const cplx V1 = s.v1.raw()[flat];
        const cplx V2 = s.v2.raw()[flat];
        const cplx W = s.w.raw()[flat];
        auto& A = dec.at(flat);
        const double kh1 = k.kh1(), kh2 = k.kh2(), kzp = k.kz_phys();

        if (k.is_zero()) {
            A.mf[2] = V1;
            A.mf[3] = V2;
            return;
        }
        if (k.horizontal_zero()) {
            A.mf[1] = ev * H / kzp;
            A.mf[2] = V1;
            A.mf[3] = V2;
            return;
        }
        const double khn = k.kh_norm();
        A.mf[0] = (-kh2 * V1 + kh1 * V2) / khn;
        if (k.kz == 0) return;
        const double w = ev * khn / std::sqrt(khn * khn + kzp * kzp);
        const double hc = ev * khn * khn / (kzp * w * w);
        const double c = khn * khn / (kzp * w);
        const double n2 = hc * hc + khn * khn / (w * w) + c * c;
        const cplx vk = kh1 * V1 + kh2 * V2;
        A.gw[0] = (H * hc + vk / w + kI * W * c) / n2;
        A.gw[1] = (H * hc - vk / w - kI * W * c) / n2;
    });
    return dec;
}

ReducedState sp_reconstruct(const SoundproofDecomposition& dec) {
    ReducedState s(dec.res());
    const double ev = dec.eta().value;
    for_each_index(dec.res(), [&](const WaveIndex& k, std::size_t flat) {
        const auto& A = dec.at(flat);
        cplx H{}, V1{}, V2{}, W{};
        const double kh1 = k.kh1(), kh2 = k.kh2(), kzp = k.kz_phys();

        if (k.is_zero()) {
            V1 = A.mf[2];
            V2 = A.mf[3];
        } else if (k.horizontal_zero()) {
            H = A.mf[1] * (kzp / ev);
            V1 = A.mf[2];
            V2 = A.mf[3];
        } else {
            const double khn = k.kh_norm();
            V1 = A.mf[0] * (-kh2 / khn);
            V2 = A.mf[0] * (kh1 / khn);
            if (k.kz != 0) {
                const double w = ev * khn / std::sqrt(khn * khn + kzp * kzp);
                const double hc = ev * khn * khn / (kzp * w * w);
                const double c = khn * khn / (kzp * w);
                const cplx sum = A.gw[0] + A.gw[1];
                const cplx dif = A.gw[0] - A.gw[1];
                H += sum * hc;
                V1 += dif * (kh1 / w);
                V2 += dif * (kh2 / w);
                W += dif * (-kI * c);
            }
        }
        s.h.raw()[flat] = H;
        s.v1.raw()[flat] = V1;
        s.v2.raw()[flat] = V2;
        s.w.raw()[flat] = W;
    });
    return s;
}

PinchingCheck pinching_check(const WaveIndex& k, const Eta& eta) {
    if (k.is_zero()) throw ZeroMode("pinching check at the zero mode");
    auto q = quartic(k, eta.value);
    return PinchingCheck{q.aw_sq_excess(), q.omega_gw};
}

GapReport mode_gap_report(const WaveIndex& k, const Eta& eta) {
    if (k.horizontal_zero() || k.kz <= 0)
        throw InadmissibleMode(
            "gap report needs k_h != 0 and kz > 0 so both wave branches "
            "exist");
    const double ev = eta.value;
    auto q = quartic(k, ev);
    const double kzp = k.kz_phys();
    const double knorm = std::sqrt(q.knorm2());
    const double omega_a = knorm;
    const double omega_sp = ev * std::sqrt(q.P) / knorm;

    GapReport rep;
    rep.index = k;
    rep.eta = eta;

    const double aw2 = q.aw_sq_excess();
    rep.aw_freq_gap = aw2 / (q.omega_aw + omega_a);
    const double gw2 = q.gw_sq_gap();
    rep.gw_freq_gap = gw2 / (omega_sp + q.omega_gw);

    // Acoustic eigenvector distance, Q = 1 normalization on both sides.
    {
        const double r_aw = q.P / (q.omega_aw * q.omega_aw) - 1.0;
        const double dh = ev * r_aw / kzp;
        const double dv =
            std::sqrt(q.P) * rep.aw_freq_gap / (q.omega_aw * omega_a);
        const double dw = (q.Z * rep.aw_freq_gap - aw2 * omega_a) /
                          (q.omega_aw * omega_a * kzp);
        rep.aw_vec_gap = std::sqrt(0.5 * (dh * dh + dv * dv + dw * dw));
    }

    // Internal-wave eigenvector distance against the soundproof pair; the
    // pressure rider is 1 on both sides so the q-slot difference vanishes.
    {
        const double ww = q.omega_gw * omega_sp;
        const double a = q.P * gw2 / (ww * ww);
        const double dh = (ev / kzp) * (a - 1.0);
        const double dv = std::sqrt(q.P) * rep.gw_freq_gap / ww;
        const double dw = (q.P * rep.gw_freq_gap / ww - q.omega_gw) / kzp;
        rep.gw_vec_gap = std::sqrt(0.5 * (dh * dh + dv * dv + dw * dw));
    }
    return rep;
}

}  // namespace stratwave
