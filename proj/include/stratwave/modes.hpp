#pragma once

// Exact eigenmode algebra of the fast operators on the periodic box: the
// perturbed operator L_eps = L_a + eta*L_g, the Leray-projected soundproof
// operator, and the pure acoustic operator L_a. Frequencies come from the
// per-index quartic
//     w^4 - (|k_h|^2 + |k_z|^2 + eta^2) w^2 + eta^2 |k_h|^2 = 0,
// eigenvectors from the closed-form displays, projections from the
// inner-product quotients.

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "stratwave/spectral.hpp"

namespace stratwave {

// eta = epsilon^(1-nu); nu is carried so epsilon can be recovered.
struct Eta {
    double value = 0.0;
    double nu = 0.25;

    double epsilon() const;
    static Eta from_epsilon(double epsilon, double nu);
    static Eta from_value(double value, double nu);
};

enum class Branch { MeanFlow, InternalWave, AcousticWave };
enum class Flavor { Perturbed, Soundproof, PureAcoustic };

struct ModeKind {
    Branch branch = Branch::MeanFlow;
    Flavor flavor = Flavor::Perturbed;
    int mf_family = 1;  // 1..4, MeanFlow only
    int sign = +1;      // +1/-1, wave branches only

    static ModeKind mean_flow(int family, Flavor f = Flavor::Perturbed);
    static ModeKind internal_wave(int sign, Flavor f = Flavor::Perturbed);
    static ModeKind acoustic_wave(int sign, Flavor f = Flavor::Perturbed);
};

bool mode_admissible(const ModeKind& kind, const WaveIndex& k);

// Frequencies. All take integer indices; physical wavenumbers are 2*pi*k.
double acoustic_frequency(const WaveIndex& k);  // 2*pi*sqrt(kx^2+ky^2+kz^2)

struct FastFrequencies {
    double omega_gw = 0.0;  // small quartic root, in [0, eta]
    double omega_aw = 0.0;  // large quartic root
};
// Both quartic roots; the small root uses the rationalized subtraction-free
// form. Throws ZeroMode at the origin.
FastFrequencies fast_frequencies(const WaveIndex& k, const Eta& eta);
// The internal-wave branch; DomainError unless k_h != 0 and kz != 0.
double gw_frequency(const WaveIndex& k, const Eta& eta);
// eta*|k_h|/sqrt(|k_h|^2+|k_z|^2); DomainError unless k_h != 0 and kz != 0.
double soundproof_gw_frequency(const WaveIndex& k, const Eta& eta);

struct EigenPair {
    ModeKind kind;
    WaveIndex index;
    Eta eta;
    double omega = 0.0;  // signed: L U = i*omega*U for the flavor's operator
    // Coefficients (Q, H, V1, V2, W) at the single index. Soundproof modes
    // leave Q = 0; their eps*p pressure rider rides along separately.
    std::array<cplx, 5> vec{};
    cplx pressure{0.0, 0.0};
};

EigenPair eigenvector(const ModeKind& kind, const WaveIndex& k,
                      const Eta& eta);

// Place a single eigenmode into a zero state at its index (no Hermitian
// partner; use State::enforce_invariants or add the conjugate mode for a
// real field).
State place_mode(const EigenPair& mode, const Resolution& res);

// Per-index amplitudes of a State in the perturbed eigenbasis. Amplitudes at
// inadmissible slots are identically zero. The renormalized accessors divide
// the mf_2 (kz != 0) and gw amplitudes by eta, matching the bookkeeping that
// treats eta*U as the O(1) basis vector.
class ModalDecomposition {
  public:
    struct Amps {
        std::array<cplx, 4> mf{};
        std::array<cplx, 2> gw{};  // +, -
        std::array<cplx, 2> aw{};  // +, -
    };

    ModalDecomposition(Resolution res, Eta eta);

    const Resolution& res() const { return res_; }
    const Eta& eta() const { return eta_; }

    Amps& at(std::size_t flat) { return a_[flat]; }
    const Amps& at(std::size_t flat) const { return a_[flat]; }

    cplx amplitude(const ModeKind& kind, const WaveIndex& k) const;
    cplx renormalized_amplitude(const ModeKind& kind, const WaveIndex& k) const;
    // True if the paper bookkeeping attaches an eta factor to this slot.
    static bool renormalized_slot(const ModeKind& kind, const WaveIndex& k);

    std::size_t flat_index(const WaveIndex& k) const;

  private:
    Resolution res_;
    Eta eta_;
    std::vector<Amps> a_;
};

ModalDecomposition decompose(const State& u, const Eta& eta);
State reconstruct(const ModalDecomposition& dec);

struct BranchSet {
    bool mf = false;
    bool gw = false;
    bool aw = false;

    static BranchSet all() { return {true, true, true}; }
    static BranchSet only_mf() { return {true, false, false}; }
    static BranchSet only_gw() { return {false, true, false}; }
    static BranchSet only_aw() { return {false, false, true}; }
};

State project(const State& u, const Eta& eta, const BranchSet& branches);

ReducedState reduce_dimension(const State& u);

void truncate(State& u, int K);
void truncate(ReducedState& u, int K);
State truncated(State u, int K);
ReducedState truncated(ReducedState u, int K);

// Soundproof eigenbasis amplitudes of a divergence-free reduced state.
class SoundproofDecomposition {
  public:
    struct Amps {
        std::array<cplx, 4> mf{};
        std::array<cplx, 2> gw{};
    };

    SoundproofDecomposition(Resolution res, Eta eta);
    Amps& at(std::size_t flat) { return a_[flat]; }
    const Amps& at(std::size_t flat) const { return a_[flat]; }
    const Resolution& res() const { return res_; }
    const Eta& eta() const { return eta_; }

  private:
    Resolution res_;
    Eta eta_;
    std::vector<Amps> a_;
};

SoundproofDecomposition sp_decompose(const ReducedState& s, const Eta& eta);
ReducedState sp_reconstruct(const SoundproofDecomposition& dec);

// Asymptotic gap audit at one index: frequency and eigenvector distances
// between the perturbed and the soundproof / pure acoustic families, in the
// paper normalization (Q = 1 / pressure rider = 1). Evaluated with
// subtraction-free algebra so the O(eta^2) and O(eta^3) gaps keep full
// relative accuracy down to eta = 1e-3.
struct GapReport {
    WaveIndex index;
    Eta eta;
    double aw_freq_gap = 0.0;  // omega_aw - omega_a > 0 (kz != 0)
    double gw_freq_gap = 0.0;  // omega_sp - omega_gw > 0
    double aw_vec_gap = 0.0;   // L2 distance of acoustic eigenvectors
    double gw_vec_gap = 0.0;   // L2 distance of internal-wave eigenvectors
};

GapReport mode_gap_report(const WaveIndex& k, const Eta& eta);

// Stable pinching quantities used by the audits: omega_aw^2 - omega_a^2 and
// omega_gw, both guaranteed non-negative by construction.
struct PinchingCheck {
    double aw_sq_excess = 0.0;  // omega_aw^2 - omega_a^2, in [0, eta^2]
    double omega_gw = 0.0;      // in [0, eta]
};
PinchingCheck pinching_check(const WaveIndex& k, const Eta& eta);

}  // namespace stratwave
