// SPDX-License-Identifier: Apache-2.0
//
// beamtrack — radar-assisted predictive beamforming simulator for V2I links
// Copyright (C) 2026 beamtrack contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <numbers>

#include "beamtrack/numerics.hpp"
#include "beamtrack/propagation.hpp"

namespace beamtrack {

// Extended Kalman filter over real-augmented states. Two state layouts are
// used: the echo-based tracker runs dim 5 = [θ, d, v, Re β, Im β]; the
// feedback baseline runs dim 3 = [θ, d, v]. Complex measurements are
// real-augmented with the interleaved layout of real_augment_vec.

// Filter belief: state estimate and MSE matrix.
struct EkfBelief
{
    RealVec x_hat;
    RealMat m;
};

// Diagonal measurement-noise covariance evaluated at a state, plus a flag
// recording that the delay/Doppler entries were clamped at the track-loss
// ceiling.
struct NoiseDiag
{
    RealVec diag;
    bool clamped = false;
};

// A measurement model: mean h(x), Jacobian H(x) and noise covariance
// Q_m(x), all in real-augmented coordinates. Implementations are immutable
// and safe to share across threads.
class MeasurementModel
{
  public:
    virtual ~MeasurementModel() = default;

    virtual int state_dim() const = 0;
    virtual int measurement_dim() const = 0;

    // Measurement mean h(x).
    virtual RealVec mean(const RealVec &x) const = 0;

    // Jacobian ∂h/∂x, measurement_dim × state_dim.
    virtual RealMat jacobian(const RealVec &x) const = 0;

    // Diagonal of Q_m evaluated at x. Complex measurement components carry
    // half their total variance per real slot; real scalars carry it whole.
    virtual NoiseDiag noise_diag(const RealVec &x) const = 0;
};

// A state-evolution model: map g(x) and Jacobian G(x). The vehicle model
// below is the production instance; tests plug in synthetic models through
// the same seam.
class StateModel
{
  public:
    virtual ~StateModel() = default;

    virtual int dim() const = 0;
    virtual RealVec apply(const RealVec &x) const = 0;
    virtual RealMat jacobian(const RealVec &x) const = 0;
};

// The vehicle's approximate polar evolution model over one epoch of length
// dt. dim must be 5 (full state) or 3 (feedback baseline, no reflection
// coefficient).
class VehicleStateModel : public StateModel
{
  public:
    VehicleStateModel(double dt, int dim);

    int dim() const override { return dim_; }
    RealVec apply(const RealVec &x) const override;
    RealMat jacobian(const RealVec &x) const override;

  private:
    double dt_;
    int dim_;
};

// Analytic Jacobian of the vehicle evolution model on the full dim-5 state.
// Throws std::invalid_argument when x is not dim 5 or d ≤ 0.
RealMat jacobian_g(const RealVec &x, double dt);

// Echo-based measurement model: h(x) = [augment(κβ·b(θ)·aᴴ(θ)a(θ_beam));
// 2d/c; 2v·cosθ·f_c/c], dim 2·n_rx + 2 over the dim-5 state. The beam gain
// inside the noise law is evaluated at the belief's angle against the
// committed transmit beam — the filter's own alignment belief, not the
// true one.
class DfrcMeasurementModel : public MeasurementModel
{
  public:
    DfrcMeasurementModel(const LinkBudget &budget, int n_tx, int n_rx, double theta_beam);

    int state_dim() const override { return 5; }
    int measurement_dim() const override { return 2 * n_rx_ + 2; }
    RealVec mean(const RealVec &x) const override;
    RealMat jacobian(const RealVec &x) const override;
    NoiseDiag noise_diag(const RealVec &x) const override;

    double theta_beam() const { return theta_beam_; }

  private:
    LinkBudget budget_;
    int n_tx_;
    int n_rx_;
    double theta_beam_;
    double kappa_;
};

// Feedback-baseline measurement model over the dim-3 state: one combined
// downlink pilot (complex), delay, and Doppler; dim 4. The pilot mean is
// κ̃·α·wᴴu(θ)·aᴴ(θ)f — the downlink symbol after matched filtering — so
// the angle enters through both the vehicle-side combiner response and the
// transmit-side beam gain. The channel coefficient α is perfectly known to
// this baseline and enters as a fixed constant: deriving its phase from
// the believed distance instead would wrap every half-wavelength
// (millimetres at mmWave carriers) and break the linearization, so
// distance is observed through the delay row alone. The noise law uses
// matched-filter gain 1 and the communication-link quantities (σ_C², |α|,
// κ̃ = √(n_tx·m)), which lands at 10× the echo-based variances at equal
// power. The beam gain δ inside the delay/Doppler variance rows is not a
// function of the state here: it is supplied at construction, because the
// filter's own predicted angle always sits at the centre of the beam it
// steered (a self-referential δ̂ ≡ 1 no matter how far the beam misses).
// The harness builds one instance with the true gain to synthesize a
// measurement and one with |pilot|/(κ̃|α|) — the gain the vehicle actually
// observes, since κ̃|α| is known — to run the filter.
//
// Pilot lock: when the supplied gain falls below kPilotLockFloor the
// receiver has lost the beam and the pilot mean model (a near-full-power
// symbol) no longer describes the received signal at all, so the two pilot
// rows are reported at a variance inflated by kUnlockInflation —
// numerically excluding them from any update — while delay and Doppler
// stay live at their honestly widened error bars. Absorbing an off-beam
// pilot instead would feed the filter an innovation that its linearization
// cannot explain and corrupt the velocity state. Lock returns, and with it
// the angle information, only once the believed beam re-covers the vehicle
// (|δ̂| back above the floor — near the beam centre, where the
// linearization is valid again).
class FeedbackMeasurementModel : public MeasurementModel
{
  public:
    // Measured beam gain below this is loss of pilot lock: at 0.9 the
    // residual beam offset is within ~0.2 beamwidths, so a locked pilot is
    // always absorbed near the centre of its linear response region.
    static constexpr double kPilotLockFloor = 0.9;
    // Variance multiplier for the pilot rows while unlocked; large enough
    // that the rows carry no weight, small enough to keep the scaled
    // innovation covariance comfortably invertible.
    static constexpr double kUnlockInflation = 1e12;

    // delta_est ∈ [0, 1]: beam-gain modulus used by the delay/Doppler rows
    // of the variance law (1 = aligned nominal) and by the pilot lock
    // test. Throws std::invalid_argument outside that range.
    FeedbackMeasurementModel(const LinkBudget &budget, int n_tx, int m_vehicle,
                             Complex alpha_known, double theta_tx_beam, double theta_rx_beam,
                             double delta_est = 1.0);

    int state_dim() const override { return 3; }
    int measurement_dim() const override { return 4; }
    RealVec mean(const RealVec &x) const override;
    RealMat jacobian(const RealVec &x) const override;
    // Receiver-reported error bars: the physical law, with the pilot rows
    // inflated by kUnlockInflation while the pilot is unlocked.
    NoiseDiag noise_diag(const RealVec &x) const override;

    // Physical channel noise, for measurement synthesis: the plain variance
    // law with no lock logic. An unlocked pilot still arrives over the air
    // with ordinary thermal noise on it — the receiver merely refuses to
    // interpret its mean — and the measured-gain readout |pilot|/(κ̃|α|)
    // depends on those honest pilot rows.
    NoiseDiag channel_noise_diag() const;

    bool pilot_locked() const { return delta_est_ >= kPilotLockFloor; }

  private:
    LinkBudget budget_;    // radar-side budget as configured
    LinkBudget fb_budget_; // downlink view: G = 1, noise floor σ_C²
    int n_tx_;
    int m_vehicle_;
    Complex alpha_known_;
    double theta_tx_beam_;
    double theta_rx_beam_;
    double delta_est_;
    double kappa_c_;
};

// One- and two-step prediction. The one-step belief feeds the update and
// the RSU transmit beam; the two-step state (no covariance) exists only to
// point the vehicle's receive beam one further epoch ahead.
struct PredictResult
{
    EkfBelief one_step;
    RealVec two_step_state;
};

// Predict through an arbitrary state model: x⁺ = g(x̂), M⁺ = G M Gᵀ + Q_s,
// two-step state g(g(x̂)). Throws std::invalid_argument on dimension
// mismatches.
PredictResult predict_with(const EkfBelief &belief, const StateModel &model, const RealMat &q_s);

// Predict through the vehicle model (dimension taken from the belief).
PredictResult predict(const EkfBelief &belief, double dt, const RealMat &q_s);

struct UpdateOptions
{
    // θ is clamped into [theta_clamp_lo, theta_clamp_hi] after the update so
    // steering vectors and Jacobians stay well-defined; a clamp is flagged.
    bool clamp_theta = true;
    double theta_clamp_lo = 1e-3;
    double theta_clamp_hi = std::numbers::pi - 1e-3;
    int theta_index = 0;
    double cond_cap = 1e12;
    // Whole-vector innovation gate: if the normalized innovation squared
    // exceeds m + nis_gate_sigma·√(2m) (m = measurement dim; mean and
    // spread of a χ²_m variable), the measurement is rejected outright and
    // the prediction is kept. ≤ 0 disables (default).
    double nis_gate_sigma = 0.0;
    // Per-row validation gate: any measurement row whose scaled innovation
    // satisfies ĩ_i² > row_gate_sigma²·S̃_ii is excluded from the update
    // (exactly equivalent to removing that row); the remaining rows are
    // still absorbed. Because S̃_ii includes the projected state
    // uncertainty, a grown covariance re-admits a row however wrong its
    // mean model is — use it against sporadic outliers, not sustained
    // model mismatch. ≤ 0 disables (default).
    double row_gate_sigma = 0.0;
};

struct UpdateResult
{
    EkfBelief belief;
    RealMat gain;       // K, in unscaled measurement coordinates
    RealVec innovation; // y − h(x_pred)
    double nis = 0.0;   // normalized innovation squared, innovᵀ S⁻¹ innov
    bool theta_clamped = false;
    bool noise_clamped = false; // filter-side track-loss ceiling hit
    bool gated = false;         // whole vector rejected; belief = prediction
    int gated_rows = 0;         // rows excluded by the per-row gate
};

// Measurement update: K = M Hᵀ(Q_m + H M Hᵀ)⁻¹, x̂ ← x̂ + K(y − h(x̂)),
// M ← symmetrize((I − K H) M). Internally every measurement row is scaled
// to unit nominal noise variance before the inversion and unscaled after —
// the two operations offset exactly, and the innovation matrix keeps a
// dynamic range of order |δ|⁻² instead of the raw ~1e18 spread between the
// echo and delay variances. Throws SingularMatrixError (with condition
// estimate) when the innovation covariance is not invertible.
UpdateResult update(const EkfBelief &belief_pred, const RealVec &y, const MeasurementModel &model,
                    const UpdateOptions &opts = {});

} // namespace beamtrack
