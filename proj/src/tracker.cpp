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

#include "beamtrack/tracker.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "beamtrack/array.hpp"
#include "beamtrack/motion.hpp"

namespace beamtrack {

namespace {

VehicleState unpack_state(const RealVec &x)
{
    VehicleState s;
    s.theta = x[0];
    s.d = x[1];
    s.v = x[2];
    if (x.size() >= 5)
        s.beta = Complex(x[3], x[4]);
    return s;
}

void check_square(const RealMat &m, Eigen::Index dim, const char *name)
{
    if (m.rows() != dim || m.cols() != dim)
    {
        std::ostringstream oss;
        oss << name << ": expected " << dim << "x" << dim << " matrix, got (" << m.rows() << "x"
            << m.cols() << ")";
        throw std::invalid_argument(oss.str());
    }
}

} // namespace

// --- vehicle state model -------------------------------------------------

VehicleStateModel::VehicleStateModel(double dt, int dim) : dt_(dt), dim_(dim)
{
    if (dim != 3 && dim != 5)
        throw std::invalid_argument("VehicleStateModel: dim must be 3 or 5, got " +
                                    std::to_string(dim));
    if (!(dt > 0.0))
        throw std::invalid_argument("VehicleStateModel: dt must be positive");
}

RealVec VehicleStateModel::apply(const RealVec &x) const
{
    if (x.size() != dim_)
        throw std::invalid_argument("VehicleStateModel::apply: state dimension mismatch");

    VehicleState next = evolve_state(unpack_state(x), dt_);
    RealVec out(dim_);
    out[0] = next.theta;
    out[1] = next.d;
    out[2] = next.v;
    if (dim_ == 5)
    {
        out[3] = next.beta.real();
        out[4] = next.beta.imag();
    }
    return out;
}

RealMat VehicleStateModel::jacobian(const RealVec &x) const
{
    if (x.size() != dim_)
        throw std::invalid_argument("VehicleStateModel::jacobian: state dimension mismatch");

    RealVec full = RealVec::Zero(5);
    full.head(x.size()) = x;
    // The (θ, d, v) block is independent of β, so the dim-3 Jacobian is the
    // top-left block of the full one.
    return jacobian_g(full, dt_).topLeftCorner(dim_, dim_);
}

RealMat jacobian_g(const RealVec &x, double dt)
{
    if (x.size() != 5)
        throw std::invalid_argument("jacobian_g: state must be dim 5, got " +
                                    std::to_string(x.size()));
    double theta = x[0];
    double d = x[1];
    double v = x[2];
    Complex beta(x[3], x[4]);
    if (!(d > 0.0))
        throw std::invalid_argument("jacobian_g: distance must be positive, got " +
                                    std::to_string(d));

    double sin_t = std::sin(theta);
    double cos_t = std::cos(theta);
    double travel = v * dt;

    RealMat j = RealMat::Zero(5, 5);

    // θ' = θ + v·dt·sinθ/d
    j(0, 0) = 1.0 + travel * cos_t / d;
    j(0, 1) = -travel * sin_t / (d * d);
    j(0, 2) = dt * sin_t / d;

    // d' = d − v·dt·cosθ
    j(1, 0) = travel * sin_t;
    j(1, 1) = 1.0;
    j(1, 2) = -dt * cos_t;

    // v' = v
    j(2, 2) = 1.0;

    // β' = β·(1 + v·dt·cosθ/d): the scalar factor multiplies Re β and Im β
    // identically; derivatives of the factor couple both components to
    // (θ, d, v).
    double factor = 1.0 + travel * cos_t / d;
    Complex dbeta_dtheta = beta * (-travel * sin_t / d);
    Complex dbeta_dd = beta * (-travel * cos_t / (d * d));
    Complex dbeta_dv = beta * (dt * cos_t / d);

    j(3, 0) = dbeta_dtheta.real();
    j(3, 1) = dbeta_dd.real();
    j(3, 2) = dbeta_dv.real();
    j(3, 3) = factor;

    j(4, 0) = dbeta_dtheta.imag();
    j(4, 1) = dbeta_dd.imag();
    j(4, 2) = dbeta_dv.imag();
    j(4, 4) = factor;

    return j;
}

// --- echo-based measurement model ----------------------------------------

DfrcMeasurementModel::DfrcMeasurementModel(const LinkBudget &budget, int n_tx, int n_rx,
                                           double theta_beam)
    : budget_(budget), n_tx_(n_tx), n_rx_(n_rx), theta_beam_(theta_beam),
      kappa_(array_gain(n_tx, n_rx))
{
}

RealVec DfrcMeasurementModel::mean(const RealVec &x) const
{
    if (x.size() != 5)
        throw std::invalid_argument("DfrcMeasurementModel::mean: state must be dim 5");
    double theta = x[0];
    double d = x[1];
    double v = x[2];
    Complex beta(x[3], x[4]);

    Complex s = beam_gain(theta, theta_beam_, n_tx_);
    ComplexVec b = steering(n_rx_, theta);
    ComplexVec echo = (kappa_ * beta * s) * b;

    RealVec out(2 * n_rx_ + 2);
    out.head(2 * n_rx_) = real_augment_vec(echo);
    out[2 * n_rx_] = 2.0 * d / budget_.c;
    out[2 * n_rx_ + 1] = 2.0 * v * std::cos(theta) * budget_.fc / budget_.c;
    return out;
}

RealMat DfrcMeasurementModel::jacobian(const RealVec &x) const
{
    if (x.size() != 5)
        throw std::invalid_argument("DfrcMeasurementModel::jacobian: state must be dim 5");
    double theta = x[0];
    double v = x[2];
    Complex beta(x[3], x[4]);

    Complex s = beam_gain(theta, theta_beam_, n_tx_);
    Complex ds = beam_gain_dtheta(theta, theta_beam_, n_tx_);
    ComplexVec b = steering(n_rx_, theta);
    ComplexVec db = steering_dtheta(n_rx_, theta);

    RealMat j = RealMat::Zero(2 * n_rx_ + 2, 5);
    for (int m = 0; m < n_rx_; ++m)
    {
        // η_m = κ·β·b_m(θ)·s(θ); derivatives w.r.t. Re β and Im β are taken
        // directly (κ·b_m·s and j·κ·b_m·s) so they stay defined at β = 0.
        Complex deta_dtheta = kappa_ * beta * (db[m] * s + b[m] * ds);
        Complex deta_dre = kappa_ * b[m] * s;
        Complex deta_dim = Complex(0.0, 1.0) * deta_dre;

        j(2 * m, 0) = deta_dtheta.real();
        j(2 * m, 3) = deta_dre.real();
        j(2 * m, 4) = deta_dim.real();

        j(2 * m + 1, 0) = deta_dtheta.imag();
        j(2 * m + 1, 3) = deta_dre.imag();
        j(2 * m + 1, 4) = deta_dim.imag();
    }

    j(2 * n_rx_, 1) = 2.0 / budget_.c;

    j(2 * n_rx_ + 1, 0) = -2.0 * v * std::sin(theta) * budget_.fc / budget_.c;
    j(2 * n_rx_ + 1, 2) = 2.0 * budget_.fc * std::cos(theta) / budget_.c;

    return j;
}

NoiseDiag DfrcMeasurementModel::noise_diag(const RealVec &x) const
{
    if (x.size() != 5)
        throw std::invalid_argument("DfrcMeasurementModel::noise_diag: state must be dim 5");
    Complex beta(x[3], x[4]);
    Complex delta = beam_gain(x[0], theta_beam_, n_tx_);
    NoiseProfile profile = noise_variances(budget_, beta, delta, kappa_);

    NoiseDiag out;
    out.diag.resize(2 * n_rx_ + 2);
    out.diag.head(2 * n_rx_).setConstant(0.5 * profile.sigma1_sq);
    out.diag[2 * n_rx_] = profile.sigma2_sq;
    out.diag[2 * n_rx_ + 1] = profile.sigma3_sq;
    out.clamped = profile.clamped;
    return out;
}

// --- feedback-baseline measurement model ----------------------------------

namespace
{

// Pack a scalar noise profile into the 4-row feedback diagonal: the complex
// pilot splits its variance evenly across its real and imaginary rows.
NoiseDiag feedback_noise_from_profile(const NoiseProfile &profile)
{
    NoiseDiag out;
    out.diag.resize(4);
    out.diag[0] = 0.5 * profile.sigma1_sq;
    out.diag[1] = 0.5 * profile.sigma1_sq;
    out.diag[2] = profile.sigma2_sq;
    out.diag[3] = profile.sigma3_sq;
    out.clamped = profile.clamped;
    return out;
}

} // namespace

FeedbackMeasurementModel::FeedbackMeasurementModel(const LinkBudget &budget, int n_tx,
                                                   int m_vehicle, Complex alpha_known,
                                                   double theta_tx_beam, double theta_rx_beam,
                                                   double delta_est)
    : budget_(budget), fb_budget_(budget), n_tx_(n_tx), m_vehicle_(m_vehicle),
      alpha_known_(alpha_known), theta_tx_beam_(theta_tx_beam), theta_rx_beam_(theta_rx_beam),
      delta_est_(delta_est), kappa_c_(array_gain(n_tx, m_vehicle))
{
    if (!(delta_est >= 0.0 && delta_est <= 1.0))
        throw std::invalid_argument("FeedbackMeasurementModel: delta_est must be in [0, 1]");
    // The pilot is received on the communication link without matched
    // filtering: gain 1, noise floor σ_C².
    fb_budget_.g_mf = 1.0;
    fb_budget_.sigma_sq = budget.sigma_c_sq;
}

RealVec FeedbackMeasurementModel::mean(const RealVec &x) const
{
    if (x.size() != 3)
        throw std::invalid_argument("FeedbackMeasurementModel::mean: state must be dim 3");
    double theta = x[0];
    double d = x[1];
    double v = x[2];

    Complex t = beam_gain(theta_rx_beam_, theta, m_vehicle_); // wᴴ·u(θ)
    Complex s = beam_gain(theta, theta_tx_beam_, n_tx_);      // aᴴ(θ)·f
    Complex pilot = kappa_c_ * alpha_known_ * t * s;

    RealVec out(4);
    out[0] = pilot.real();
    out[1] = pilot.imag();
    out[2] = 2.0 * d / budget_.c;
    out[3] = 2.0 * v * std::cos(theta) * budget_.fc / budget_.c;
    return out;
}

RealMat FeedbackMeasurementModel::jacobian(const RealVec &x) const
{
    if (x.size() != 3)
        throw std::invalid_argument("FeedbackMeasurementModel::jacobian: state must be dim 3");
    double theta = x[0];
    double v = x[2];

    // d/dθ of the second argument of beam_gain, via conjugate symmetry:
    // beam_gain(a, b) = conj(beam_gain(b, a)).
    Complex t = beam_gain(theta_rx_beam_, theta, m_vehicle_);
    Complex s = beam_gain(theta, theta_tx_beam_, n_tx_);
    Complex dt_dtheta = std::conj(beam_gain_dtheta(theta, theta_rx_beam_, m_vehicle_));
    Complex ds_dtheta = beam_gain_dtheta(theta, theta_tx_beam_, n_tx_);
    Complex dpilot_dtheta = kappa_c_ * alpha_known_ * (dt_dtheta * s + t * ds_dtheta);

    // α is a known constant, so the pilot rows have no distance column and
    // θ enters only through the transmit-beam and combiner responses.
    RealMat j = RealMat::Zero(4, 3);
    j(0, 0) = dpilot_dtheta.real();
    j(1, 0) = dpilot_dtheta.imag();

    j(2, 1) = 2.0 / budget_.c;

    j(3, 0) = -2.0 * v * std::sin(theta) * budget_.fc / budget_.c;
    j(3, 2) = 2.0 * budget_.fc * std::cos(theta) / budget_.c;
    return j;
}

NoiseDiag FeedbackMeasurementModel::noise_diag(const RealVec &x) const
{
    if (x.size() != 3)
        throw std::invalid_argument("FeedbackMeasurementModel::noise_diag: state must be dim 3");
    NoiseDiag out = channel_noise_diag();
    if (!pilot_locked())
    {
        // Pilot lock lost: the mean model no longer describes the received
        // symbol, so the pilot rows are numerically excluded (class comment).
        out.diag[0] *= kUnlockInflation;
        out.diag[1] *= kUnlockInflation;
    }
    return out;
}

NoiseDiag FeedbackMeasurementModel::channel_noise_diag() const
{
    // Same variance law as the echo-based scheme with G = 1 and the channel
    // coefficient α in place of the reflection coefficient: exactly 10× the
    // echo-based values at equal power. The beam gain comes from the
    // constructor (see the class comment), so the diagonal is
    // state-independent.
    NoiseProfile profile =
        noise_variances(fb_budget_, alpha_known_, Complex(delta_est_, 0.0), kappa_c_);
    return feedback_noise_from_profile(profile);
}

// --- EKF recursion ---------------------------------------------------------

PredictResult predict_with(const EkfBelief &belief, const StateModel &model, const RealMat &q_s)
{
    Eigen::Index dim = belief.x_hat.size();
    if (model.dim() != dim)
    {
        std::ostringstream oss;
        oss << "predict_with: belief dim " << dim << " does not match model dim " << model.dim();
        throw std::invalid_argument(oss.str());
    }
    check_square(belief.m, dim, "predict_with: MSE matrix");
    check_square(q_s, dim, "predict_with: process noise");

    RealMat g = model.jacobian(belief.x_hat);

    PredictResult result;
    result.one_step.x_hat = model.apply(belief.x_hat);
    result.one_step.m = symmetrize(g * belief.m * g.transpose()) + q_s;
    result.two_step_state = model.apply(result.one_step.x_hat);
    return result;
}

PredictResult predict(const EkfBelief &belief, double dt, const RealMat &q_s)
{
    VehicleStateModel model(dt, static_cast<int>(belief.x_hat.size()));
    return predict_with(belief, model, q_s);
}

UpdateResult update(const EkfBelief &belief_pred, const RealVec &y, const MeasurementModel &model,
                    const UpdateOptions &opts)
{
    Eigen::Index n = belief_pred.x_hat.size();
    Eigen::Index m = y.size();
    if (model.state_dim() != n)
    {
        std::ostringstream oss;
        oss << "update: belief dim " << n << " does not match model state dim "
            << model.state_dim();
        throw std::invalid_argument(oss.str());
    }
    if (model.measurement_dim() != m)
    {
        std::ostringstream oss;
        oss << "update: measurement dim " << m << " does not match model dim "
            << model.measurement_dim();
        throw std::invalid_argument(oss.str());
    }
    check_square(belief_pred.m, n, "update: MSE matrix");

    NoiseDiag qm = model.noise_diag(belief_pred.x_hat);
    for (Eigen::Index i = 0; i < m; ++i)
        if (!(qm.diag[i] > 0.0) || !std::isfinite(qm.diag[i]))
            throw std::invalid_argument("update: measurement noise variance at index " +
                                        std::to_string(i) + " is not positive and finite");

    RealMat h = model.jacobian(belief_pred.x_hat);
    RealVec h0 = model.mean(belief_pred.x_hat);

    // Scale every measurement row by 1/√Q_m,ii. In scaled coordinates the
    // noise covariance is the identity, so the innovation matrix is
    // I + H̃ M H̃ᵀ — well-conditioned regardless of the raw variance spread.
    // The gain transforms back exactly: K = M H̃ᵀ S̃⁻¹ D.
    RealVec d_inv_sqrt = qm.diag.cwiseSqrt().cwiseInverse();
    RealMat h_scaled = d_inv_sqrt.asDiagonal() * h;

    RealMat s_scaled =
        RealMat::Identity(m, m) + symmetrize(h_scaled * belief_pred.m * h_scaled.transpose());
    RealMat s_inv = invert(s_scaled, opts.cond_cap);

    UpdateResult result;
    result.innovation = y - h0;
    result.noise_clamped = qm.clamped;
    RealVec innov_scaled = d_inv_sqrt.cwiseProduct(result.innovation);

    if (opts.row_gate_sigma > 0.0)
    {
        // Per-row validation: each scaled innovation has variance S̃_ii, so
        // rows violating the row_gate_sigma bound are inconsistent with the
        // filter's own uncertainty and are removed from this update (zero
        // row in H̃ and zero innovation entry — exactly a deleted row).
        // The consistent rows still update the state below.
        double k_sq = opts.row_gate_sigma * opts.row_gate_sigma;
        bool any_dropped = false;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            if (innov_scaled[i] * innov_scaled[i] > k_sq * s_scaled(i, i))
            {
                h_scaled.row(i).setZero();
                innov_scaled[i] = 0.0;
                ++result.gated_rows;
                any_dropped = true;
            }
        }
        if (any_dropped)
        {
            s_scaled = RealMat::Identity(m, m) +
                       symmetrize(h_scaled * belief_pred.m * h_scaled.transpose());
            s_inv = invert(s_scaled, opts.cond_cap);
        }
    }

    RealMat gain_scaled = belief_pred.m * h_scaled.transpose() * s_inv;

    // Normalized innovation squared over the surviving rows: in scaled
    // coordinates the innovation covariance is exactly S̃, so ĩᵀ S̃⁻¹ ĩ
    // follows χ² with one degree per surviving row when the filter is
    // consistent.
    result.nis = innov_scaled.dot(s_inv * innov_scaled);

    double md = static_cast<double>(m);
    if (opts.nis_gate_sigma > 0.0 &&
        result.nis > md + opts.nis_gate_sigma * std::sqrt(2.0 * md))
    {
        // The measurement is wildly inconsistent with the filter's own
        // uncertainty — e.g. the beam points far off target and the model
        // linearization is meaningless. Reject it and coast on the
        // prediction rather than absorb an explanation-free innovation.
        result.belief = belief_pred;
        result.gain = RealMat::Zero(n, m);
        result.gated = true;
    }
    else
    {
        result.belief.x_hat = belief_pred.x_hat + gain_scaled * innov_scaled;
        result.belief.m =
            symmetrize((RealMat::Identity(n, n) - gain_scaled * h_scaled) * belief_pred.m);
        result.gain = gain_scaled * d_inv_sqrt.asDiagonal();
    }

    if (opts.clamp_theta)
    {
        double &theta = result.belief.x_hat[opts.theta_index];
        if (theta < opts.theta_clamp_lo)
        {
            theta = opts.theta_clamp_lo;
            result.theta_clamped = true;
        }
        else if (theta > opts.theta_clamp_hi)
        {
            theta = opts.theta_clamp_hi;
            result.theta_clamped = true;
        }
    }
    return result;
}

} // namespace beamtrack
