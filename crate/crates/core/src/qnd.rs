//! Frame algebra and validity checks for a dispersive qubit readout of the
//! cavity occupation. Pure scalar arithmetic, no dynamics.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutParams {
    /// Qubit splitting `ε`.
    pub epsilon: f64,
    /// Lab-frame cavity frequency.
    pub omega_c: f64,
    /// Drive frequency `ω_d`.
    pub omega_drive: f64,
    /// Qubit-cavity coupling `λ`.
    pub lambda: f64,
    /// Cavity displacement.
    pub alpha: C64,
    pub g: f64,
    pub omega_m: f64,
}

impl ReadoutParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("epsilon", self.epsilon),
            ("omega_c", self.omega_c),
            ("omega_drive", self.omega_drive),
            ("lambda", self.lambda),
            ("omega_m", self.omega_m),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        if !self.g.is_finite() || !self.alpha.re.is_finite() || !self.alpha.im.is_finite() {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: "coupling and displacement must be finite".into(),
            });
        }
        Ok(())
    }

    /// `|g α ω_m|`, the size of the displacement-induced coupling.
    pub fn displacement_coupling(&self) -> f64 {
        (self.g * self.omega_m).abs() * self.alpha.norm()
    }
}

/// Factors turning the qualitative conditions into checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityThresholds {
    /// Upper limit on `|δ|/λ`.
    pub max_detuning_ratio: f64,
    /// "Much smaller than" factor for the back-action check.
    pub much_less_factor: f64,
    /// Largest acceptable compensation amplitude `λ|α|`.
    pub compensation_cap: f64,
}

impl Default for FeasibilityThresholds {
    fn default() -> Self {
        Self {
            max_detuning_ratio: 10.0,
            much_less_factor: 0.1,
            compensation_cap: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameShifts {
    /// `Δ' = ε - ω_d`.
    pub delta_prime: f64,
    /// `δ = ε - ω_c`.
    pub delta_bias: f64,
}

pub fn frame_shifts(p: &ReadoutParams) -> FrameShifts {
    FrameShifts {
        delta_prime: p.epsilon - p.omega_drive,
        delta_bias: p.epsilon - p.omega_c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn below(value: f64, limit: f64) -> Self {
        Self {
            value,
            limit,
            pass: value < limit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveReport {
    pub shifts: FrameShifts,
    /// `χ = λ²/δ`.
    pub chi: f64,
    /// `|δ|/λ` against the detuning-ratio limit.
    pub detuning_ratio: Check,
    /// `λ³/δ²` against a fraction of `|g α ω_m|`.
    pub back_action: Check,
    /// `(λ |g α| ω_m)² / δ³`.
    pub cross_shift: f64,
    pub cross_shift_ratio: f64,
}

impl DispersiveReport {
    pub fn all_pass(&self) -> bool {
        self.detuning_ratio.pass && self.back_action.pass
    }
}

pub fn dispersive_report(p: &ReadoutParams, thresholds: &FeasibilityThresholds) -> Result<DispersiveReport> {
    p.validate()?;
    let shifts = frame_shifts(p);
    let delta = shifts.delta_bias;
    if delta == 0.0 {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "qubit resonant with the cavity, dispersive limit undefined".into(),
        });
    }
    let lambda = p.lambda;
    let chi = lambda * lambda / delta;
    let coupling = p.displacement_coupling();
    let cross_shift = (lambda * coupling).powi(2) / delta.powi(3);
    Ok(DispersiveReport {
        shifts,
        chi,
        detuning_ratio: Check::below(delta.abs() / lambda, thresholds.max_detuning_ratio),
        back_action: Check::below(
            lambda.powi(3) / (delta * delta),
            thresholds.much_less_factor * coupling,
        ),
        cross_shift,
        cross_shift_ratio: cross_shift / chi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompensationDrive {
    pub amplitude: f64,
    /// In `[0, 2π)`.
    pub phase: f64,
    pub cap: f64,
    pub feasible: bool,
}

/// Qubit drive cancelling the displacement-induced `λ(α σ₊ + h.c.)` term.
pub fn compensation_drive(p: &ReadoutParams, thresholds: &FeasibilityThresholds) -> CompensationDrive {
    let amplitude = p.lambda * p.alpha.norm();
    let phase = if amplitude == 0.0 {
        0.0
    } else {
        (p.alpha.arg() + PI).rem_euclid(TAU)
    };
    CompensationDrive {
        amplitude,
        phase,
        cap: thresholds.compensation_cap,
        feasible: amplitude <= thresholds.compensation_cap,
    }
}
