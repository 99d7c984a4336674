//! The approximate estimators: every snapshot is inverted with the
//! infinite-depth formula `(2^N+1) U†|b⟩⟨b|U − I`.

use super::snapshot::{Snapshot, Unitary};
use crate::clifford::{CanonicalStabilizers, PauliString, StabilizerTableau};
use crate::error::{Error, Result};

/// A snapshot together with its rebuilt unitary.
#[derive(Clone, Debug)]
pub struct RealizedSnapshot {
    pub snapshot: Snapshot,
    pub unitary: Unitary,
}

impl RealizedSnapshot {
    pub fn new(snapshot: Snapshot) -> Result<Self> {
        let unitary = snapshot.plan.realize()?;
        Ok(RealizedSnapshot { snapshot, unitary })
    }

    pub fn num_qubits(&self) -> usize {
        self.snapshot.outcome.len()
    }

    /// `U†|b⟩`.
    pub fn shadow_state(&self) -> Result<StabilizerTableau> {
        let mut t = StabilizerTableau::basis(&self.snapshot.outcome);
        self.unitary.inverse().apply(&mut t)?;
        Ok(t)
    }
}

fn realize_all(snaps: &[Snapshot]) -> Result<Vec<RealizedSnapshot>> {
    snaps.iter().cloned().map(RealizedSnapshot::new).collect()
}

/// `2^N + 1`.
pub fn inverse_factor(n: usize) -> f64 {
    2f64.powi(n as i32) + 1.0
}

fn check_n(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::SizeMismatch { left: got, right: want });
    }
    Ok(())
}

/// `f̃ = (2^N+1)|⟨b|U|ψ⟩|² − 1 ∈ [−1, 2^N]`.
pub fn fidelity_term(snap: &RealizedSnapshot, target: &StabilizerTableau) -> Result<f64> {
    let n = snap.num_qubits();
    check_n(target.num_qubits(), n)?;
    let mut t = target.clone();
    snap.unitary.apply(&mut t)?;
    let f = inverse_factor(n) * t.basis_overlap_sq(&snap.snapshot.outcome) - 1.0;
    assert!((-1.0..=2f64.powi(n as i32)).contains(&f), "fidelity term {f} outside [-1, 2^N]");
    Ok(f)
}

pub fn fidelity_estimate_realized(snaps: &[RealizedSnapshot], target: &StabilizerTableau) -> Result<f64> {
    if snaps.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let mut s = 0.0;
    for snap in snaps {
        s += fidelity_term(snap, target)?;
    }
    Ok(s / snaps.len() as f64)
}

/// `(1/M) Σ_r f̃_r`.
pub fn fidelity_estimate(snaps: &[Snapshot], target: &StabilizerTableau) -> Result<f64> {
    fidelity_estimate_realized(&realize_all(snaps)?, target)
}

/// `(2^N+1)²|⟨b_r|U_r U_s†|b_s⟩|² − 2^N − 2`, by running `U_s†` then `U_r`
/// on `|b_s⟩`.
pub fn purity_pair_term(r: &RealizedSnapshot, s: &RealizedSnapshot) -> Result<f64> {
    let n = r.num_qubits();
    check_n(s.num_qubits(), n)?;
    let mut t = s.shadow_state()?;
    r.unitary.apply(&mut t)?;
    let ov = t.basis_overlap_sq(&r.snapshot.outcome);
    Ok(pair_value(n, ov))
}

fn pair_value(n: usize, overlap: f64) -> f64 {
    let c = inverse_factor(n);
    c * c * overlap - (c - 1.0) - 2.0
}

/// Mean of the pair terms over ordered pairs `r ≠ s`.
///
/// The pair term is symmetric, so each unordered pair is evaluated once, as
/// an overlap of the canonical forms of `U_r†|b_r⟩` and `U_s†|b_s⟩`.
pub fn purity_estimate_realized(snaps: &[RealizedSnapshot]) -> Result<f64> {
    let m = snaps.len();
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    let n = snaps[0].num_qubits();
    let forms: Vec<CanonicalStabilizers> = snaps
        .iter()
        .map(|s| {
            check_n(s.num_qubits(), n)?;
            Ok(s.shadow_state()?.canonical())
        })
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for r in 0..m {
        let mut row = 0.0;
        for s in r + 1..m {
            row += pair_value(n, forms[r].overlap_sq(&forms[s]));
        }
        total += row;
    }
    Ok(2.0 * total / (m * (m - 1)) as f64)
}

pub fn purity_estimate(snaps: &[Snapshot]) -> Result<f64> {
    purity_estimate_realized(&realize_all(snaps)?)
}

/// `(2^N+1)⟨b|U P U†|b⟩`.
pub fn pauli_term(snap: &RealizedSnapshot, p: &PauliString) -> Result<f64> {
    let n = snap.num_qubits();
    check_n(p.num_qubits(), n)?;
    if p.is_identity() {
        return Err(Error::IdentityPauli);
    }
    if p.hermitian_sign().is_none() {
        return Err(Error::Domain(format!("{p} is not Hermitian")));
    }
    let q = snap.unitary.conjugate(p)?;
    Ok(inverse_factor(n) * q.basis_expectation(&snap.snapshot.outcome))
}

pub fn pauli_estimate_realized(snaps: &[RealizedSnapshot], p: &PauliString) -> Result<f64> {
    if snaps.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let mut s = 0.0;
    for snap in snaps {
        s += pauli_term(snap, p)?;
    }
    Ok(s / snaps.len() as f64)
}

pub fn pauli_estimate(snaps: &[Snapshot], p: &PauliString) -> Result<f64> {
    pauli_estimate_realized(&realize_all(snaps)?, p)
}
