//! Gate sequences, transpilation of CNOT/ECR↑ into the native
//! {S, virtual-Z, ECR↓} set, and virtual-Z folding.
//!
//! Sequences are temporal: the first listed gate acts first, so the oracle
//! unitary of `[g1, g2, g3]` is `U(g3)·U(g2)·U(g1)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gates::{Direction, GateLabel};
use crate::matrix::Mat;

use std::f64::consts::{FRAC_PI_2, TAU};

/// One gate application: a label plus its target qubits (gate's own first
/// qubit first).
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub label: GateLabel,
    pub qubits: Vec<usize>,
}

/// Ordered gate list on a fixed register, with a per-qubit pending-phase
/// accumulator used by virtual-Z folding. For freshly built sequences the
/// accumulator is zero; after [`compile_virtual_z`] it records the trailing
/// Z frames (which commute with Z-basis readout).
#[derive(Clone, Debug, PartialEq)]
pub struct GateSeq {
    n_qubits: usize,
    gates: Vec<Gate>,
    frames: Vec<f64>,
}

impl GateSeq {
    pub fn new(n_qubits: usize) -> Self {
        GateSeq {
            n_qubits,
            gates: Vec::new(),
            frames: vec![0.0; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn frames(&self) -> &[f64] {
        &self.frames
    }

    pub fn push(&mut self, label: GateLabel, qubits: &[usize]) -> Result<()> {
        if qubits.len() != label.arity() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} qubit(s), got {}",
                label.name(),
                label.arity(),
                qubits.len()
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::InvalidGate(format!(
                "{} targets must be distinct",
                label.name()
            )));
        }
        for &q in qubits {
            if q >= self.n_qubits {
                return Err(Error::InvalidGate(format!(
                    "target q[{q}] out of range for {} qubit(s)",
                    self.n_qubits
                )));
            }
        }
        if let Some(t) = label.angle() {
            if !t.is_finite() {
                return Err(Error::InvalidGate("gate angle must be finite".into()));
            }
        }
        self.gates.push(Gate {
            label,
            qubits: qubits.to_vec(),
        });
        Ok(())
    }

    /// Number of physical two-qubit gates.
    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.label.arity() == 2).count()
    }

    /// Oracle unitary of the gate list (frames not included).
    pub fn unitary(&self) -> Result<Mat> {
        seq_to_unitary(self, self.n_qubits)
    }

    /// Unitary of the pending Z frames, `⊗_q Z_{frames[q]}`.
    pub fn frame_unitary(&self) -> Mat {
        let mut u = Mat::identity(1 << self.n_qubits);
        for (q, &f) in self.frames.iter().enumerate() {
            if f != 0.0 {
                let z = crate::gates::z_theta(f);
                u = z.embed(&[q], self.n_qubits).expect("frame embed").mul(&u);
            }
        }
        u
    }

    /// Stable textual dump, one gate per line: `NAME q[i] (q[j])`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for g in &self.gates {
            let _ = write!(s, "{} q[{}]", g.label.name(), g.qubits[0]);
            if g.qubits.len() == 2 {
                let _ = write!(s, " (q[{}])", g.qubits[1]);
            }
            s.push('\n');
        }
        s
    }
}

/// Ordered matrix product of the embedded gates; first listed gate acts first.
pub fn seq_to_unitary(seq: &GateSeq, n_qubits: usize) -> Result<Mat> {
    if n_qubits > 4 {
        return Err(Error::DimMismatch(format!(
            "oracle unitaries support at most 4 qubits, got {n_qubits}"
        )));
    }
    let mut u = Mat::identity(1 << n_qubits);
    for g in &seq.gates {
        for &q in &g.qubits {
            if q >= n_qubits {
                return Err(Error::InvalidGate(format!("target q[{q}] out of range")));
            }
        }
        u = g.label.matrix().embed(&g.qubits, n_qubits)?.mul(&u);
    }
    Ok(u)
}

/// CNOT over the native set, per the device transpilations:
/// CNOT↓ = (Z₊ ⊗ I)·ECR↓·(X ⊗ S) and CNOT↑ = (H⊗H)·ECR↓·(S⊗S)·(Z₋ ⊗ H).
pub fn transpile_cnot(direction: Direction) -> GateSeq {
    let mut seq = GateSeq::new(2);
    match direction {
        Direction::Down => {
            seq.push(GateLabel::X, &[0]).unwrap();
            seq.push(GateLabel::S, &[1]).unwrap();
            seq.push(GateLabel::EcrDown, &[0, 1]).unwrap();
            seq.push(GateLabel::ZPlus, &[0]).unwrap();
        }
        Direction::Up => {
            seq.push(GateLabel::ZMinus, &[0]).unwrap();
            seq.push(GateLabel::H, &[1]).unwrap();
            seq.push(GateLabel::S, &[0]).unwrap();
            seq.push(GateLabel::S, &[1]).unwrap();
            seq.push(GateLabel::EcrDown, &[0, 1]).unwrap();
            seq.push(GateLabel::H, &[0]).unwrap();
            seq.push(GateLabel::H, &[1]).unwrap();
        }
    }
    seq
}

/// ECR↑ over the native set: ECR↑ = (H⊗H)·ECR↓·(Y₊ ⊗ Y₋).
pub fn transpile_ecr_up() -> GateSeq {
    let mut seq = GateSeq::new(2);
    seq.push(GateLabel::YPlus, &[0]).unwrap();
    seq.push(GateLabel::YMinus, &[1]).unwrap();
    seq.push(GateLabel::EcrDown, &[0, 1]).unwrap();
    seq.push(GateLabel::H, &[0]).unwrap();
    seq.push(GateLabel::H, &[1]).unwrap();
    seq
}

/// Rewrite H, X, Y±, Z± and Sθ into {S, Zθ, ECR↓} form (up to global phase).
///
/// Expansion table: H → Zθ(π/2)·S·Zθ(π/2); X → S·S; Y± → Z±·S·Z∓;
/// Z± → Zθ(±π/2); Sθ(α) → Zθ(α)·S·Zθ(−α). Labels outside the expandable set
/// (CNOTs, ECR↑, CR±) are rejected; transpile them first.
pub fn expand_to_native(seq: &GateSeq) -> Result<GateSeq> {
    let mut out = GateSeq::new(seq.n_qubits());
    for g in seq.gates() {
        let q = g.qubits[0];
        match g.label {
            GateLabel::S => out.push(GateLabel::S, &[q])?,
            GateLabel::ZTheta(t) => out.push(GateLabel::ZTheta(t), &[q])?,
            GateLabel::STheta(t) => {
                out.push(GateLabel::ZTheta(t), &[q])?;
                out.push(GateLabel::S, &[q])?;
                out.push(GateLabel::ZTheta(-t), &[q])?;
            }
            GateLabel::H => {
                out.push(GateLabel::ZTheta(FRAC_PI_2), &[q])?;
                out.push(GateLabel::S, &[q])?;
                out.push(GateLabel::ZTheta(FRAC_PI_2), &[q])?;
            }
            GateLabel::X => {
                out.push(GateLabel::S, &[q])?;
                out.push(GateLabel::S, &[q])?;
            }
            GateLabel::YPlus => {
                out.push(GateLabel::ZTheta(-FRAC_PI_2), &[q])?;
                out.push(GateLabel::S, &[q])?;
                out.push(GateLabel::ZTheta(FRAC_PI_2), &[q])?;
            }
            GateLabel::YMinus => {
                out.push(GateLabel::ZTheta(FRAC_PI_2), &[q])?;
                out.push(GateLabel::S, &[q])?;
                out.push(GateLabel::ZTheta(-FRAC_PI_2), &[q])?;
            }
            GateLabel::ZPlus => out.push(GateLabel::ZTheta(FRAC_PI_2), &[q])?,
            GateLabel::ZMinus => out.push(GateLabel::ZTheta(-FRAC_PI_2), &[q])?,
            GateLabel::EcrDown => out.push(GateLabel::EcrDown, &g.qubits)?,
            other => return Err(Error::NotExpandable(other.name())),
        }
    }
    Ok(out)
}

/// Absorb every virtual Z into the pulses that follow it.
///
/// The input is expanded to {S, Zθ, ECR↓} first. A per-qubit frame angle
/// accumulates Zθ's; each physical S then becomes Sθ at the current frame
/// (`S·Z_f = Z_f·S_f`), and an ECR↓ is played with both drive frames shifted
/// (`ECR·(Z_c ⊗ Z_t) = (Z_c ⊗ Z_t)·(Z_c ⊗ Z_t)†ECR(Z_c ⊗ Z_t)`), which is how
/// the hardware realizes zero-duration Z rotations. Frames left over at the
/// end stay in the accumulator; they commute with Z-basis readout. The oracle
/// unitary satisfies `U(input) = frame_unitary() · U(output)` up to global
/// phase.
pub fn compile_virtual_z(seq: &GateSeq) -> Result<GateSeq> {
    let expanded = expand_to_native(seq)?;
    let n = expanded.n_qubits();
    let mut out = GateSeq::new(n);
    let mut frames = vec![0.0f64; n];
    for g in expanded.gates() {
        match g.label {
            GateLabel::ZTheta(t) => {
                let q = g.qubits[0];
                frames[q] = (frames[q] + t).rem_euclid(TAU);
            }
            GateLabel::S => {
                let q = g.qubits[0];
                if frames[q] == 0.0 {
                    out.push(GateLabel::S, &[q])?;
                } else {
                    out.push(GateLabel::STheta(frames[q]), &[q])?;
                }
            }
            GateLabel::EcrDown => {
                let (c, t) = (g.qubits[0], g.qubits[1]);
                if frames[c] == 0.0 && frames[t] == 0.0 {
                    out.push(GateLabel::EcrDown, &[c, t])?;
                } else {
                    out.push(
                        GateLabel::EcrDownFramed {
                            control_frame: frames[c],
                            target_frame: frames[t],
                        },
                        &[c, t],
                    )?;
                }
            }
            other => return Err(Error::NotExpandable(other.name())),
        }
    }
    out.frames = frames;
    Ok(out)
}

/// Result of one numerical identity check.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    /// Max-norm deviation after global-phase alignment.
    pub deviation: f64,
    pub pass: bool,
}

/// Numerically verify the ECR/CNOT identities and the transpiled sequences
/// against their reference unitaries, up to global phase.
pub fn verify_native_identities(tol: f64) -> Vec<IdentityCheck> {
    use crate::gates::{cnot, cr, ecr, hadamard, pauli, s_gate, z_theta, Axis, Direction, Sign};
    use crate::matrix::global_phase_distance;

    let ecr_d = ecr(Direction::Down);
    let hh = hadamard().kron(hadamard().mat());
    let xi = pauli(Axis::X).kron(&Mat::identity(2));
    let yp = GateLabel::YPlus.matrix();
    let ym = GateLabel::YMinus.matrix();
    let zp = z_theta(FRAC_PI_2);
    let zm = z_theta(-FRAC_PI_2);
    let s = s_gate();

    let cases: Vec<(&str, Mat, Mat)> = vec![
        (
            "ECRdn = CR-(XI)CR+",
            cr(Sign::Minus).mul(&xi).mul(cr(Sign::Plus).mat()),
            ecr_d.mat().clone(),
        ),
        ("ECRdn ECRdn = I", ecr_d.mul(ecr_d.mat()), Mat::identity(4)),
        (
            "ECRup = (HH) ECRdn (Y+Y-)",
            hh.mul(ecr_d.mat()).mul(&yp.kron(ym.mat())),
            ecr(Direction::Up).mat().clone(),
        ),
        (
            "CNOTdn = (Z+ I) ECRdn (X S)",
            zp.kron(&Mat::identity(2))
                .mul(ecr_d.mat())
                .mul(&pauli(Axis::X).kron(s.mat())),
            cnot(Direction::Down).mat().clone(),
        ),
        (
            "CNOTup = (HH) ECRdn (SS)(Z- H)",
            hh.mul(ecr_d.mat())
                .mul(&s.kron(s.mat()))
                .mul(&zm.kron(hadamard().mat())),
            cnot(Direction::Up).mat().clone(),
        ),
        (
            "CNOTup = (HH) CNOTdn (HH)",
            hh.mul(cnot(Direction::Down).mat()).mul(&hh),
            cnot(Direction::Up).mat().clone(),
        ),
        (
            "transpile_cnot(dn) oracle",
            transpile_cnot(Direction::Down).unitary().expect("oracle"),
            cnot(Direction::Down).mat().clone(),
        ),
        (
            "transpile_cnot(up) oracle",
            transpile_cnot(Direction::Up).unitary().expect("oracle"),
            cnot(Direction::Up).mat().clone(),
        ),
        (
            "transpile_ecr_up oracle",
            transpile_ecr_up().unitary().expect("oracle"),
            ecr(Direction::Up).mat().clone(),
        ),
    ];
    cases
        .into_iter()
        .map(|(name, got, want)| {
            let deviation = global_phase_distance(&got, &want).expect("same dims");
            IdentityCheck {
                name: name.to_string(),
                deviation,
                pass: deviation <= tol,
            }
        })
        .collect()
}
