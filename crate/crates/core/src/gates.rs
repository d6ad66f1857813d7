//! Gate matrices for the ECR-native gate set and their algebra.
//!
//! Conventions, all validated numerically in the test suite:
//! basis ordering |00⟩,|01⟩,|10⟩,|11⟩ with the first ket label = first qubit;
//! rotations follow `V_θ = exp(−iθV/2) = cos(θ/2)·I − i·sin(θ/2)·V` for any
//! `V` with `V² = I`; the native single-qubit pulse is `S = X_{π/2} =
//! (I − iX)/√2` and virtual Z rotations enter as `S_θ = Z_θ† S Z_θ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Mat, Unitary};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli axis selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

/// Direction of an asymmetric two-qubit gate. `Down` drives the first qubit
/// onto the second; `Up` is the index-swapped gate,
/// ⟨a′b′|G↑|ab⟩ = ⟨b′a′|G↓|ba⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

/// Sign selector for the CR± quarter rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Pauli matrix in the |0⟩,|1⟩ basis.
pub fn pauli(k: Axis) -> Unitary {
    let m = match k {
        Axis::I => Mat::identity(2),
        Axis::X => Mat::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]),
        Axis::Y => Mat::from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]),
        Axis::Z => Mat::from_rows(&[vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]]),
    };
    Unitary::new(m).expect("pauli matrices are unitary")
}

/// `rot(V, θ) = cos(θ/2)·I − i·sin(θ/2)·V` for an involution `V` (dim 2 or 4).
pub fn rot(v: &Mat, theta: f64) -> Result<Unitary> {
    let dim = v.dim();
    let defect = v.mul(v).frobenius_dist(&Mat::identity(dim));
    if defect > 1e-12 {
        return Err(Error::NotInvolution(defect));
    }
    let half = theta / 2.0;
    let m = Mat::identity(dim)
        .scale(c(half.cos(), 0.0))
        .add(&v.scale(c(0.0, -half.sin())));
    Unitary::new(m)
}

/// Native √X pulse, `S = (I − iX)/√2`.
pub fn s_gate() -> Unitary {
    let m = Mat::from_rows(&[
        vec![c(FRAC_1_SQRT_2, 0.), c(0., -FRAC_1_SQRT_2)],
        vec![c(0., -FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.)],
    ]);
    Unitary::new(m).expect("S is unitary")
}

/// Virtual Z rotation, `Z_θ = diag(e^{−iθ/2}, e^{iθ/2})`.
pub fn z_theta(theta: f64) -> Unitary {
    assert!(theta.is_finite(), "gate angle must be finite");
    let m = Mat::from_rows(&[
        vec![Complex64::from_polar(1.0, -theta / 2.0), c(0., 0.)],
        vec![c(0., 0.), Complex64::from_polar(1.0, theta / 2.0)],
    ]);
    Unitary::new(m).expect("Z_theta is unitary")
}

/// Frame-shifted pulse, `S_θ = Z_θ† S Z_θ`.
pub fn s_theta(theta: f64) -> Unitary {
    assert!(theta.is_finite(), "gate angle must be finite");
    let zt = z_theta(theta);
    Unitary::new(zt.dagger().mul(s_gate().mat()).mul(zt.mat())).expect("S_theta is unitary")
}

/// Hadamard, `H = (Z + X)/√2`.
pub fn hadamard() -> Unitary {
    let m = Mat::from_rows(&[
        vec![c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)],
        vec![c(FRAC_1_SQRT_2, 0.), c(-FRAC_1_SQRT_2, 0.)],
    ]);
    Unitary::new(m).expect("H is unitary")
}

/// Echoed cross resonance gate, `ECR↓ = (XI − YX)/√2`; self-inverse.
pub fn ecr(direction: Direction) -> Unitary {
    let xi = pauli(Axis::X).kron(&Mat::identity(2));
    let yx = pauli(Axis::Y).kron(pauli(Axis::X).mat());
    let down = xi.sub(&yx).scale(c(FRAC_1_SQRT_2, 0.0));
    let m = match direction {
        Direction::Down => down,
        Direction::Up => swap_indices(&down),
    };
    Unitary::new(m).expect("ECR is unitary")
}

/// Controlled NOT with the control on the first (`Down`) or second (`Up`) qubit.
pub fn cnot(direction: Direction) -> Unitary {
    let mut m = Mat::identity(4);
    m.set(2, 2, c(0., 0.));
    m.set(3, 3, c(0., 0.));
    m.set(2, 3, c(1., 0.));
    m.set(3, 2, c(1., 0.));
    let m = match direction {
        Direction::Down => m,
        Direction::Up => swap_indices(&m),
    };
    Unitary::new(m).expect("CNOT is unitary")
}

/// Cross-resonance quarter rotation, `CR± = (ZX)_{±π/4}`.
pub fn cr(sign: Sign) -> Unitary {
    let zx = pauli(Axis::Z).kron(pauli(Axis::X).mat());
    let theta = match sign {
        Sign::Plus => std::f64::consts::FRAC_PI_4,
        Sign::Minus => -std::f64::consts::FRAC_PI_4,
    };
    rot(&zx, theta).expect("ZX is an involution")
}

/// Tensor product of two single-qubit gates; `a` acts on the first qubit.
pub fn kron(a: &Unitary, b: &Unitary) -> Result<Unitary> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::DimMismatch(
            "kron expects two single-qubit gates".into(),
        ));
    }
    Unitary::new(a.mat().kron(b.mat()))
}

/// ⟨a′b′|G|ab⟩ → ⟨b′a′|G|ba⟩, i.e. conjugation by SWAP.
fn swap_indices(g: &Mat) -> Mat {
    assert_eq!(g.dim(), 4);
    let perm = [0usize, 2, 1, 3];
    let mut out = Mat::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            out.set(i, j, g.at(perm[i], perm[j]));
        }
    }
    out
}

/// Label for a gate in a sequence. `EcrDownFramed` is the physical ECR pulse
/// played with shifted drive frames, `(Z_c ⊗ Z_t)† · ECR↓ · (Z_c ⊗ Z_t)`; it
/// only appears in virtual-Z-compiled output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateLabel {
    S,
    STheta(f64),
    ZTheta(f64),
    H,
    X,
    YPlus,
    YMinus,
    ZPlus,
    ZMinus,
    EcrDown,
    EcrUp,
    CnotDown,
    CnotUp,
    CrPlus,
    CrMinus,
    EcrDownFramed { control_frame: f64, target_frame: f64 },
}

impl GateLabel {
    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        match self {
            GateLabel::S
            | GateLabel::STheta(_)
            | GateLabel::ZTheta(_)
            | GateLabel::H
            | GateLabel::X
            | GateLabel::YPlus
            | GateLabel::YMinus
            | GateLabel::ZPlus
            | GateLabel::ZMinus => 1,
            _ => 2,
        }
    }

    /// Angle parameter, for the parameterized kinds.
    pub fn angle(&self) -> Option<f64> {
        match self {
            GateLabel::STheta(t) | GateLabel::ZTheta(t) => Some(*t),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Unitary {
        use std::f64::consts::FRAC_PI_2;
        match *self {
            GateLabel::S => s_gate(),
            GateLabel::STheta(t) => s_theta(t),
            GateLabel::ZTheta(t) => z_theta(t),
            GateLabel::H => hadamard(),
            GateLabel::X => pauli(Axis::X),
            GateLabel::YPlus => rot(pauli(Axis::Y).mat(), FRAC_PI_2).expect("Y involution"),
            GateLabel::YMinus => rot(pauli(Axis::Y).mat(), -FRAC_PI_2).expect("Y involution"),
            GateLabel::ZPlus => z_theta(FRAC_PI_2),
            GateLabel::ZMinus => z_theta(-FRAC_PI_2),
            GateLabel::EcrDown => ecr(Direction::Down),
            GateLabel::EcrUp => ecr(Direction::Up),
            GateLabel::CnotDown => cnot(Direction::Down),
            GateLabel::CnotUp => cnot(Direction::Up),
            GateLabel::CrPlus => cr(Sign::Plus),
            GateLabel::CrMinus => cr(Sign::Minus),
            GateLabel::EcrDownFramed {
                control_frame,
                target_frame,
            } => {
                let frames = z_theta(control_frame).mat().kron(z_theta(target_frame).mat());
                let m = frames.dagger().mul(ecr(Direction::Down).mat()).mul(&frames);
                Unitary::new(m).expect("framed ECR is unitary")
            }
        }
    }

    /// Mnemonic used in textual dumps.
    pub fn name(&self) -> String {
        match *self {
            GateLabel::S => "S".into(),
            GateLabel::STheta(t) => format!("Sth({t})"),
            GateLabel::ZTheta(t) => format!("Zth({t})"),
            GateLabel::H => "H".into(),
            GateLabel::X => "X".into(),
            GateLabel::YPlus => "Y+".into(),
            GateLabel::YMinus => "Y-".into(),
            GateLabel::ZPlus => "Z+".into(),
            GateLabel::ZMinus => "Z-".into(),
            GateLabel::EcrDown => "ECRdn".into(),
            GateLabel::EcrUp => "ECRup".into(),
            GateLabel::CnotDown => "CNOTdn".into(),
            GateLabel::CnotUp => "CNOTup".into(),
            GateLabel::CrPlus => "CR+".into(),
            GateLabel::CrMinus => "CR-".into(),
            GateLabel::EcrDownFramed {
                control_frame,
                target_frame,
            } => format!("ECRdn[{control_frame},{target_frame}]"),
        }
    }
}
