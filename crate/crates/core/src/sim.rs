//! Exact density-matrix evolution of the test circuits under parametric
//! noise, and seeded multinomial sampling at paper-scale trial counts.
//!
//! Sampling never touches the quantum state: each (test, noise, setting)
//! has one exact outcome distribution, computed once, and Monte Carlo enters
//! only as multinomial draws from it. Sampling streams are derived from
//! (seed, pair index, job index, circuit index), so output is identical for
//! any execution order.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::CountsTable;
use crate::error::{Error, Result};
use crate::gates::{pauli, rot, Axis};
use crate::matrix::Mat;
use crate::plan::{
    build_circuit, setting_index, Circuit, PlanFile, Role, Setting, STREAM_SAMPLE, SETTINGS,
};
use crate::rng::{self, SplitMix64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Density matrix on n ≤ 4 qubits.
#[derive(Clone, Debug)]
pub struct QuantumState {
    n: usize,
    rho: Mat,
}

impl QuantumState {
    /// |0…0⟩⟨0…0|.
    pub fn ground(n: usize) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(Error::DimMismatch(format!(
                "simulator supports 1..=4 qubits, got {n}"
            )));
        }
        let mut rho = Mat::zeros(1 << n);
        rho.set(0, 0, c(1.0, 0.0));
        Ok(QuantumState { n, rho })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> &Mat {
        &self.rho
    }

    /// ρ → UρU† on the embedded subspace.
    pub fn apply_gate(&mut self, gate: &Mat, targets: &[usize]) -> Result<()> {
        let u = gate.embed(targets, self.n)?;
        self.rho = u.mul(&self.rho).mul(&u.dagger());
        Ok(())
    }

    /// ρ → Σ KρK†, validating Σ K†K = I to 1e-10.
    pub fn apply_channel(&mut self, kraus: &[Mat], targets: &[usize]) -> Result<()> {
        let dim = kraus
            .first()
            .ok_or_else(|| Error::InvalidNoise("empty Kraus set".into()))?
            .dim();
        let mut completeness = Mat::zeros(dim);
        for k in kraus {
            if k.dim() != dim {
                return Err(Error::DimMismatch("ragged Kraus set".into()));
            }
            completeness = completeness.add(&k.dagger().mul(k));
        }
        let defect = completeness.frobenius_dist(&Mat::identity(dim));
        if defect > 1e-10 {
            return Err(Error::NotCptp { defect, tol: 1e-10 });
        }
        let mut out = Mat::zeros(1 << self.n);
        for k in kraus {
            let ke = k.embed(targets, self.n)?;
            out = out.add(&ke.mul(&self.rho).mul(&ke.dagger()));
        }
        self.rho = out;
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// Check trace = 1, ρ = ρ†, and eigenvalues ≥ −1e-10 (via a shifted
    /// Cholesky factorization).
    pub fn validate(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::UnphysicalState(format!("trace = {tr}")));
        }
        let herm = self.rho.sub(&self.rho.dagger()).frobenius_dist(&Mat::zeros(self.rho.dim()));
        if herm > tol {
            return Err(Error::UnphysicalState(format!(
                "hermiticity defect {herm:.3e}"
            )));
        }
        if !is_psd_shifted(&self.rho, 1e-10) {
            return Err(Error::UnphysicalState(
                "eigenvalue below -1e-10".into(),
            ));
        }
        Ok(())
    }

    /// Joint Z-basis distribution of the listed qubits (first qubit's bit
    /// most significant), tracing out the rest.
    pub fn diagonal_marginal(&self, qubits: &[usize]) -> Vec<f64> {
        let dim = 1 << self.n;
        let mut out = vec![0.0; 1 << qubits.len()];
        for idx in 0..dim {
            let mut sub = 0usize;
            for &q in qubits {
                sub = (sub << 1) | ((idx >> (self.n - 1 - q)) & 1);
            }
            out[sub] += self.rho.at(idx, idx).re;
        }
        out
    }
}

/// True iff `m + shift·I` admits a Cholesky factorization, i.e. all
/// eigenvalues of the Hermitian `m` exceed −shift.
fn is_psd_shifted(m: &Mat, shift: f64) -> bool {
    let n = m.dim();
    let mut l = Mat::zeros(n);
    for j in 0..n {
        let mut d = m.at(j, j).re + shift;
        for k in 0..j {
            d -= l.at(j, k).norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let djj = d.sqrt();
        l.set(j, j, c(djj, 0.0));
        for i in (j + 1)..n {
            let mut v = m.at(i, j);
            for k in 0..j {
                v -= l.at(i, k) * l.at(j, k).conj();
            }
            l.set(i, j, v / djj);
        }
    }
    true
}

/// Kraus set for single-qubit depolarizing with probability `p` of full
/// replacement by I/2: {√(1−3p/4)·I, √(p/4)·X, √(p/4)·Y, √(p/4)·Z}.
pub fn depolarizing_kraus(p: f64) -> Vec<Mat> {
    vec![
        Mat::identity(2).scale(c((1.0 - 0.75 * p).sqrt(), 0.0)),
        pauli(Axis::X).scale(c((0.25 * p).sqrt(), 0.0)),
        pauli(Axis::Y).scale(c((0.25 * p).sqrt(), 0.0)),
        pauli(Axis::Z).scale(c((0.25 * p).sqrt(), 0.0)),
    ]
}

/// Kraus set for single-qubit amplitude damping with decay probability γ.
pub fn amplitude_damping_kraus(gamma: f64) -> Vec<Mat> {
    let mut k0 = Mat::identity(2);
    k0.set(1, 1, c((1.0 - gamma).sqrt(), 0.0));
    let mut k1 = Mat::zeros(2);
    k1.set(0, 1, c(gamma.sqrt(), 0.0));
    vec![k0, k1]
}

/// Per-role scalar noise strengths.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RoleValues {
    pub a: f64,
    pub s: f64,
    pub b: f64,
}

impl RoleValues {
    pub fn uniform(v: f64) -> Self {
        RoleValues { a: v, s: v, b: v }
    }

    pub fn get(&self, role: Role) -> f64 {
        match role {
            Role::A => self.a,
            Role::S => self.s,
            Role::B => self.b,
        }
    }
}

/// Row-stochastic 2×2 readout confusion matrix; rows = true state, columns =
/// reported outcome, column 0 = "+" (the |0⟩ report).
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Confusion(pub [[f64; 2]; 2]);

impl Default for Confusion {
    fn default() -> Self {
        Confusion([[1.0, 0.0], [0.0, 1.0]])
    }
}

impl Confusion {
    /// Equal flip probability `f` in both directions.
    pub fn symmetric(f: f64) -> Self {
        Confusion([[1.0 - f, f], [f, 1.0 - f]])
    }

    pub fn validate(&self) -> Result<()> {
        for (t, row) in self.0.iter().enumerate() {
            if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                return Err(Error::InvalidNoise(format!(
                    "confusion row {t} has entries outside [0,1]: {row:?}"
                )));
            }
            if (row[0] + row[1] - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidNoise(format!(
                    "confusion row {t} sums to {}",
                    row[0] + row[1]
                )));
            }
        }
        Ok(())
    }

    /// Move reporting probability `eps` from "+" to "−" in both rows; the
    /// reported "+" marginal shifts by exactly −eps regardless of the state.
    pub fn shifted(&self, eps: f64) -> Result<Confusion> {
        let shifted = Confusion([
            [self.0[0][0] - eps, self.0[0][1] + eps],
            [self.0[1][0] - eps, self.0[1][1] + eps],
        ]);
        shifted.validate().map_err(|_| {
            Error::InvalidNoise(format!(
                "signaling shift {eps} pushes a confusion entry outside [0,1]; \
                 give the baseline confusion at least that much assignment error"
            ))
        })?;
        Ok(shifted)
    }
}

/// Readout confusion for the two measured parties.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct Readout {
    pub a: Confusion,
    pub b: Confusion,
}

/// Always-on ZZ interaction accumulating conditional phase `angle` across a
/// designated qubit pair during the measurement window.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ZzCrosstalk {
    pub pair: (Role, Role),
    pub angle: f64,
}

/// Deliberate signaling injections, for calibrating detection power.
///
/// `confusion_b_on_a` shifts B's readout confusion (toward "−", by that
/// amount) whenever A's setting is a = 1, so δP_{∗b} acquires exactly that
/// value; `confusion_a_on_b` is the mirrored channel. `phase_b_on_a` is the
/// alternative coherent mode: B's S_β pulse frame acquires ε′·(a − ½)
/// radians.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct Injection {
    pub confusion_b_on_a: f64,
    pub confusion_a_on_b: f64,
    pub phase_b_on_a: f64,
}

pub const NOISE_SCHEMA: &str = "noise/1";

fn noise_schema() -> String {
    NOISE_SCHEMA.into()
}

/// Parametric noise model: per-qubit depolarizing and amplitude damping
/// applied after every pulse on that qubit, ZZ crosstalk during the
/// measurement window, readout confusion, and optional signaling injection.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct NoiseConfig {
    pub schema: String,
    pub depolarizing: RoleValues,
    pub damping: RoleValues,
    pub readout: Readout,
    pub zz: Option<ZzCrosstalk>,
    pub injection: Injection,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            schema: noise_schema(),
            depolarizing: RoleValues::default(),
            damping: RoleValues::default(),
            readout: Readout::default(),
            zz: None,
            injection: Injection::default(),
        }
    }
}

impl NoiseConfig {
    /// The noiseless configuration.
    pub fn ideal() -> Self {
        NoiseConfig::default()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != NOISE_SCHEMA {
            return Err(Error::SchemaMismatch {
                expected: NOISE_SCHEMA.into(),
                found: self.schema.clone(),
            });
        }
        for (name, vals) in [("depolarizing", self.depolarizing), ("damping", self.damping)] {
            for (role, v) in [("a", vals.a), ("s", vals.s), ("b", vals.b)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidNoise(format!(
                        "{name}.{role} = {v} outside [0,1]"
                    )));
                }
            }
        }
        self.readout.a.validate()?;
        self.readout.b.validate()?;
        if let Some(zz) = &self.zz {
            if !zz.angle.is_finite() {
                return Err(Error::InvalidNoise("zz angle must be finite".into()));
            }
            if zz.pair.0 == zz.pair.1 {
                return Err(Error::InvalidNoise("zz pair must name two distinct roles".into()));
            }
        }
        for (name, eps) in [
            ("confusion_b_on_a", self.injection.confusion_b_on_a),
            ("confusion_a_on_b", self.injection.confusion_a_on_b),
        ] {
            if !(-1.0..=1.0).contains(&eps) {
                return Err(Error::InvalidNoise(format!(
                    "injection.{name} = {eps} outside [-1,1]"
                )));
            }
        }
        if !self.injection.phase_b_on_a.is_finite() {
            return Err(Error::InvalidNoise("injection.phase_b_on_a must be finite".into()));
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let cfg: NoiseConfig = serde_json::from_str(json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("noise config serializes")
    }
}

/// Joint outcome probabilities for one setting, order
/// [P(++), P(+−), P(−+), P(−−)].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeDistribution {
    pub setting: Setting,
    pub p: [f64; 4],
}

impl OutcomeDistribution {
    pub fn expectation_ab(&self) -> f64 {
        self.p[0] - self.p[1] - self.p[2] + self.p[3]
    }

    pub fn marginal_a_plus(&self) -> f64 {
        self.p[0] + self.p[1]
    }

    pub fn marginal_b_plus(&self) -> f64 {
        self.p[0] + self.p[2]
    }

    fn checked(setting: Setting, p: [f64; 4]) -> Result<Self> {
        let mut clamped = p;
        for x in clamped.iter_mut() {
            if *x < 0.0 {
                if *x < -1e-10 {
                    return Err(Error::UnphysicalState(format!(
                        "negative outcome probability {x}"
                    )));
                }
                *x = 0.0;
            }
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::UnphysicalState(format!(
                "outcome probabilities sum to {sum}"
            )));
        }
        Ok(OutcomeDistribution {
            setting,
            p: clamped,
        })
    }
}

fn role_of(circuit: &Circuit, q: usize) -> Role {
    if q == circuit.a_index {
        Role::A
    } else if Some(q) == circuit.s_index {
        Role::S
    } else {
        Role::B
    }
}

fn apply_pulse_noise(
    state: &mut QuantumState,
    circuit: &Circuit,
    noise: &NoiseConfig,
    targets: &[usize],
) -> Result<()> {
    for &q in targets {
        let role = role_of(circuit, q);
        let p = noise.depolarizing.get(role);
        if p > 0.0 {
            state.apply_channel(&depolarizing_kraus(p), &[q])?;
        }
        let g = noise.damping.get(role);
        if g > 0.0 {
            state.apply_channel(&amplitude_damping_kraus(g), &[q])?;
        }
    }
    Ok(())
}

/// Exact outcome distribution of a circuit under the noise model.
///
/// Evolution order: prep pulses (each followed by its targets' local noise),
/// then the ZZ crosstalk phase accumulated over the measurement window, then
/// the measurement rotations (with local noise, and with B's pulse frame
/// shifted when phase injection is on), then readout confusion with the
/// setting-conditioned confusion shifts.
pub fn outcome_distribution(circuit: &Circuit, noise: &NoiseConfig) -> Result<OutcomeDistribution> {
    noise.validate()?;
    let mut state = QuantumState::ground(circuit.n_qubits)?;

    for gate in circuit.prep.gates() {
        state.apply_gate(gate.label.matrix().mat(), &gate.qubits)?;
        apply_pulse_noise(&mut state, circuit, noise, &gate.qubits)?;
    }

    if let Some(zz) = &noise.zz {
        let q0 = circuit.role_index(zz.pair.0).ok_or_else(|| {
            Error::InvalidNoise(format!("circuit has no {:?} qubit for zz", zz.pair.0))
        })?;
        let q1 = circuit.role_index(zz.pair.1).ok_or_else(|| {
            Error::InvalidNoise(format!("circuit has no {:?} qubit for zz", zz.pair.1))
        })?;
        let zzmat = pauli(Axis::Z).kron(pauli(Axis::Z).mat());
        let u = rot(&zzmat, zz.angle).expect("ZZ is an involution");
        state.apply_gate(u.mat(), &[q0, q1])?;
    }

    let a = circuit.setting[0];
    let b = circuit.setting[1];
    let beta_shift = noise.injection.phase_b_on_a * (a as f64 - 0.5);
    let meas = circuit.measurement_seq(beta_shift);
    for gate in meas.gates() {
        state.apply_gate(gate.label.matrix().mat(), &gate.qubits)?;
        apply_pulse_noise(&mut state, circuit, noise, &gate.qubits)?;
    }

    let p_true = state.diagonal_marginal(&circuit.measured());

    let conf_a = if b == 1 && noise.injection.confusion_a_on_b != 0.0 {
        noise.readout.a.shifted(noise.injection.confusion_a_on_b)?
    } else {
        noise.readout.a
    };
    let conf_b = if a == 1 && noise.injection.confusion_b_on_a != 0.0 {
        noise.readout.b.shifted(noise.injection.confusion_b_on_a)?
    } else {
        noise.readout.b
    };

    let mut p = [0.0f64; 4];
    for ta in 0..2 {
        for tb in 0..2 {
            let pt = p_true[ta * 2 + tb];
            if pt == 0.0 {
                continue;
            }
            for ra in 0..2 {
                for rb in 0..2 {
                    p[ra * 2 + rb] += conf_a.0[ta][ra] * conf_b.0[tb][rb] * pt;
                }
            }
        }
    }
    OutcomeDistribution::checked(circuit.setting, p)
}

/// One multinomial draw of `n` trials from `dist`, deterministic in the
/// stream seed.
pub fn sample_counts(dist: &OutcomeDistribution, n: u64, stream_seed: u64) -> Result<[u64; 4]> {
    if n < 1 {
        return Err(Error::InvalidPlan("sample size must be at least 1".into()));
    }
    let mut rng = SplitMix64::new(stream_seed);
    let draws = rng::multinomial(&mut rng, n, &dist.p);
    Ok([draws[0], draws[1], draws[2], draws[3]])
}

/// The exact per-setting distributions a plan runs over.
pub fn plan_distributions(
    plan_file: &PlanFile,
    noise: &NoiseConfig,
) -> Result<[OutcomeDistribution; 4]> {
    let mut out = Vec::with_capacity(4);
    for s in SETTINGS {
        let circuit = build_circuit(plan_file.plan.test, s, &plan_file.plan.angles)?;
        out.push(outcome_distribution(&circuit, noise)?);
    }
    Ok([out[0], out[1], out[2], out[3]])
}

fn simulate_one_job(
    plan_file: &PlanFile,
    dists: &[OutcomeDistribution; 4],
    seed: u64,
    pair_index: usize,
    job: u32,
) -> Result<CountsTable> {
    let plan = &plan_file.plan;
    let pair = &plan_file.pairs[pair_index];
    let mut table = CountsTable::new(plan.test, pair.path.clone(), Some(job));
    for (ci, &setting) in plan.job_orders[job as usize].iter().enumerate() {
        let stream = rng::derive_stream(
            seed,
            &[STREAM_SAMPLE, pair_index as u64, job as u64, ci as u64],
        );
        let counts = sample_counts(&dists[setting_index(setting)], plan.shots as u64, stream)?;
        table.add(setting, counts);
    }
    Ok(table)
}

fn run_plan(
    plan_file: &PlanFile,
    noise: &NoiseConfig,
    seed: u64,
    parallel: bool,
) -> Result<Vec<CountsTable>> {
    plan_file.plan.validate()?;
    if plan_file.pairs.is_empty() {
        return Err(Error::InvalidPlan("plan lists no pairs to run".into()));
    }
    let dists = plan_distributions(plan_file, noise)?;
    let work: Vec<(usize, u32)> = (0..plan_file.pairs.len())
        .flat_map(|pi| (0..plan_file.plan.jobs).map(move |j| (pi, j)))
        .collect();
    if parallel {
        work.par_iter()
            .map(|&(pi, j)| simulate_one_job(plan_file, &dists, seed, pi, j))
            .collect()
    } else {
        work.iter()
            .map(|&(pi, j)| simulate_one_job(plan_file, &dists, seed, pi, j))
            .collect()
    }
}

/// Simulate a whole plan serially: one CountsTable per (pair, job), pairs in
/// plan order, jobs ascending.
pub fn simulate_plan(plan_file: &PlanFile, noise: &NoiseConfig, seed: u64) -> Result<Vec<CountsTable>> {
    run_plan(plan_file, noise, seed, false)
}

/// Same as [`simulate_plan`] but fanned out across threads; output is
/// identical by the stream-derivation contract.
pub fn simulate_plan_par(
    plan_file: &PlanFile,
    noise: &NoiseConfig,
    seed: u64,
) -> Result<Vec<CountsTable>> {
    run_plan(plan_file, noise, seed, true)
}
