//! Experiment plans: the three circuit families, Bell angles, and the
//! randomized job/shot/repetition schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateLabel;
use crate::rng::{self, SplitMix64};
use crate::seq::GateSeq;
use crate::topology::PairRecord;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Stream tag for per-job shuffle randomness.
pub const STREAM_SHUFFLE: u64 = 0x5348_5546; // "SHUF"
/// Stream tag for per-circuit sampling randomness.
pub const STREAM_SAMPLE: u64 = 0x534D_504C; // "SMPL"

/// The three experiment families: `A` is the CHSH Bell test on next
/// neighbors, `B` the idle test on next neighbors, `C` the idle test on
/// fourth neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestKind {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
}

impl TestKind {
    pub fn has_entanglement(&self) -> bool {
        matches!(self, TestKind::A)
    }

    /// A–B graph distance used by the experiment family.
    pub fn default_distance(&self) -> u32 {
        match self {
            TestKind::A | TestKind::B => 2,
            TestKind::C => 4,
        }
    }

    pub fn letter(&self) -> char {
        match self {
            TestKind::A => 'a',
            TestKind::B => 'b',
            TestKind::C => 'c',
        }
    }
}

impl std::str::FromStr for TestKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(TestKind::A),
            "b" => Ok(TestKind::B),
            "c" => Ok(TestKind::C),
            other => Err(Error::InvalidPlan(format!("unknown test kind {other:?}"))),
        }
    }
}

/// Measurement angles: α ∈ {0, π/2} for A's settings, β ∈ {−π/4, +π/4} for
/// B's.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellAngles {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

impl Default for BellAngles {
    fn default() -> Self {
        BellAngles {
            alpha: [0.0, FRAC_PI_2],
            beta: [-FRAC_PI_4, FRAC_PI_4],
        }
    }
}

/// A measurement setting (a, b) with a, b ∈ {0, 1}, serialized as `[a, b]`.
pub type Setting = [u8; 2];

/// Flat index of a setting, `a·2 + b`.
pub fn setting_index(s: Setting) -> usize {
    (s[0] as usize) * 2 + s[1] as usize
}

/// All four settings in index order.
pub const SETTINGS: [Setting; 4] = [[0, 0], [0, 1], [1, 0], [1, 1]];

/// Circuit-qubit roles. A and B are the measured parties; S is the source
/// qubit present only in test a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    S,
    B,
}

/// One test circuit: prep gates (left of the barrier) plus the measurement
/// rotations S_α@A, S_β@B. The rotations are kept as angles so noise models
/// may perturb them; [`Circuit::measurement_seq`] realizes them as gates.
#[derive(Clone, Debug)]
pub struct Circuit {
    pub test: TestKind,
    pub setting: Setting,
    pub n_qubits: usize,
    pub a_index: usize,
    pub s_index: Option<usize>,
    pub b_index: usize,
    pub prep: GateSeq,
    pub alpha: f64,
    pub beta: f64,
}

impl Circuit {
    pub fn role_index(&self, role: Role) -> Option<usize> {
        match role {
            Role::A => Some(self.a_index),
            Role::S => self.s_index,
            Role::B => Some(self.b_index),
        }
    }

    /// Measured qubits, A first.
    pub fn measured(&self) -> [usize; 2] {
        [self.a_index, self.b_index]
    }

    /// The measurement rotations, with optional extra Z-frame on B's pulse.
    pub fn measurement_seq(&self, beta_frame_shift: f64) -> GateSeq {
        let mut seq = GateSeq::new(self.n_qubits);
        seq.push(GateLabel::STheta(self.alpha), &[self.a_index])
            .expect("valid measurement gate");
        seq.push(
            GateLabel::STheta(self.beta + beta_frame_shift),
            &[self.b_index],
        )
        .expect("valid measurement gate");
        seq
    }

    /// Prep plus nominal measurement rotations, for display and oracles.
    pub fn full_seq(&self) -> GateSeq {
        let mut seq = self.prep.clone();
        for g in self.measurement_seq(0.0).gates() {
            seq.push(g.label, &g.qubits).expect("valid gate");
        }
        seq
    }
}

/// Build the circuit for one test family and setting.
///
/// Test a (3 qubits, A=0, S=1, B=2): S@S entangles nothing yet, CNOT(S→B)
/// creates the pair, CNOT(S→A)·CNOT(A→S) swaps the source half onto A, then
/// S_α@A and S_β@B. Tests b and c (2 qubits, A=0, B=1) have no prep at all —
/// only the measurement rotations on |00⟩.
pub fn build_circuit(test: TestKind, setting: Setting, angles: &BellAngles) -> Result<Circuit> {
    if setting[0] > 1 || setting[1] > 1 {
        return Err(Error::InvalidPlan(format!(
            "setting must be in {{0,1}}^2, got {setting:?}"
        )));
    }
    let alpha = angles.alpha[setting[0] as usize];
    let beta = angles.beta[setting[1] as usize];
    match test {
        TestKind::A => {
            let mut prep = GateSeq::new(3);
            prep.push(GateLabel::S, &[1])?;
            prep.push(GateLabel::CnotDown, &[1, 2])?;
            prep.push(GateLabel::CnotDown, &[1, 0])?;
            prep.push(GateLabel::CnotDown, &[0, 1])?;
            Ok(Circuit {
                test,
                setting,
                n_qubits: 3,
                a_index: 0,
                s_index: Some(1),
                b_index: 2,
                prep,
                alpha,
                beta,
            })
        }
        TestKind::B | TestKind::C => Ok(Circuit {
            test,
            setting,
            n_qubits: 2,
            a_index: 0,
            s_index: None,
            b_index: 1,
            prep: GateSeq::new(2),
            alpha,
            beta,
        }),
    }
}

/// The randomized schedule: per job, a seeded Fisher–Yates shuffle of R
/// copies of each of the four settings. Everything needed to reproduce a
/// simulation bit-for-bit is recorded here.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentPlan {
    pub test: TestKind,
    pub angles: BellAngles,
    pub repetitions: u32,
    pub shots: u32,
    pub jobs: u32,
    pub seed: u64,
    /// `jobs` shuffled orders, each a permutation of R copies of the 4 settings.
    pub job_orders: Vec<Vec<Setting>>,
}

impl ExperimentPlan {
    /// Total trials per setting, J·R·shots.
    pub fn trials_per_setting(&self) -> u64 {
        self.jobs as u64 * self.repetitions as u64 * self.shots as u64
    }

    pub fn circuits_per_job(&self) -> usize {
        4 * self.repetitions as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 1 || self.shots < 1 || self.jobs < 1 {
            return Err(Error::InvalidPlan(
                "repetitions, shots, and jobs must all be at least 1".into(),
            ));
        }
        if self.job_orders.len() != self.jobs as usize {
            return Err(Error::InvalidPlan(format!(
                "expected {} job orders, found {}",
                self.jobs,
                self.job_orders.len()
            )));
        }
        for (j, order) in self.job_orders.iter().enumerate() {
            let mut tally = [0u32; 4];
            if order.len() != self.circuits_per_job() {
                return Err(Error::InvalidPlan(format!(
                    "job {j} order has {} circuits, expected {}",
                    order.len(),
                    self.circuits_per_job()
                )));
            }
            for &s in order {
                if s[0] > 1 || s[1] > 1 {
                    return Err(Error::InvalidPlan(format!("job {j} has setting {s:?}")));
                }
                tally[setting_index(s)] += 1;
            }
            if tally != [self.repetitions; 4] {
                return Err(Error::InvalidPlan(format!(
                    "job {j} is not a permutation of {} copies of each setting",
                    self.repetitions
                )));
            }
        }
        Ok(())
    }
}

/// Construct a plan with per-job shuffled circuit orders.
pub fn make_plan(
    test: TestKind,
    repetitions: u32,
    shots: u32,
    jobs: u32,
    seed: u64,
) -> Result<ExperimentPlan> {
    if repetitions < 1 || shots < 1 || jobs < 1 {
        return Err(Error::InvalidPlan(
            "repetitions, shots, and jobs must all be at least 1".into(),
        ));
    }
    let mut job_orders = Vec::with_capacity(jobs as usize);
    for job in 0..jobs {
        let mut order: Vec<Setting> = SETTINGS
            .iter()
            .flat_map(|&s| std::iter::repeat_n(s, repetitions as usize))
            .collect();
        let mut rng = SplitMix64::new(rng::derive_stream(seed, &[STREAM_SHUFFLE, job as u64]));
        rng::fisher_yates(&mut rng, &mut order);
        job_orders.push(order);
    }
    Ok(ExperimentPlan {
        test,
        angles: BellAngles::default(),
        repetitions,
        shots,
        jobs,
        seed,
        job_orders,
    })
}

/// On-disk plan file: the schedule plus the device pairs it applies to.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PlanFile {
    pub schema: String,
    pub device: String,
    pub pairs: Vec<PairRecord>,
    #[serde(flatten)]
    pub plan: ExperimentPlan,
}

pub const PLAN_SCHEMA: &str = "plan/1";

impl PlanFile {
    pub fn new(device: &str, pairs: Vec<PairRecord>, plan: ExperimentPlan) -> Self {
        PlanFile {
            schema: PLAN_SCHEMA.to_string(),
            device: device.to_string(),
            pairs,
            plan,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: PlanFile = serde_json::from_str(json)?;
        if file.schema != PLAN_SCHEMA {
            return Err(Error::SchemaMismatch {
                expected: PLAN_SCHEMA.into(),
                found: file.schema,
            });
        }
        file.plan.validate()?;
        Ok(file)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
