//! Analysis reports: the versioned report JSON, the fixed-width table
//! renderer mirroring the published result tables, and the per-job CSV.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::counts::CountsTable;
use crate::error::{Error, Result};
use crate::plan::{TestKind, SETTINGS};
use crate::stats::{self, NoSigReport};
use crate::topology::CouplingGraph;

pub const REPORT_SCHEMA: &str = "report/1";

/// Round to 6 significant decimal digits (the report serialization contract).
fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float reparses")
}

fn sig6_arr(xs: [f64; 4]) -> [f64; 4] {
    xs.map(sig6)
}

/// Named view of the four deltas (and their per-delta statistics):
/// `d0s` = δP_{0∗}, `d1s` = δP_{1∗}, `ds0` = δP_{∗0}, `ds1` = δP_{∗1}.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct DeltaSet {
    pub d0s: f64,
    pub d1s: f64,
    pub ds0: f64,
    pub ds1: f64,
}

impl From<[f64; 4]> for DeltaSet {
    fn from(v: [f64; 4]) -> Self {
        DeltaSet {
            d0s: v[0],
            d1s: v[1],
            ds0: v[2],
            ds1: v[3],
        }
    }
}

impl DeltaSet {
    pub fn as_array(&self) -> [f64; 4] {
        [self.d0s, self.d1s, self.ds0, self.ds1]
    }
}

/// Per-pair analysis results.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairReport {
    pub pair: Vec<u32>,
    pub n_per_setting: [u64; 4],
    pub delta_p: DeltaSet,
    pub sigma: DeltaSet,
    pub z: DeltaSet,
    pub p_raw: DeltaSet,
    pub p_corrected: DeltaSet,
    pub max_abs_z: f64,
    pub chsh: f64,
    pub chsh_sigma: f64,
    pub chsh_z: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_f_mhz: Option<f64>,
}

/// Versioned analysis report for one counts file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportFile {
    pub schema: String,
    pub device: String,
    pub test: TestKind,
    pub bonferroni_m: u32,
    pub pairs: Vec<PairReport>,
    /// Spearman correlation of max|z| with 1/|Δf|, when ≥ 3 pairs carry Δf.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq_correlation: Option<f64>,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let r: ReportFile = serde_json::from_str(json)?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::SchemaMismatch {
                expected: REPORT_SCHEMA.into(),
                found: r.schema,
            });
        }
        Ok(r)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Group per-job tables by pair, preserving first-appearance order.
pub fn group_by_pair(tables: &[CountsTable]) -> Vec<(Vec<u32>, Vec<&CountsTable>)> {
    let mut order: Vec<Vec<u32>> = Vec::new();
    let mut groups: BTreeMap<Vec<u32>, Vec<&CountsTable>> = BTreeMap::new();
    for t in tables {
        let entry = groups.entry(t.pair.clone()).or_default();
        if entry.is_empty() {
            order.push(t.pair.clone());
        }
        entry.push(t);
    }
    order
        .into_iter()
        .map(|p| {
            let g = groups.remove(&p).unwrap();
            (p, g)
        })
        .collect()
}

/// Run the full statistical pipeline over per-job tables: aggregate each
/// pair, compute the no-signaling report and CHSH, attach Δf when the device
/// map is supplied, and compute the cross-pair frequency correlation when
/// at least three pairs have one.
pub fn analyze(
    tables: &[CountsTable],
    device: &str,
    test: TestKind,
    bonferroni_m: u32,
    graph: Option<&CouplingGraph>,
) -> Result<ReportFile> {
    if tables.is_empty() {
        return Err(Error::InsufficientData("no counts tables to analyze".into()));
    }
    let mut pairs = Vec::new();
    let mut corr_inputs: Vec<(NoSigReport, f64)> = Vec::new();
    for (pair, group) in group_by_pair(tables) {
        let total = CountsTable::sum(&group)?;
        let nosig = stats::no_signaling_report(&total, bonferroni_m)?;
        let chsh = stats::chsh(&total)?;
        let delta_f = graph.and_then(|g| {
            let fa = g.frequency(total.a_id())?;
            let fb = g.frequency(total.b_id())?;
            Some(fa - fb)
        });
        if let Some(df) = delta_f {
            corr_inputs.push((nosig, df));
        }
        let n_per_setting = [
            total.total(SETTINGS[0]),
            total.total(SETTINGS[1]),
            total.total(SETTINGS[2]),
            total.total(SETTINGS[3]),
        ];
        pairs.push(PairReport {
            pair,
            n_per_setting,
            delta_p: sig6_arr(nosig.deltas).into(),
            sigma: sig6_arr(nosig.sigmas).into(),
            z: sig6_arr(nosig.z).into(),
            p_raw: sig6_arr(nosig.p_raw).into(),
            p_corrected: sig6_arr(nosig.p_corrected).into(),
            max_abs_z: sig6(nosig.max_abs_z),
            chsh: sig6(chsh.value),
            chsh_sigma: sig6(chsh.sigma),
            chsh_z: sig6(chsh.z),
            delta_f_mhz: delta_f.map(sig6),
        });
    }
    let freq_correlation = if corr_inputs.len() >= 3 {
        Some(sig6(stats::freq_correlation(&corr_inputs)?))
    } else {
        None
    };
    Ok(ReportFile {
        schema: REPORT_SCHEMA.into(),
        device: device.into(),
        test,
        bonferroni_m,
        pairs,
        freq_correlation,
    })
}

/// Three-significant-digit decimal with trailing zeros trimmed, the table
/// cell format.
fn fmt_sig3(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (2 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Render the layout of the published result tables: one row per pair,
/// δP in units of 1e-4 with three significant digits, an asterisk on every
/// entry with |z| > 5 (the 5σ border), CHSH and its σ only for test a, and
/// the f_A−f_B column when frequencies are known.
pub fn render_paper_table(report: &ReportFile) -> String {
    let show_chsh = report.test == TestKind::A;
    let show_f = report.pairs.iter().any(|p| p.delta_f_mhz.is_some());
    let mut header: Vec<String> = vec!["A-S-B".into()];
    if show_chsh {
        header.push("CHSH".into());
        header.push("sigma".into());
    }
    for name in ["dP_0*", "dP_1*", "dP_*0", "dP_*1"] {
        header.push(name.into());
    }
    if show_f {
        header.push("f_A-B".into());
    }
    let mut rows: Vec<Vec<String>> = vec![header];
    for p in &report.pairs {
        let mut row = vec![p
            .pair
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join("-")];
        if show_chsh {
            row.push(fmt_sig3(p.chsh));
            row.push(fmt_sig3(p.chsh_sigma * 1e4));
        }
        let deltas = p.delta_p.as_array();
        let zs = p.z.as_array();
        for i in 0..4 {
            let mark = if zs[i].abs() > 5.0 { "*" } else { "" };
            row.push(format!("{}{mark}", fmt_sig3(deltas[i] * 1e4)));
        }
        if show_f {
            row.push(
                p.delta_f_mhz
                    .map(fmt_sig3)
                    .unwrap_or_else(|| "-".into()),
            );
        }
        rows.push(row);
    }
    let ncols = rows[0].len();
    let widths: Vec<usize> = (0..ncols)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap())
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell:>width$}", width = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out.push_str(&format!(
        "deltas in units 1e-4; * marks |z| > 5; look-elsewhere m = {}\n",
        report.bonferroni_m
    ));
    if let Some(rho) = report.freq_correlation {
        out.push_str(&format!(
            "Spearman(max|z|, 1/|f_A-B|) = {}\n",
            fmt_sig3(rho)
        ));
    }
    out
}

/// Per-job delta series as CSV, for external plotting of drift charts.
pub fn per_job_csv(tables: &[CountsTable]) -> Result<String> {
    let mut out = String::from("pair,job,dP_0s,dP_1s,dP_s0,dP_s1\n");
    for (pair, group) in group_by_pair(tables) {
        let series = stats::per_job(&group.iter().map(|t| (*t).clone()).collect::<Vec<_>>())?;
        let label = pair
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join("-");
        for (i, d) in series.deltas.iter().enumerate() {
            let job = series.jobs[i].map(|j| j.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{label},{job},{:e},{:e},{:e},{:e}\n",
                d[0], d[1], d[2], d[3]
            ));
        }
    }
    Ok(out)
}
