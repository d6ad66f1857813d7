//! Estimators and hypothesis tests: CHSH, the four no-signaling deltas,
//! their standard errors, z-scores, two-sided Gaussian p-values, and the
//! look-elsewhere (Bonferroni) correction.
//!
//! Delta ordering everywhere is `[δP_{0∗}, δP_{1∗}, δP_{∗0}, δP_{∗1}]`:
//! the first two compare A's "+" marginal across B's setting, the last two
//! compare B's "+" marginal across A's setting.

use crate::counts::CountsTable;
use crate::erfc::erfc;
use crate::error::{Error, Result};
use crate::plan::SETTINGS;

/// Paper default look-elsewhere multiplicity, 127·8.
pub const DEFAULT_BONFERRONI_M: u32 = 1016;

/// CHSH sign convention: +1 for a=b=0, −1 otherwise, in setting-index order.
pub const CHSH_SIGNS: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Per-setting single-party "+" probabilities.
#[derive(Clone, Copy, Debug)]
pub struct Marginals {
    /// P_ab(+∗) in setting-index order.
    pub a_plus: [f64; 4],
    /// P_ab(∗+) in setting-index order.
    pub b_plus: [f64; 4],
}

/// P(+∗) = [n(++)+n(+−)]/N and P(∗+) = [n(++)+n(−+)]/N per setting.
pub fn marginals(t: &CountsTable) -> Result<Marginals> {
    let mut a_plus = [0.0; 4];
    let mut b_plus = [0.0; 4];
    for (i, s) in SETTINGS.iter().enumerate() {
        let n = t.total(*s);
        if n == 0 {
            return Err(Error::DegenerateCounts);
        }
        let c = t.counts(*s);
        a_plus[i] = (c[0] + c[1]) as f64 / n as f64;
        b_plus[i] = (c[0] + c[2]) as f64 / n as f64;
    }
    Ok(Marginals { a_plus, b_plus })
}

fn a_plus_counts(t: &CountsTable, s: [u8; 2]) -> u64 {
    let c = t.counts(s);
    c[0] + c[1]
}

fn b_plus_counts(t: &CountsTable, s: [u8; 2]) -> u64 {
    let c = t.counts(s);
    c[0] + c[2]
}

/// One marginal difference. With equal totals the subtraction is done on
/// integer counts so only the final division rounds.
fn delta(plus0: u64, n0: u64, plus1: u64, n1: u64) -> Result<f64> {
    if n0 == 0 || n1 == 0 {
        return Err(Error::DegenerateCounts);
    }
    if n0 == n1 {
        Ok((plus0 as i128 - plus1 as i128) as f64 / n0 as f64)
    } else {
        Ok(plus0 as f64 / n0 as f64 - plus1 as f64 / n1 as f64)
    }
}

/// The four no-signaling deltas `[δP_{0∗}, δP_{1∗}, δP_{∗0}, δP_{∗1}]`.
pub fn delta_p(t: &CountsTable) -> Result<[f64; 4]> {
    Ok([
        delta(
            a_plus_counts(t, [0, 0]),
            t.total([0, 0]),
            a_plus_counts(t, [0, 1]),
            t.total([0, 1]),
        )?,
        delta(
            a_plus_counts(t, [1, 0]),
            t.total([1, 0]),
            a_plus_counts(t, [1, 1]),
            t.total([1, 1]),
        )?,
        delta(
            b_plus_counts(t, [0, 0]),
            t.total([0, 0]),
            b_plus_counts(t, [1, 0]),
            t.total([1, 0]),
        )?,
        delta(
            b_plus_counts(t, [0, 1]),
            t.total([0, 1]),
            b_plus_counts(t, [1, 1]),
            t.total([1, 1]),
        )?,
    ])
}

/// Per-setting correlators ⟨AB⟩_ab.
pub fn correlators(t: &CountsTable) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for (i, s) in SETTINGS.iter().enumerate() {
        let n = t.total(*s);
        if n == 0 {
            return Err(Error::DegenerateCounts);
        }
        let c = t.counts(*s);
        out[i] = (c[0] as i128 - c[1] as i128 - c[2] as i128 + c[3] as i128) as f64 / n as f64;
    }
    Ok(out)
}

/// CHSH estimate with its standard error and z-score against the classical
/// bound of 2.
#[derive(Clone, Copy, Debug)]
pub struct ChshReport {
    pub value: f64,
    pub correlators: [f64; 4],
    pub sigma: f64,
    /// (CHSH − 2)/σ; positive means violation of the classical bound.
    pub z: f64,
    pub signs: [f64; 4],
}

/// CHSH = Σ_ab s_ab ⟨AB⟩_ab with s_00 = +1 and −1 otherwise.
pub fn chsh(t: &CountsTable) -> Result<ChshReport> {
    let corr = correlators(t)?;
    let value: f64 = corr
        .iter()
        .zip(CHSH_SIGNS)
        .map(|(e, s)| e * s)
        .sum();
    let sigma = sigma_chsh(t)?;
    Ok(ChshReport {
        value,
        correlators: corr,
        sigma,
        z: (value - 2.0) / sigma,
        signs: CHSH_SIGNS,
    })
}

/// σ(CHSH) from Σ_ab (1 − ⟨AB⟩²_ab)/N_ab (the equal-N formula generalized
/// per setting).
pub fn sigma_chsh(t: &CountsTable) -> Result<f64> {
    let corr = correlators(t)?;
    let mut var = 0.0;
    for (i, s) in SETTINGS.iter().enumerate() {
        var += (1.0 - corr[i] * corr[i]) / t.total(*s) as f64;
    }
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(var.sqrt())
}

/// Standard errors of the four deltas, `[σ_{0∗}, σ_{1∗}, σ_{∗0}, σ_{∗1}]`,
/// from Σ over the two compared settings of P(1−P)/N_setting.
pub fn sigma_marginals(t: &CountsTable) -> Result<[f64; 4]> {
    let m = marginals(t)?;
    let n = |s: [u8; 2]| t.total(s) as f64;
    let idx = |s: [u8; 2]| (s[0] as usize) * 2 + s[1] as usize;
    let term_a = |s: [u8; 2]| m.a_plus[idx(s)] * (1.0 - m.a_plus[idx(s)]) / n(s);
    let term_b = |s: [u8; 2]| m.b_plus[idx(s)] * (1.0 - m.b_plus[idx(s)]) / n(s);
    let vars = [
        term_a([0, 0]) + term_a([0, 1]),
        term_a([1, 0]) + term_a([1, 1]),
        term_b([0, 0]) + term_b([1, 0]),
        term_b([0, 1]) + term_b([1, 1]),
    ];
    if vars.iter().any(|&v| v <= 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(vars.map(f64::sqrt))
}

/// Two-sided Gaussian tail probability of observing |z| ≥ |delta| under a
/// zero-mean normal with standard deviation `sigma`:
/// p = erfc(|delta| / (√2·σ)).
pub fn p_value(delta: f64, sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::NonPositiveSigma(sigma));
    }
    Ok(erfc(delta.abs() / (std::f64::consts::SQRT_2 * sigma)))
}

/// Look-elsewhere correction: min(1, m·p).
pub fn bonferroni(p: f64, m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidCounts("bonferroni m must be at least 1".into()));
    }
    Ok((m as f64 * p).min(1.0))
}

/// The full no-signaling verdict for one counts table.
#[derive(Clone, Copy, Debug)]
pub struct NoSigReport {
    /// `[δP_{0∗}, δP_{1∗}, δP_{∗0}, δP_{∗1}]`.
    pub deltas: [f64; 4],
    pub sigmas: [f64; 4],
    /// δ/σ per delta.
    pub z: [f64; 4],
    pub p_raw: [f64; 4],
    pub p_corrected: [f64; 4],
    pub max_abs_z: f64,
}

pub fn no_signaling_report(t: &CountsTable, m: u32) -> Result<NoSigReport> {
    let deltas = delta_p(t)?;
    let sigmas = sigma_marginals(t)?;
    let mut z = [0.0; 4];
    let mut p_raw = [0.0; 4];
    let mut p_corrected = [0.0; 4];
    for i in 0..4 {
        z[i] = deltas[i] / sigmas[i];
        p_raw[i] = p_value(deltas[i], sigmas[i])?;
        p_corrected[i] = bonferroni(p_raw[i], m)?;
    }
    let max_abs_z = z.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(NoSigReport {
        deltas,
        sigmas,
        z,
        p_raw,
        p_corrected,
        max_abs_z,
    })
}

/// Per-job delta series plus the aggregate over all jobs.
#[derive(Clone, Debug)]
pub struct PerJobSeries {
    pub jobs: Vec<Option<u32>>,
    pub deltas: Vec<[f64; 4]>,
    /// delta_p of the summed counts.
    pub aggregate: [f64; 4],
}

/// Compute the four deltas for each job and for the summed counts. All
/// tables must share one test kind and pair.
pub fn per_job(series: &[CountsTable]) -> Result<PerJobSeries> {
    if series.is_empty() {
        return Err(Error::InsufficientData("empty job series".into()));
    }
    let aggregate_table = CountsTable::sum(&series.iter().collect::<Vec<_>>())?;
    let mut deltas = Vec::with_capacity(series.len());
    let mut jobs = Vec::with_capacity(series.len());
    for t in series {
        deltas.push(delta_p(t)?);
        jobs.push(t.job);
    }
    Ok(PerJobSeries {
        jobs,
        deltas,
        aggregate: delta_p(&aggregate_table)?,
    })
}

/// Mid-rank assignment (average rank for ties).
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&i, &j| xs[i].partial_cmp(&xs[j]).expect("no NaN in ranks"));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation between max|z| and 1/|Δf| across pairs, ties
/// mid-ranked. Returns 0 when either variable is constant. Needs at least
/// three reports with a frequency difference attached.
pub fn freq_correlation(reports: &[(NoSigReport, f64)]) -> Result<f64> {
    if reports.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "frequency correlation needs at least 3 pairs with Δf, got {}",
            reports.len()
        )));
    }
    let zs: Vec<f64> = reports.iter().map(|(r, _)| r.max_abs_z).collect();
    let inv_df: Vec<f64> = reports
        .iter()
        .map(|(_, df)| {
            if *df == 0.0 {
                f64::INFINITY
            } else {
                1.0 / df.abs()
            }
        })
        .collect();
    let rx = ranks(&zs);
    let ry = ranks(&inv_df);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..rx.len() {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx).powi(2);
        syy += (ry[i] - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::TestKind;

    /// Counts for pair 49-66 reconstructed from the published five-decimal
    /// probabilities at N = 1.2e8 per setting (all products are integers).
    pub(crate) fn pair_49_66_table() -> CountsTable {
        let probs: [[f64; 4]; 4] = [
            // setting index order: (0,0), (0,1), (1,0), (1,1)
            [0.27779, 0.22945, 0.26979, 0.22297],
            [0.27800, 0.22958, 0.26975, 0.22267],
            [0.28060, 0.23202, 0.26679, 0.22059],
            [0.28092, 0.23137, 0.26742, 0.22029],
        ];
        let n = 120_000_000f64;
        let mut t = CountsTable::new(TestKind::C, vec![49, 55, 68, 67, 66], None);
        for (i, s) in SETTINGS.iter().enumerate() {
            let c = probs[i].map(|p| (p * n).round() as u64);
            assert_eq!(c.iter().sum::<u64>(), 120_000_000);
            t.add(*s, c);
        }
        t
    }

    fn uniform_table(per_outcome: u64) -> CountsTable {
        let mut t = CountsTable::new(TestKind::B, vec![0, 1, 2], None);
        for s in SETTINGS {
            t.add(s, [per_outcome; 4]);
        }
        t
    }

    #[test]
    fn marginals_match_published_probabilities() {
        let t = pair_49_66_table();
        let m = marginals(&t).unwrap();
        assert!((m.a_plus[0] - 0.50724).abs() < 1e-12);
        assert!((m.b_plus[0] - 0.54758).abs() < 1e-12);
        assert!((m.a_plus[2] - 0.51262).abs() < 1e-12);
        assert!((m.b_plus[3] - 0.54834).abs() < 1e-12);
    }

    #[test]
    fn marginals_trivial_cases() {
        let m = marginals(&uniform_table(5)).unwrap();
        for i in 0..4 {
            assert_eq!(m.a_plus[i], 0.5);
            assert_eq!(m.b_plus[i], 0.5);
        }
        let mut t = CountsTable::new(TestKind::B, vec![0, 1], None);
        for s in SETTINGS {
            t.add(s, [100, 0, 0, 0]);
        }
        let m = marginals(&t).unwrap();
        assert_eq!(m.a_plus, [1.0; 4]);
        assert_eq!(m.b_plus, [1.0; 4]);
        let empty = CountsTable::new(TestKind::B, vec![0, 1], None);
        assert!(matches!(marginals(&empty), Err(Error::DegenerateCounts)));
    }

    #[test]
    fn deltas_match_published_row_49_66() {
        let t = pair_49_66_table();
        let d = delta_p(&t).unwrap();
        let published = [-3.36e-4, 3.29e-4, 1.86e-4, -5.89e-4];
        for i in 0..4 {
            assert!(
                (d[i] - published[i]).abs() <= 0.1e-4,
                "delta {i}: got {:.3e}, published {:.3e}",
                d[i],
                published[i]
            );
        }
    }

    #[test]
    fn setting_independent_counts_give_zero_deltas() {
        let d = delta_p(&uniform_table(123)).unwrap();
        assert_eq!(d, [0.0; 4]);
    }

    #[test]
    fn relabeling_a_swaps_and_negates_deltas() {
        let t = pair_49_66_table();
        let d = delta_p(&t).unwrap();
        // Relabel a → 1−a: swap settings (0,b) ↔ (1,b).
        let mut relabeled = CountsTable::new(t.test, t.pair.clone(), None);
        for s in SETTINGS {
            relabeled.add([1 - s[0], s[1]], t.counts(s));
        }
        let dr = delta_p(&relabeled).unwrap();
        assert_eq!(dr[0], d[1]);
        assert_eq!(dr[1], d[0]);
        assert_eq!(dr[2], -d[2]);
        assert_eq!(dr[3], -d[3]);
    }

    #[test]
    fn scaling_counts_leaves_deltas_and_chsh_unchanged() {
        let t = pair_49_66_table();
        let mut scaled = CountsTable::new(t.test, t.pair.clone(), None);
        for s in SETTINGS {
            scaled.add(s, t.counts(s).map(|c| c * 7));
        }
        assert_eq!(delta_p(&t).unwrap(), delta_p(&scaled).unwrap());
        assert_eq!(
            chsh(&t).unwrap().value,
            chsh(&scaled).unwrap().value
        );
    }

    #[test]
    fn chsh_trivial_values() {
        // Uncorrelated counts: CHSH = 0.
        let r = chsh(&uniform_table(100)).unwrap();
        assert_eq!(r.value, 0.0);
        // Deterministic A=B=+1: correlators all +1, CHSH = 1 − 3 = −2,
        // and the variance is exactly zero.
        let mut t = CountsTable::new(TestKind::B, vec![0, 1], None);
        for s in SETTINGS {
            t.add(s, [50, 0, 0, 0]);
        }
        let corr = correlators(&t).unwrap();
        assert_eq!(corr, [1.0; 4]);
        let value: f64 = corr.iter().zip(CHSH_SIGNS).map(|(e, s)| e * s).sum();
        assert_eq!(value, -2.0);
        assert!(matches!(chsh(&t), Err(Error::ZeroVariance)));
    }

    #[test]
    fn sigma_matches_paper_captions() {
        // P = 1/2 everywhere at the three published trial counts.
        for (n_per_setting, caption, half_ulp) in [
            (30_000_000u64, 1.29e-4, 5e-7),
            (10_875_000, 2.14e-4, 5e-7),
            (120_000_000, 6.45e-5, 5e-8),
        ] {
            let mut t = CountsTable::new(TestKind::B, vec![0, 1], None);
            for s in SETTINGS {
                t.add(s, [n_per_setting / 4; 4]);
            }
            let sig = sigma_marginals(&t).unwrap();
            let expect = (0.5 / n_per_setting as f64).sqrt();
            for s in sig {
                assert!((s - expect).abs() < 1e-15);
                assert!(
                    (s - caption).abs() < half_ulp,
                    "sigma {s:e} vs caption {caption:e}"
                );
            }
        }
    }

    #[test]
    fn sigma_chsh_ideal_is_sqrt_two_over_n() {
        // ⟨AB⟩² = 1/2 in all four settings at N = 3e7 gives σ = √(2/N).
        // Realize correlators ±1/√2 approximately with integer counts and
        // check the exact formula instead on those counts.
        let t = pair_49_66_table();
        let corr = correlators(&t).unwrap();
        let n = 120_000_000f64;
        let expect = corr
            .iter()
            .map(|e| (1.0 - e * e) / n)
            .sum::<f64>()
            .sqrt();
        assert!((sigma_chsh(&t).unwrap() - expect).abs() < 1e-18);
        // And the ideal-value arithmetic: Σ(1 − 1/2)/N = 2/N.
        let sigma_ideal = (2.0f64 / 3.0e7).sqrt();
        assert!((sigma_ideal - 2.58e-4).abs() < 5e-7);
    }

    #[test]
    fn p_value_reference_points() {
        // z/σ = 5 → 5.73e-7 (the paper's 5-standard-deviation border).
        let p5 = p_value(5.0, 1.0).unwrap();
        assert!((p5 / 5.73e-7 - 1.0).abs() < 1e-3);
        assert_eq!(p_value(0.0, 1.0).unwrap(), 1.0);
        assert!(p_value(1.0, 0.0).is_err());
        assert!(p_value(1.0, -2.0).is_err());
    }

    #[test]
    fn p_value_monotone_and_bonferroni_clipped() {
        let mut last = 1.0;
        for k in 1..=10 {
            let p = p_value(k as f64 * 1e-4, 1e-4).unwrap();
            assert!(p < last, "p must decrease with |z|/σ");
            last = p;
        }
        assert_eq!(bonferroni(0.5, 3).unwrap(), 1.0);
        assert!((bonferroni(1e-6, 1016).unwrap() - 1.016e-3).abs() < 1e-12);
        assert!(bonferroni(0.5, 0).is_err());
        // Monotone in both arguments.
        assert!(bonferroni(1e-6, 10).unwrap() < bonferroni(1e-6, 20).unwrap());
        assert!(bonferroni(1e-7, 10).unwrap() < bonferroni(1e-6, 10).unwrap());
    }

    #[test]
    fn no_signaling_report_structure() {
        let t = pair_49_66_table();
        let r = no_signaling_report(&t, DEFAULT_BONFERRONI_M).unwrap();
        for i in 0..4 {
            assert!((r.z[i] - r.deltas[i] / r.sigmas[i]).abs() < 1e-15);
            assert!(r.p_corrected[i] >= r.p_raw[i]);
            assert!(r.p_corrected[i] <= 1.0);
            assert!(r.deltas[i].abs() <= 1.0);
        }
        assert!(r.max_abs_z > 5.0, "49-66 violates at more than 5 sigma");
    }

    #[test]
    fn per_job_aggregate_identity() {
        // Equal-N jobs: mean of per-job deltas equals the aggregate, exactly
        // at the integer level.
        let mut jobs = Vec::new();
        let specs = [[7u64, 3, 5, 5], [4, 6, 5, 5], [5, 5, 6, 4]];
        for (j, add) in specs.iter().enumerate() {
            let mut t = CountsTable::new(TestKind::B, vec![0, 1], Some(j as u32));
            for (i, s) in SETTINGS.iter().enumerate() {
                t.add(*s, [add[(i + j) % 4], add[(i + j + 1) % 4], add[(i + j + 2) % 4], add[(i + j + 3) % 4]]);
            }
            jobs.push(t);
        }
        let series = per_job(&jobs).unwrap();
        assert_eq!(series.deltas.len(), 3);
        for i in 0..4 {
            let mean: f64 = series.deltas.iter().map(|d| d[i]).sum::<f64>() / 3.0;
            assert!((mean - series.aggregate[i]).abs() < 1e-15);
        }
        // The identity is exact on the integer numerators: the summed-counts
        // difference equals the sum of per-job differences.
        let agg = CountsTable::sum(&jobs.iter().collect::<Vec<_>>()).unwrap();
        let total_diff =
            a_plus_counts(&agg, [0, 0]) as i128 - a_plus_counts(&agg, [0, 1]) as i128;
        let job_diff_sum: i128 = jobs
            .iter()
            .map(|t| a_plus_counts(t, [0, 0]) as i128 - a_plus_counts(t, [0, 1]) as i128)
            .sum();
        assert_eq!(total_diff, job_diff_sum);
        // Single job: aggregate equals the one entry.
        let single = per_job(&jobs[..1]).unwrap();
        assert_eq!(single.deltas[0], single.aggregate);
    }

    #[test]
    fn per_job_rejects_mixed_metadata() {
        let t1 = CountsTable::new(TestKind::B, vec![0, 1], Some(0));
        let t2 = CountsTable::new(TestKind::C, vec![0, 1], Some(1));
        assert!(per_job(&[t1, t2]).is_err());
    }

    #[test]
    fn freq_correlation_extremes() {
        let mk = |z: f64| NoSigReport {
            deltas: [0.0; 4],
            sigmas: [1.0; 4],
            z: [z, 0.0, 0.0, 0.0],
            p_raw: [1.0; 4],
            p_corrected: [1.0; 4],
            max_abs_z: z,
        };
        // Perfectly monotone: larger z at smaller |Δf|.
        let data = vec![(mk(5.0), 1.0), (mk(3.0), 2.0), (mk(2.0), 4.0), (mk(1.0), 8.0)];
        assert!((freq_correlation(&data).unwrap() - 1.0).abs() < 1e-12);
        // Constant z: all ties, coefficient 0.
        let flat = vec![(mk(2.0), 1.0), (mk(2.0), 2.0), (mk(2.0), 3.0)];
        assert_eq!(freq_correlation(&flat).unwrap(), 0.0);
        assert!(freq_correlation(&flat[..2]).is_err());
    }

    #[test]
    fn freq_correlation_on_published_next_neighbor_data() {
        // Test-a deltas (units 1e-4) and f_A−f_B (MHz) for the 13 pairs of
        // the kyoto next-neighbor run; σ ≃ 1.29e-4 common to all pairs.
        let rows: [([f64; 4], f64); 13] = [
            ([103.0, 281.0, 104.0, -64.2], 0.77),
            ([70.8, 63.3, 85.0, 84.3], -4.2),
            ([-12.6, 6.32, -0.617, -20.3], -5.5),
            ([-50.1, -76.0, -63.7, -28.3], 6.8),
            ([-40.9, -12.7, -13.9, -47.1], 8.2),
            ([2.0, -2.78, -0.305, 3.11], -9.3),
            ([8.74, 6.7, 3.98, 3.28], 15.0),
            ([2.37, -6.63, -1.91, 8.89], 15.0),
            ([0.569, -0.013, -1.11, 0.904], 17.0),
            ([0.0717, -7.03, -8.67, -9.78], -17.0),
            ([1.8, -1.53, -1.67, 5.53], -20.0),
            ([2.92, -1.69, -0.678, 3.76], 21.0),
            ([0.352, 1.55, 4.17, 2.34], -26.0),
        ];
        let sigma = 1.29e-4;
        let data: Vec<(NoSigReport, f64)> = rows
            .iter()
            .map(|(d, df)| {
                let deltas = d.map(|x| x * 1e-4);
                let z = deltas.map(|x| x / sigma);
                let max_abs_z = z.iter().map(|x| x.abs()).fold(0.0, f64::max);
                (
                    NoSigReport {
                        deltas,
                        sigmas: [sigma; 4],
                        z,
                        p_raw: [0.0; 4],
                        p_corrected: [0.0; 4],
                        max_abs_z,
                    },
                    *df,
                )
            })
            .collect();
        let rho = freq_correlation(&data).unwrap();
        assert!(rho > 0.0, "expected positive trend, got {rho}");
    }
}
