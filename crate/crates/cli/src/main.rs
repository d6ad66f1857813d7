//! `nosig` — plan, simulate, and analyze Bell / no-signaling experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 input validation error,
//! 3 numerical check failure. Seeds are always explicit arguments; no
//! environment variable is ever consulted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nosig_core::counts::CountsFile;
use nosig_core::plan::{make_plan, PlanFile, TestKind};
use nosig_core::report::{analyze, per_job_csv, render_paper_table, ReportFile};
use nosig_core::seq::verify_native_identities;
use nosig_core::sim::{simulate_plan, simulate_plan_par, NoiseConfig};
use nosig_core::topology::{pairs_at_distance, select_disjoint, CouplingGraph};
use nosig_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "nosig",
    version,
    about = "CHSH Bell and no-signaling tests: planning, exact-noise simulation, statistics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TestArg {
    A,
    B,
    C,
}

impl From<TestArg> for TestKind {
    fn from(t: TestArg) -> TestKind {
        match t {
            TestArg::A => TestKind::A,
            TestArg::B => TestKind::B,
            TestArg::C => TestKind::C,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    /// Fixed-width table in the layout of the published result tables.
    PaperTable,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a randomized job/shot plan over disjoint qubit pairs of a device.
    Plan {
        /// Coupling-map JSON ({"qubits": [...], "edges": [...]}).
        #[arg(long)]
        device: PathBuf,
        #[arg(long)]
        test: TestArg,
        /// A-B graph distance; defaults to 2 for tests a/b and 4 for test c.
        #[arg(long)]
        distance: Option<u32>,
        #[arg(long)]
        jobs: u32,
        #[arg(long)]
        shots: u32,
        /// Repetitions of each setting per job.
        #[arg(long, default_value_t = 25)]
        reps: u32,
        /// Shuffle seed (required; there is no implicit default).
        #[arg(long)]
        seed: u64,
        /// Keep only the first N disjoint pairs.
        #[arg(long)]
        max_pairs: Option<usize>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Sample a plan under a noise model into a counts file.
    Simulate {
        #[arg(long)]
        plan: PathBuf,
        /// Noise JSON; omitted means the ideal (noiseless) model.
        #[arg(long)]
        noise: Option<PathBuf>,
        /// Sampling seed (independent of the plan's shuffle seed).
        #[arg(long)]
        seed: u64,
        /// Sample jobs on one thread instead of in parallel (output is
        /// identical either way).
        #[arg(long)]
        serial: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the statistical pipeline over a counts file.
    Analyze {
        #[arg(long)]
        counts: PathBuf,
        /// Look-elsewhere multiplicity for the Bonferroni correction.
        #[arg(long, default_value_t = nosig_core::DEFAULT_BONFERRONI_M)]
        bonferroni_m: u32,
        /// Coupling map with qubit frequencies, to attach f_A−f_B.
        #[arg(long)]
        device: Option<PathBuf>,
        #[arg(long, default_value = "report.json")]
        out_report: PathBuf,
        #[arg(long, default_value = "table.txt")]
        out_table: PathBuf,
        /// Also write the per-job delta series as CSV.
        #[arg(long)]
        per_job_csv: Option<PathBuf>,
    },
    /// Verify the gate identities and transpilations numerically (tol 1e-10).
    TranspileVerify,
    /// Render a report file as text.
    Report {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::PaperTable)]
        format: ReportFormat,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::NotUnitary { .. }
            | Error::NotInvolution(_)
            | Error::NotCptp { .. }
            | Error::UnphysicalState(_)
            | Error::ZeroVariance
            | Error::NonPositiveSigma(_) => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            message: e.to_string(),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure {
        code: EXIT_VALIDATION,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Plan {
            device,
            test,
            distance,
            jobs,
            shots,
            reps,
            seed,
            max_pairs,
            out,
        } => {
            let test: TestKind = test.into();
            let graph = CouplingGraph::load(&device)?;
            let d = distance.unwrap_or_else(|| test.default_distance());
            let all = pairs_at_distance(&graph, d)?;
            let mut pairs = select_disjoint(&all);
            if let Some(n) = max_pairs {
                pairs.truncate(n);
            }
            if pairs.is_empty() {
                return Err(Failure {
                    code: EXIT_VALIDATION,
                    message: format!("no disjoint pairs at distance {d} on this device"),
                });
            }
            let plan = make_plan(test, reps, shots, jobs, seed)?;
            let device_name = device
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "device".into());
            let file = PlanFile::new(&device_name, pairs, plan);
            write_file(&out, &file.to_json())?;
            println!(
                "plan: test {} at distance {d}, {} disjoint pairs, {jobs} jobs x {} circuits x {shots} shots -> {}",
                test.letter(),
                file.pairs.len(),
                file.plan.circuits_per_job(),
                out.display()
            );
            println!(
                "trials per setting per pair: {}",
                file.plan.trials_per_setting()
            );
            Ok(())
        }
        Cmd::Simulate {
            plan,
            noise,
            seed,
            serial,
            out,
        } => {
            let plan_file = PlanFile::load(&plan)?;
            let noise_cfg = match noise {
                Some(path) => NoiseConfig::load(&path)?,
                None => NoiseConfig::ideal(),
            };
            let tables = if serial {
                simulate_plan(&plan_file, &noise_cfg, seed)?
            } else {
                simulate_plan_par(&plan_file, &noise_cfg, seed)?
            };
            let counts = CountsFile::from_tables(
                &plan_file.device,
                plan_file.plan.test,
                plan_file.plan.shots,
                &tables,
            )?;
            write_file(&out, &counts.to_json())?;
            println!(
                "simulate: {} pairs x {} jobs sampled with seed {seed} -> {}",
                plan_file.pairs.len(),
                plan_file.plan.jobs,
                out.display()
            );
            Ok(())
        }
        Cmd::Analyze {
            counts,
            bonferroni_m,
            device,
            out_report,
            out_table,
            per_job_csv: csv_path,
        } => {
            let (file, tables) = CountsFile::load(&counts)?;
            let graph = match device {
                Some(path) => Some(CouplingGraph::load(&path)?),
                None => None,
            };
            let report = analyze(&tables, &file.device, file.test, bonferroni_m, graph.as_ref())?;
            write_file(&out_report, &report.to_json())?;
            let table = render_paper_table(&report);
            write_file(&out_table, &table)?;
            if let Some(path) = csv_path {
                write_file(&path, &per_job_csv(&tables)?)?;
            }
            let flagged = report
                .pairs
                .iter()
                .filter(|p| p.max_abs_z > 5.0)
                .count();
            println!(
                "analyze: {} pairs, {flagged} beyond the 5-sigma border -> {}, {}",
                report.pairs.len(),
                out_report.display(),
                out_table.display()
            );
            Ok(())
        }
        Cmd::TranspileVerify => {
            let checks = verify_native_identities(1e-10);
            let mut failed = 0;
            for c in &checks {
                println!(
                    "{:<34} {}  (deviation {:.2e})",
                    c.name,
                    if c.pass { "ok" } else { "FAIL" },
                    c.deviation
                );
                if !c.pass {
                    failed += 1;
                }
            }
            if failed > 0 {
                return Err(Failure {
                    code: EXIT_NUMERICAL,
                    message: format!("{failed} identity check(s) failed"),
                });
            }
            println!("all {} identities hold at 1e-10", checks.len());
            Ok(())
        }
        Cmd::Report {
            report,
            format,
            out,
        } => {
            let report = ReportFile::load(&report)?;
            let text = match format {
                ReportFormat::PaperTable => render_paper_table(&report),
            };
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with success.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
