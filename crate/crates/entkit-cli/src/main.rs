//! `entkit` — compute entanglement measures for small multipartite states.
//!
//! Subcommands: `gme` (geometric measure of a pure state), `re` (relative
//! entropy of entanglement: bounds and numerics), `figure` (CSV sweeps over
//! one-parameter state families), `verify` (invariant suites).
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use entkit::figures::{
    family_rows, family_rows_range, fig1_rows, fig5_rows, fig6_rows, fig7_rows, FigureConfig,
    FIG2_FAMILIES, FIG3_FAMILY, FIG4_FAMILIES,
};
use entkit::{
    co_f_two_component_at, convex_roof_segment, dicke_diagonal_weights, epsilon_symmetric,
    er_lower_bound, er_numeric, f_upper, lambda_max_closed_form, lambda_max_numeric,
    make_closest_separable, make_determinant, make_dicke, make_dicke_mixture, make_ghz,
    monotone_f, plenio_vedral_check, relative_entropy, two_component, ClosedFormFamily,
    DensityMatrix, ErConfig, GmeConfig, Restriction, SeparableFamily, StateDescriptor,
    StateObject,
};

/// Numerical E_R is skipped for states larger than this (use the library
/// directly for bigger systems; closed forms and bounds stay available).
const NUMERIC_DIM_LIMIT: usize = 32;

#[derive(Parser)]
#[command(name = "entkit", version, about = "Entanglement measures for small multipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometric measure of a pure state: Λ_max, E_sin², E_log₂.
    Gme {
        /// JSON state descriptor, e.g. '{"type":"ghz","n":3}'.
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative entropy of entanglement: lower bound, F, co F, numeric E_R.
    Re {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Skip the numerical minimization column.
        #[arg(long)]
        no_numeric: bool,
        /// Restrict the minimization to Dicke-diagonal separable states.
        #[arg(long, value_enum)]
        restrict: Option<RestrictArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit one of the canned family sweeps (fig1..fig7) as CSV.
    Figure {
        #[arg(long)]
        fig: FigId,
        /// Output path; figures with several families write one file per
        /// family next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Number of sweep points that get a numerical E_R dot.
        #[arg(long, default_value_t = 11)]
        numeric: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        /// Skip all numerical E_R dots.
        #[arg(long)]
        no_numeric: bool,
    },
    /// Run an invariant suite; exits 1 on any failure.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RestrictArg {
    Dicke,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    #[value(name = "saturation")]
    Saturation,
    #[value(name = "sandwich")]
    Sandwich,
    #[value(name = "monotone")]
    Monotone,
    #[value(name = "plenio_vedral")]
    PlenioVedral,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Gme {
            state,
            seed,
            starts,
            tol,
            out,
        } => {
            let psi = match StateDescriptor::from_json(&state)?.build()? {
                StateObject::Pure(psi) => psi,
                StateObject::Mixed(_) => {
                    return Err(anyhow!("gme needs a pure state descriptor"))
                }
            };
            let cfg = GmeConfig {
                starts,
                tol,
                seed,
                ..GmeConfig::default()
            };
            let r = lambda_max_numeric(&psi, &cfg)?;
            let mut csv = String::from("lambda_max,e_sin2,e_log2,converged,sweeps\n");
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt(r.lambda_max),
                fmt(r.e_sin2),
                fmt(r.e_log2),
                r.converged,
                r.sweeps_used
            ));
            emit(&out, vec![(String::new(), csv)])?;
            Ok(0)
        }
        Command::Re {
            state,
            seed,
            starts,
            tol,
            no_numeric,
            restrict,
            out,
        } => {
            let object = StateDescriptor::from_json(&state)?.build()?;
            let rho = object.density()?;
            let er_lower = match &object {
                StateObject::Pure(psi) => {
                    let cfg = GmeConfig {
                        starts: starts.max(8),
                        seed,
                        ..GmeConfig::default()
                    };
                    Some(er_lower_bound(psi, &cfg)?)
                }
                StateObject::Mixed(_) => None,
            };
            let weights = dicke_diagonal_weights(&rho, 1e-8);
            let (f_col, co_col) = match &weights {
                Some(p) => {
                    let n = rho.structure().party_count();
                    let f = f_upper(n, p)?;
                    let support: Vec<usize> = p
                        .iter()
                        .enumerate()
                        .filter(|(_, &w)| w > 1e-12)
                        .map(|(k, _)| k)
                        .collect();
                    let co = match support.len() {
                        1 => Some(f),
                        2 => Some(co_f_two_component_at(
                            n,
                            support[0],
                            support[1],
                            p[support[0]],
                        )?),
                        _ => None,
                    };
                    (Some(f), co)
                }
                None => (None, None),
            };
            let numeric = if no_numeric || rho.total_dim() > NUMERIC_DIM_LIMIT {
                None
            } else {
                let cfg = ErConfig {
                    starts,
                    tol,
                    seed,
                    restrict: match restrict {
                        Some(RestrictArg::Dicke) => Restriction::DickeDiagonal,
                        None => Restriction::None,
                    },
                    ..ErConfig::for_structure(rho.structure())
                };
                Some(er_numeric(&rho, &cfg)?.value)
            };
            let mut csv = String::from("er_lower,f_upper,co_f,er_numeric\n");
            csv.push_str(&format!(
                "{},{},{},{}\n",
                opt(er_lower),
                opt(f_col),
                opt(co_col),
                opt(numeric)
            ));
            emit(&out, vec![(String::new(), csv)])?;
            Ok(0)
        }
        Command::Figure {
            fig,
            out,
            grid,
            numeric,
            seed,
            starts,
            no_numeric,
        } => {
            let fc = FigureConfig {
                grid,
                numeric_points: numeric,
                starts,
                seed,
                numeric: !no_numeric,
            };
            let sections = build_figure(fig, &fc)?;
            emit(&out, sections)?;
            Ok(0)
        }
        Command::Verify { suite, seed } => {
            let ok = match suite {
                Suite::Saturation => verify_saturation()?,
                Suite::Sandwich => verify_sandwich(seed)?,
                Suite::Monotone => verify_monotone()?,
                Suite::PlenioVedral => verify_plenio_vedral()?,
            };
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn fmt(x: f64) -> String {
    // Normalize anything that rounds to zero so no cell prints "-0.0000000".
    let rounded = (x * 1e7).round() / 1e7;
    let clean = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{clean:.7}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn family_section(n: usize, k1: usize, k2: usize) -> String {
    format!("rho_{n}_{k1}_{k2}")
}

fn family_csv(rows: &[entkit::figures::FamilyRow]) -> String {
    let mut csv = String::from("s,f,co_f,er_numeric\n");
    for r in rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt(r.s),
            fmt(r.f),
            fmt(r.co_f),
            opt(r.er_numeric)
        ));
    }
    csv
}

fn build_figure(fig: FigId, fc: &FigureConfig) -> anyhow::Result<Vec<(String, String)>> {
    Ok(match fig {
        FigId::Fig1 => {
            let rows = fig1_rows(fc)?;
            let mut csv = String::from("s,e_log2,er_numeric\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    fmt(r.s),
                    fmt(r.e_log2),
                    opt(r.er_numeric)
                ));
            }
            vec![(String::new(), csv)]
        }
        FigId::Fig2 => FIG2_FAMILIES
            .iter()
            .map(|&(n, k1, k2)| {
                family_rows(n, k1, k2, fc)
                    .map(|rows| (family_section(n, k1, k2), family_csv(&rows)))
            })
            .collect::<entkit::Result<Vec<_>>>()?,
        FigId::Fig3 => {
            let (n, k1, k2) = FIG3_FAMILY;
            let main = family_rows(n, k1, k2, fc)?;
            let blowup = family_rows_range(n, k1, k2, 0.0, 0.01, fc)?;
            vec![
                (family_section(n, k1, k2), family_csv(&main)),
                (
                    format!("{}_blowup", family_section(n, k1, k2)),
                    family_csv(&blowup),
                ),
            ]
        }
        FigId::Fig4 => FIG4_FAMILIES
            .iter()
            .map(|&(n, k1, k2)| {
                family_rows(n, k1, k2, fc)
                    .map(|rows| (family_section(n, k1, k2), family_csv(&rows)))
            })
            .collect::<entkit::Result<Vec<_>>>()?,
        FigId::Fig5 => {
            let rows = fig5_rows(fc.grid)?;
            let mut csv = String::from("s,f,co_f\n");
            for r in &rows {
                csv.push_str(&format!("{},{},{}\n", fmt(r.s), fmt(r.f), fmt(r.co_f)));
            }
            vec![(String::new(), csv)]
        }
        FigId::Fig6 => {
            let rows = fig6_rows(fc.grid)?;
            let mut csv = String::from("s,epsilon,f\n");
            for r in &rows {
                csv.push_str(&format!("{},{},{}\n", fmt(r.s), fmt(r.epsilon), fmt(r.f)));
            }
            vec![(String::new(), csv)]
        }
        FigId::Fig7 => {
            let rows = fig7_rows(fc.grid)?;
            let mut csv = String::from("x,f\n");
            for r in &rows {
                csv.push_str(&format!("{},{}\n", fmt(r.x), fmt(r.f)));
            }
            vec![(String::new(), csv)]
        }
    })
}

/// Writes each `(section, csv)` pair to its own file (or all to stdout).
fn emit(out: &Option<PathBuf>, sections: Vec<(String, String)>) -> anyhow::Result<()> {
    match out {
        None => {
            if sections.len() == 1 {
                print!("{}", sections[0].1);
            } else {
                for (name, text) in &sections {
                    println!("# file: {name}");
                    print!("{text}");
                }
            }
        }
        Some(path) => {
            if sections.len() == 1 {
                fs::write(path, &sections[0].1)
                    .with_context(|| format!("writing {}", path.display()))?;
            } else {
                let stem = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .ok_or_else(|| anyhow!("bad output path"))?;
                let ext = path
                    .extension()
                    .and_then(|s| s.to_str())
                    .unwrap_or("csv");
                let parent = path.parent().map(PathBuf::from).unwrap_or_default();
                for (name, text) in &sections {
                    let target = parent.join(format!("{stem}_{name}.{ext}"));
                    fs::write(&target, text)
                        .with_context(|| format!("writing {}", target.display()))?;
                    eprintln!("wrote {}", target.display());
                }
            }
        }
    }
    Ok(())
}

struct SuiteReport {
    failures: usize,
    checks: usize,
}

impl SuiteReport {
    fn new() -> Self {
        Self {
            failures: 0,
            checks: 0,
        }
    }

    fn check(&mut self, label: &str, error: f64, tol: f64) {
        self.checks += 1;
        if error <= tol {
            println!("ok   {label}  margin {:.2e} <= {tol:.0e}", error);
        } else {
            self.failures += 1;
            println!("FAIL {label}  margin {:.2e} > {tol:.0e}", error);
        }
    }

    fn condition(&mut self, label: &str, ok: bool) {
        self.checks += 1;
        if ok {
            println!("ok   {label}");
        } else {
            self.failures += 1;
            println!("FAIL {label}");
        }
    }

    fn finish(self, name: &str) -> bool {
        println!(
            "{name}: {}/{} checks passed",
            self.checks - self.failures,
            self.checks
        );
        self.failures == 0
    }
}

fn verify_saturation() -> anyhow::Result<bool> {
    let mut report = SuiteReport::new();
    for n in 1..=6usize {
        for k in 0..=n {
            let rho = make_dicke(n, k)?.density()?;
            let sigma = make_closest_separable(&SeparableFamily::Dicke { n, k })?;
            let s = relative_entropy(&rho, &sigma)?;
            let lam = lambda_max_closed_form(&ClosedFormFamily::Dicke { n, k })?;
            report.check(
                &format!("S(n,k)=({n},{k}) vs sigma*"),
                (s - (-2.0 * lam.log2())).abs(),
                1e-9,
            );
        }
    }
    for n in [2usize, 3] {
        let rho = make_determinant(n)?.density()?;
        let sigma = make_closest_separable(&SeparableFamily::Det { n })?;
        let s = relative_entropy(&rho, &sigma)?;
        // log₂(n!) is −2·log₂ Λ_max for the determinant family.
        let target = -2.0 * lambda_max_closed_form(&ClosedFormFamily::Det { n })?.log2();
        report.check(&format!("Det{n} vs sigma1"), (s - target).abs(), 1e-9);
    }
    {
        let rho = make_ghz(3)?.density()?;
        let sigma = make_closest_separable(&SeparableFamily::Ghz)?;
        report.check(
            "GHZ vs sigma2",
            (relative_entropy(&rho, &sigma)? - 1.0).abs(),
            1e-9,
        );
    }
    let w = make_dicke(3, 2)?.density()?;
    for (family, label) in [
        (SeparableFamily::WContinuous, "W vs sigma3"),
        (SeparableFamily::WDiscrete, "W vs sigma4"),
    ] {
        let sigma = make_closest_separable(&family)?;
        report.check(
            label,
            (relative_entropy(&w, &sigma)? - (9f64 / 4.0).log2()).abs(),
            1e-9,
        );
    }
    Ok(report.finish("saturation"))
}

fn verify_sandwich(seed: u64) -> anyhow::Result<bool> {
    // co ℰ ≤ E_R ≤ co F on the two-component Dicke families, with E_R from
    // the Dicke-diagonal minimizer (the restricted minimum equals co F).
    let mut report = SuiteReport::new();
    for n in 2..=4usize {
        for k1 in 0..n {
            for k2 in (k1 + 1)..=n {
                let co_e = convex_roof_segment(
                    |s| {
                        let mut q = vec![0.0; n + 1];
                        q[k1] = s;
                        q[k2] = 1.0 - s;
                        epsilon_symmetric(n, &q).expect("valid distribution")
                    },
                    1001,
                )?;
                for i in 0..11usize {
                    let s = i as f64 / 10.0;
                    let rho = make_dicke_mixture(&two_component(n, k1, k2, s)?);
                    let cfg = ErConfig {
                        ensemble_size: 2 * (n + 2),
                        starts: 6,
                        max_iters: 600,
                        tol: 1e-10,
                        seed: seed ^ (n * 100 + k1 * 10 + k2) as u64,
                        restrict: Restriction::DickeDiagonal,
                    };
                    let er = er_numeric(&rho, &cfg)?.value;
                    let cof = co_f_two_component_at(n, k1, k2, s)?;
                    let coe = co_e.envelope_at(s);
                    report.condition(
                        &format!(
                            "({n};{k1},{k2}) s={s:.1}: co-eps {coe:.5} <= er {er:.5} <= co-F {cof:.5}"
                        ),
                        er >= coe - 1e-3 && er <= cof + 1e-3,
                    );
                }
            }
        }
    }
    Ok(report.finish("sandwich"))
}

fn verify_monotone() -> anyhow::Result<bool> {
    let mut report = SuiteReport::new();
    let min4 = (0..=1000)
        .map(|i| monotone_f(4, i as f64 / 1000.0).expect("x in range"))
        .fold(f64::INFINITY, f64::min);
    let min2 = (0..=1000)
        .map(|i| monotone_f(2, i as f64 / 1000.0).expect("x in range"))
        .fold(f64::INFINITY, f64::min);
    report.condition(&format!("min f(4,x) = {min4:.6} < 0"), min4 < 0.0);
    report.condition(&format!("min f(2,x) = {min2:.6} >= 0"), min2 >= -1e-12);
    Ok(report.finish("monotone"))
}

fn verify_plenio_vedral() -> anyhow::Result<bool> {
    let mut report = SuiteReport::new();
    for n in 2..=6usize {
        for k in 0..=n {
            let psi = make_dicke(n, k)?;
            let (lhs, rhs) = plenio_vedral_check(&psi)?;
            report.check(&format!("S({n},{k})"), (lhs - rhs).abs(), 1e-4);
        }
    }
    Ok(report.finish("plenio_vedral"))
}

// Keeps the verify suites honest about which matrices they compare.
#[allow(dead_code)]
fn max_abs_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    a.matrix()
        .iter()
        .zip(b.matrix().iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
