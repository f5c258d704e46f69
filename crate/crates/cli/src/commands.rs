//! The five subcommands.  Each loads and validates its inputs before the
//! output directory is created, so an input error leaves nothing behind.

use std::path::{Path, PathBuf};

use spdc_core::biphoton::{self, FrequencyGrid, GridRule, JsaGrid, PumpPulse, Regime};
use spdc_core::coherence::{self, Beam, CoherenceGrid};
use spdc_core::qpm::{self, CrystalScenario, DispersionMode, PhaseMatchSummary};
use spdc_core::schmidt::{self, SweepOptions};
use spdc_core::temporal::{self, TemporalGrid};

use crate::error::CliError;
use crate::output::{num, stride_for, OutputDir, RunManifest};

const PS: f64 = 1e12;
const THZ: f64 = 1e12;

/// Regime selection on the command line: one of the JSA forms, or `auto`
/// to pick the limit that matches the pump duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RegimeArg {
    Exact,
    Cw,
    Ultrashort,
    Intermediate,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Fft,
    Analytic,
}

/// Flags shared by the grid-producing commands.
#[derive(Debug, Clone, clap::Args)]
pub struct GridArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Pump duration override, ps.
    #[arg(long)]
    pub tau_p_ps: Option<f64>,
    #[arg(long, value_enum, default_value_t = RegimeArg::Exact)]
    pub regime: RegimeArg,
    /// Samples per axis (power of two), keeping the automatic spans.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Use the full Sellmeier mismatch instead of the linearised one
    /// (exact regime only).
    #[arg(long)]
    pub full_dispersion: bool,
    /// Largest number of samples per axis written to 2-D exports
    /// (0 = everything); larger grids are decimated by a uniform stride.
    #[arg(long, default_value_t = 512)]
    pub export_max: usize,
    #[arg(long, default_value = "spdc-out")]
    pub out: PathBuf,
    /// Allow writing into a non-empty output directory.
    #[arg(long)]
    pub force: bool,
}

struct Loaded {
    scenario: CrystalScenario,
    summary: PhaseMatchSummary,
    pulse: PumpPulse,
}

fn load(path: &Path, tau_p_ps: Option<f64>) -> Result<Loaded, CliError> {
    let mut scenario = CrystalScenario::load(path)?;
    if let Some(t) = tau_p_ps {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tau-p-ps must be positive, got {t}")));
        }
        scenario = scenario.with_pump_tau(t * 1e-12);
    }
    for w in scenario.warnings() {
        eprintln!("warning: {w}");
    }
    let summary = qpm::solve_central_frequencies(&scenario)?;
    let pulse = PumpPulse::gaussian(scenario.pump_tau);
    Ok(Loaded {
        scenario,
        summary,
        pulse,
    })
}

fn check_grid_n(grid_n: Option<usize>) -> Result<(), CliError> {
    match grid_n {
        Some(n) if n < 8 || !n.is_power_of_two() => {
            Err(CliError::Input(format!("--grid-n must be a power of two ≥ 8, got {n}")))
        }
        _ => Ok(()),
    }
}

fn manifest(command: &str, scenario: &Path) -> RunManifest {
    RunManifest {
        tool: "spdc".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        scenario: scenario.display().to_string(),
        out_dir: String::new(),
        tau_p_ps: None,
        regime: None,
        grid_n: None,
        wall_clock_s: 0.0,
        warnings: Vec::new(),
        grids: Vec::new(),
        files: Vec::new(),
    }
}

fn resolve_regime(arg: RegimeArg, summary: &PhaseMatchSummary, pulse: &PumpPulse) -> Regime {
    match arg {
        RegimeArg::Exact => Regime::Exact,
        RegimeArg::Cw => Regime::Cw,
        RegimeArg::Ultrashort => Regime::Ultrashort,
        RegimeArg::Intermediate => Regime::Intermediate,
        RegimeArg::Auto => temporal::regime_report(summary, pulse).regime.limit().unwrap_or(Regime::Exact),
    }
}

/// The automatic grid, or `n × n` samples over the automatic spans.
fn spectral_grid(l: &Loaded, grid_n: Option<usize>) -> Result<FrequencyGrid, CliError> {
    match grid_n {
        None => Ok(biphoton::default_grid(&l.summary, &l.pulse)?),
        Some(n) => {
            let rule = GridRule {
                max_count: usize::MAX,
                ..GridRule::default()
            };
            let auto = biphoton::grid_with_rule(&l.summary, &l.pulse, &rule)?;
            let span_s = auto.s.n as f64 * auto.s.step;
            let span_i = auto.i.n as f64 * auto.i.step;
            Ok(FrequencyGrid::new(n, span_s / n as f64, n, span_i / n as f64)?)
        }
    }
}

fn build_jsa(l: &Loaded, args: &GridArgs, grid: &FrequencyGrid) -> Result<JsaGrid, CliError> {
    let regime = resolve_regime(args.regime, &l.summary, &l.pulse);
    let mode = if args.full_dispersion {
        DispersionMode::Full
    } else {
        DispersionMode::Linear
    };
    let jsa = biphoton::jsa_for_regime(regime, &l.scenario, &l.summary, &l.pulse, grid, mode)?;
    if !jsa.is_finite() {
        return Err(CliError::Numeric("joint spectral amplitude has non-finite entries".into()));
    }
    Ok(jsa)
}

fn indices(n: usize, stride: usize) -> Vec<usize> {
    (0..n).step_by(stride).collect()
}

fn grid_manifest(command: &str, args: &GridArgs, l: &Loaded, regime: Regime) -> RunManifest {
    let mut m = manifest(command, &args.scenario);
    m.tau_p_ps = Some(l.pulse.tau_p * PS);
    m.regime = Some(regime.to_string());
    m.grid_n = args.grid_n;
    m.warnings = l.scenario.warnings();
    m
}

pub fn phasematch(
    scenario: &Path,
    out: Option<&Path>,
    force: bool,
    sweep_lambda_p: Option<&[f64]>,
    sweep_poling: Option<&[f64]>,
) -> Result<(), CliError> {
    let l = load(scenario, None)?;
    let sweep = match (sweep_lambda_p, sweep_poling) {
        (Some(a), Some(b)) => {
            if out.is_none() {
                return Err(CliError::Input("the η-map sweep needs --out".into()));
            }
            Some((a, b))
        }
        (None, None) => None,
        _ => {
            return Err(CliError::Input(
                "give both --sweep-lambda-p-nm and --sweep-poling-nm for the η-map".into(),
            ))
        }
    };
    let rows = summary_rows(&l);
    println!("scenario          {}", scenario.display());
    for (k, v, unit) in &rows {
        println!("{k:<17} {v:<24} {unit}");
    }
    let Some(dir) = out else {
        return Ok(());
    };
    let mut od = OutputDir::create(dir, force)?;
    od.write_csv(
        "phasematch.csv",
        &["quantity", "value", "unit"],
        rows.iter().map(|(k, v, u)| vec![k.to_string(), v.clone(), u.to_string()]),
    )?;
    if let Some((lp, pl)) = sweep {
        let cells = qpm::eta_map(&l.scenario, lp, pl);
        let ok = cells.iter().filter(|c| c.result.is_ok()).count();
        od.record_grid("eta_map", lp.len(), pl.len(), 1);
        od.write_csv(
            "eta_map.csv",
            &[
                "lambda_p_nm",
                "Lambda_nm",
                "lambda_s_nm",
                "lambda_i_nm",
                "eta",
                "tau_gvm_ps",
                "tau_gvs_prime_ps",
                "status",
            ],
            cells.iter().map(|c| match &c.result {
                Ok(r) => vec![
                    num(c.lambda_p_nm),
                    num(c.poling_nm),
                    num(r.lambda_s_nm()),
                    num(r.lambda_i_nm()),
                    num(r.eta),
                    num(r.tau_gvm * PS),
                    num(r.tau_gvs_prime * PS),
                    "ok".into(),
                ],
                Err(e) => vec![
                    num(c.lambda_p_nm),
                    num(c.poling_nm),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.replace(['\n', ','], " "),
                ],
            }),
        )?;
        println!("eta map           {ok} of {} cells solved", cells.len());
    }
    let mut m = manifest("phasematch", scenario);
    m.tau_p_ps = Some(l.pulse.tau_p * PS);
    m.warnings = l.scenario.warnings();
    od.finish(m)?;
    Ok(())
}

fn summary_rows(l: &Loaded) -> Vec<(&'static str, String, &'static str)> {
    let s = &l.summary;
    vec![
        ("lambda_p", num(l.scenario.lambda_p * 1e9), "nm"),
        ("Lambda", num(l.scenario.poling_period * 1e9), "nm"),
        ("l_c", num(s.l_c * 1e3), "mm"),
        ("lambda_s", num(s.lambda_s_nm()), "nm"),
        ("lambda_i", num(s.lambda_i_nm()), "nm"),
        ("tau_gvm", num(s.tau_gvm * PS), "ps"),
        ("tau_gvs_prime", num(s.tau_gvs_prime * PS), "ps"),
        ("tau_gvs", num(s.tau_gvs * PS), "ps"),
        ("eta", num(s.eta), "1"),
        ("Omega_gvm", num(s.omega_gvm / THZ), "THz (angular; 1e12 rad/s)"),
        ("Omega_gvs_prime", num(s.omega_gvs_prime / THZ), "THz (angular; 1e12 rad/s)"),
        ("Omega_gvs", num(s.omega_gvs / THZ), "THz (angular; 1e12 rad/s)"),
        ("t_As", num(s.t_as * PS), "ps"),
        ("t_Ai", num(s.t_ai * PS), "ps"),
        ("t_Ap", num(s.t_ap * PS), "ps"),
        ("kprime_p", num(s.kprime_p * PS), "ps/m"),
        ("kprime_s", num(s.kprime_s * PS), "ps/m"),
        ("kprime_i", num(s.kprime_i * PS), "ps/m"),
        ("residual", num(s.residual), "rad"),
        ("tau_p", num(l.pulse.tau_p * PS), "ps"),
        ("regime", temporal::regime_report(s, &l.pulse).regime.to_string(), ""),
    ]
}

pub fn jsa(args: &GridArgs) -> Result<(), CliError> {
    check_grid_n(args.grid_n)?;
    let l = load(&args.scenario, args.tau_p_ps)?;
    let grid = spectral_grid(&l, args.grid_n)?;
    let jsa = build_jsa(&l, args, &grid)?;
    let (ns, ni) = grid.shape();
    let (ss, si) = (stride_for(ns, args.export_max), stride_for(ni, args.export_max));

    let mut od = OutputDir::create(&args.out, args.force)?;
    od.record_grid("jsa", ns, ni, ss.max(si));
    let rs = indices(ns, ss);
    let ci = indices(ni, si);
    let dec = jsa.decimated(ss, si)?;
    let mut text = Vec::new();
    dec.write_text(&mut text).map_err(|e| CliError::Numeric(e.to_string()))?;
    od.write_bytes("jsa.txt", &text)?;
    let ws = grid.s.values();
    let wi = grid.i.values();
    od.write_csv(
        "jsa_abs.csv",
        &["Omega_s_THz", "Omega_i_THz", "abs_psi"],
        rs.iter().flat_map(|&r| {
            let jsa = &jsa;
            let (ws, wi) = (&ws, &wi);
            ci.iter()
                .map(move |&c| vec![num(ws[r] / THZ), num(wi[c] / THZ), num(jsa.at(r, c).norm())])
        }),
    )?;
    println!(
        "jsa: {} regime, {ns}×{ni} grid, max |ψ| = {:e}, peak bound {}",
        jsa.regime,
        jsa.max_abs(),
        if jsa.peak_bound_holds(&l.pulse) { "holds" } else { "VIOLATED" }
    );
    od.finish(grid_manifest("jsa", args, &l, jsa.regime))?;
    Ok(())
}

fn write_coherence(od: &mut OutputDir, g: &CoherenceGrid, export_max: usize) -> Result<(), CliError> {
    let tag = match g.which {
        Beam::Signal => "signal",
        Beam::Idler => "idler",
    };
    let omega = g.axis.values();
    od.write_csv(
        &format!("spectrum_{tag}.csv"),
        &["Omega_rad_s", "intensity_arb"],
        omega.iter().zip(&g.spectrum).map(|(w, v)| vec![num(*w), num(*v)]),
    )?;
    let stride = stride_for(g.axis.n, export_max);
    let idx = indices(g.axis.n, stride);
    od.record_grid(&format!("g1_{tag}"), g.axis.n, g.axis.n, stride);
    od.write_csv(
        &format!("g1_{tag}_abs.csv"),
        &["Omega_THz", "Omega_prime_THz", "abs_G1"],
        idx.iter().flat_map(|&a| {
            let (omega, idx) = (&omega, &idx);
            idx.iter()
                .map(move |&b| vec![num(omega[a] / THZ), num(omega[b] / THZ), num(g.values[(a, b)].norm())])
        }),
    )
}

pub fn coherence(args: &GridArgs) -> Result<(), CliError> {
    check_grid_n(args.grid_n)?;
    let l = load(&args.scenario, args.tau_p_ps)?;
    let grid = spectral_grid(&l, args.grid_n)?;
    let jsa = build_jsa(&l, args, &grid)?;
    let gs = coherence::g1(&jsa, Beam::Signal)?;
    let gi = coherence::g1(&jsa, Beam::Idler)?;

    let mut od = OutputDir::create(&args.out, args.force)?;
    od.record_grid("jsa", grid.s.n, grid.i.n, 1);
    write_coherence(&mut od, &gs, args.export_max)?;
    write_coherence(&mut od, &gi, args.export_max)?;

    let opt = |x: Option<f64>, scale: f64| x.map(|v| num(v / scale)).unwrap_or_default();
    let mut rows = Vec::new();
    for g in [&gs, &gi] {
        let beam = g.which.to_string();
        let siegert = coherence::siegert_intensity_correlation(g);
        let shot: f64 = g.photon_number();
        rows.push(vec![beam.clone(), "photon_number".into(), num(g.photon_number()), "1".into()]);
        rows.push(vec![beam.clone(), "fwhm_spectrum".into(), opt(g.fwhm_spectrum, THZ), "THz".into()]);
        rows.push(vec![beam.clone(), "fwhm_coherence".into(), opt(g.fwhm_coherence, THZ), "THz".into()]);
        rows.push(vec![beam.clone(), "mode_estimate".into(), opt(g.mode_estimate(), 1.0), "1".into()]);
        rows.push(vec![beam.clone(), "hermiticity_defect".into(), num(g.hermiticity_defect()), "1".into()]);
        rows.push(vec![beam.clone(), "shot_noise_weight".into(), num(shot), "1".into()]);
        rows.push(vec![beam, "intensity_correlation_integral".into(), num(siegert.integrate()), "1".into()]);
    }
    od.write_csv("coherence_summary.csv", &["beam", "quantity", "value", "unit"], rows)?;
    println!(
        "coherence: {} regime, N_s = {:e}, N_i = {:e}, modes ≈ {} (signal) / {} (idler)",
        jsa.regime,
        gs.photon_number(),
        gi.photon_number(),
        opt(gs.mode_estimate(), 1.0),
        opt(gi.mode_estimate(), 1.0)
    );
    od.finish(grid_manifest("coherence", args, &l, jsa.regime))?;
    Ok(())
}

pub fn temporal(args: &GridArgs, method: MethodArg) -> Result<(), CliError> {
    check_grid_n(args.grid_n)?;
    let l = load(&args.scenario, args.tau_p_ps)?;
    let report = temporal::regime_report(&l.summary, &l.pulse);
    let (phi, regime, source_grid): (TemporalGrid, Regime, Option<(usize, usize)>) = match method {
        MethodArg::Fft => {
            let grid = temporal::fft_grid(&l.summary, &l.pulse, args.grid_n.unwrap_or(4096))?;
            let jsa = build_jsa(&l, args, &grid)?;
            (temporal::phi_fft(&jsa, &l.summary)?, jsa.regime, Some(grid.shape()))
        }
        MethodArg::Analytic => {
            let n = args.grid_n.unwrap_or(512);
            let (ts, ti) = temporal::default_time_axes(&l.summary, &l.pulse, n, n)?;
            (
                temporal::phi_analytic(&l.summary, &l.pulse, l.scenario.g, ts, ti)?,
                resolve_regime(args.regime, &l.summary, &l.pulse),
                None,
            )
        }
    };

    let mut od = OutputDir::create(&args.out, args.force)?;
    if let Some((ns, ni)) = source_grid {
        od.record_grid("jsa", ns, ni, 1);
    }
    let (ss, si) = (stride_for(phi.ts.n, args.export_max), stride_for(phi.ti.n, args.export_max));
    od.record_grid("phi", phi.ts.n, phi.ti.n, ss.max(si));
    let rs = indices(phi.ts.n, ss);
    let ci = indices(phi.ti.n, si);
    let (t_as, t_ai) = (phi.t_as, phi.t_ai);
    od.write_csv(
        "phi_abs.csv",
        &["t_bar_s_ps", "t_bar_i_ps", "t_s_ps", "t_i_ps", "abs_phi"],
        rs.iter().flat_map(|&r| {
            let (phi, ci) = (&phi, &ci);
            ci.iter().map(move |&c| {
                let (a, b) = (phi.ts.value(r), phi.ti.value(c));
                vec![
                    num(a * PS),
                    num(b * PS),
                    num((a + t_as) * PS),
                    num((b + t_ai) * PS),
                    num(phi.values[(r, c)].norm()),
                ]
            })
        }),
    )?;
    od.write_csv(
        "temporal_summary.csv",
        &["quantity", "value", "unit"],
        vec![
            vec!["t_As".into(), num(l.summary.t_as * PS), "ps".into()],
            vec!["t_Ai".into(), num(l.summary.t_ai * PS), "ps".into()],
            vec!["t_Ap".into(), num(l.summary.t_ap * PS), "ps".into()],
            vec!["tau_gvs".into(), num(l.summary.tau_gvs * PS), "ps".into()],
            vec!["eta".into(), num(l.summary.eta), "1".into()],
            vec!["constant_phase".into(), num(phi.constant_phase), "rad".into()],
            vec!["regime_class".into(), report.regime.to_string(), String::new()],
            vec!["ratio_tau_p_over_tau_gvs_prime".into(), num(report.ratio_gvs_prime), "1".into()],
            vec!["ratio_tau_p_over_tau_gvm".into(), num(report.ratio_gvm), "1".into()],
        ],
    )?;
    println!("temporal: {} ({})", report.regime, report.narrative);
    println!(
        "temporal: {}×{} samples, max |φ| = {:e}",
        phi.ts.n,
        phi.ti.n,
        phi.max_abs()
    );
    od.finish(grid_manifest("temporal", args, &l, regime))?;
    Ok(())
}

#[derive(Debug, Clone, clap::Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Shortest pump duration, ps (default 0.01·τ_gvm).
    #[arg(long)]
    pub tau_min_ps: Option<f64>,
    /// Longest pump duration, ps (default 30·τ′_gvs).
    #[arg(long)]
    pub tau_max_ps: Option<f64>,
    /// Number of logarithmically spaced durations.
    #[arg(long, default_value_t = 25)]
    pub points: usize,
    /// Also compute κ by singular-value decomposition (slow on large grids).
    #[arg(long)]
    pub svd: bool,
    #[arg(long, default_value = "spdc-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub force: bool,
}

/// Fraction of rows that must succeed for a zero exit status.
pub const SWEEP_SUCCESS_FRACTION: f64 = 0.8;

pub fn schmidt_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let l = load(&args.scenario, None)?;
    let s = &l.summary;
    let lo = args.tau_min_ps.map(|t| t * 1e-12).unwrap_or(0.01 * s.tau_gvm.abs());
    let hi = args.tau_max_ps.map(|t| t * 1e-12).unwrap_or(30.0 * s.tau_gvs_prime.abs());
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(CliError::Input(format!(
            "pump-duration range must satisfy 0 < min < max, got {} .. {} ps",
            lo * PS,
            hi * PS
        )));
    }
    if args.points < 2 {
        return Err(CliError::Input("--points must be at least 2".into()));
    }
    let taus = schmidt::log_space(lo, hi, args.points);
    let opts = SweepOptions {
        with_svd: args.svd,
        ..SweepOptions::default()
    };
    let mut od = OutputDir::create(&args.out, args.force)?;
    let rows = schmidt::kappa_sweep(&l.scenario, s, &taus, &opts);
    let summary = schmidt::summarize_sweep(&rows);

    let ok_or_empty = |r: &Result<f64, String>| r.as_ref().map(|v| num(*v)).unwrap_or_default();
    od.write_csv(
        "sweep.csv",
        &[
            "tau_p_ps",
            "dOmega_p_THz",
            "kappa_integral",
            "kappa_svd",
            "asym_cw",
            "asym_ultrashort",
        ],
        rows.iter().map(|r| {
            vec![
                num(r.tau_p * PS),
                num(r.delta_omega_p / THZ),
                ok_or_empty(&r.kappa_integral),
                r.kappa_svd.as_ref().map(ok_or_empty).unwrap_or_default(),
                num(r.asymptotes.cw),
                num(r.asymptotes.ultrashort),
            ]
        }),
    )?;
    for (r, row) in rows.iter().enumerate() {
        if let Err(e) = &row.kappa_integral {
            eprintln!("row {r} (τ_p = {:.4e} ps) failed: {e}", row.tau_p * PS);
        }
        od.record_grid(&format!("row_{r}"), row.grid.map_or(0, |g| g.0), row.grid.map_or(0, |g| g.1), 1);
    }

    // Agreement with the asymptotes at the two ends of the successful range.
    let ok_rows: Vec<_> = rows.iter().filter(|r| r.kappa_integral.is_ok()).collect();
    let pct = |k: f64, a: f64| 100.0 * (k - a).abs() / a;
    let asym = rows.first().map(|r| r.asymptotes).unwrap_or_else(|| schmidt::kappa_asymptotes(s, &l.pulse));
    let mut table: Vec<Vec<String>> = vec![
        vec!["rows".into(), summary.rows.to_string(), "1".into()],
        vec!["succeeded".into(), summary.succeeded.to_string(), "1".into()],
        vec!["local_minima".into(), summary.local_minima.to_string(), "1".into()],
        vec!["kappa_min".into(), summary.kappa_min.map(num).unwrap_or_default(), "1".into()],
        vec![
            "tau_p_at_min".into(),
            summary.min_index.map(|i| num(rows[i].tau_p * PS)).unwrap_or_default(),
            "ps".into(),
        ],
        vec![
            "dOmega_p_at_min".into(),
            summary.delta_omega_p_at_min.map(|v| num(v / THZ)).unwrap_or_default(),
            "THz".into(),
        ],
        vec!["kappa_min_gaussian_approx".into(), num(asym.kappa_min), "1".into()],
        vec!["dOmega_p_at_min_gaussian_approx".into(), num(asym.delta_omega_p_at_min / THZ), "THz".into()],
    ];
    if let (Some(first), Some(last)) = (ok_rows.first(), ok_rows.last()) {
        let (kf, kl) = (first.kappa_integral.clone().unwrap_or(f64::NAN), last.kappa_integral.clone().unwrap_or(f64::NAN));
        table.push(vec![
            "ultrashort_asymptote_deviation_at_shortest".into(),
            num(pct(kf, first.asymptotes.ultrashort)),
            "%".into(),
        ]);
        table.push(vec![
            "cw_asymptote_deviation_at_longest".into(),
            num(pct(kl, last.asymptotes.cw)),
            "%".into(),
        ]);
    }
    od.write_csv("sweep_summary.csv", &["quantity", "value", "unit"], table.clone())?;
    for row in &table {
        println!("{:<44} {} {}", row[0], row[1], row[2]);
    }
    let mut m = manifest("schmidt-sweep", &args.scenario);
    m.warnings = l.scenario.warnings();
    od.finish(m)?;
    if (summary.succeeded as f64) < SWEEP_SUCCESS_FRACTION * summary.rows as f64 {
        return Err(CliError::Numeric(format!(
            "only {} of {} sweep rows succeeded",
            summary.succeeded, summary.rows
        )));
    }
    Ok(())
}
