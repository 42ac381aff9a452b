//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion.
//!
//! Runs with a plain `main` so every criterion is evaluated and reported even
//! when earlier ones fail; the process exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use ghz_discord::channels::{apply, apply_sequential, kraus_set, ChannelKind};
use ghz_discord::discord::{dephase, global_qd, gqd_hs, von_neumann_entropy, ClosedFormTable};
use ghz_discord::qmatrix::{hermitian_map, DensityMatrix};
use ghz_discord::report::{run_validation, Status, ValidationConfig, ValidationReport, ValidationRow};
use ghz_discord::states::{rindler_tripartite, werner_ghz};
use ghz_discord::sweep::{
    emit_csv, figure_preset, linspace, run_sweep, FamilySpec, Measure, SweepConfig, FIGURE_PRESETS,
};
use ghz_discord::{Execution, MeasurementProfile, OptimizerConfig};
use rand::Rng;

struct Outcome {
    id: &'static str,
    title: &'static str,
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new(id: &'static str, title: &'static str) -> Self {
        Outcome {
            id,
            title,
            pass: true,
            details: Vec::new(),
        }
    }

    /// Records a sub-check; any false check fails the criterion.
    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.pass &= ok;
        let mark = if ok { "ok  " } else { "FAIL" };
        self.details.push(format!("{mark} {}", detail.into()));
    }

    fn note(&mut self, detail: impl Into<String>) {
        self.details.push(format!("     {}", detail.into()));
    }

    fn print(&self, elapsed: Duration) {
        let tag = if self.pass { "[PASS]" } else { "[FAIL]" };
        println!(
            "{tag} {:<4} {} ({:.1}s)",
            self.id,
            self.title,
            elapsed.as_secs_f64()
        );
        for d in &self.details {
            println!("         {d}");
        }
    }
}

fn cfg() -> OptimizerConfig {
    OptimizerConfig::default()
}

fn evolve(kind: ChannelKind, p: f64, rho: &DensityMatrix) -> DensityMatrix {
    kraus_set(kind, p).unwrap().apply_all(rho).unwrap()
}

fn validation(tables: &[ClosedFormTable]) -> (ValidationReport, Duration) {
    let start = Instant::now();
    let rep = run_validation(&ValidationConfig {
        tables: tables.to_vec(),
        ..ValidationConfig::default()
    })
    .unwrap();
    (rep, start.elapsed())
}

fn describe(row: &ValidationRow) -> String {
    let param = match (row.mu, row.r) {
        (Some(mu), _) => format!("mu={mu}"),
        (_, Some(r)) => format!("r={r:.4}"),
        _ => String::new(),
    };
    format!(
        "{} {} p={:.2} {param}: closed {:.9} numerical {:.9} (σ_z {:.9})",
        row.table, row.channel, row.p, row.closed, row.numerical, row.sigma_z
    )
}

/// Per-channel agreement summary for the non-discrepant rows of a report.
fn table_agreement(out: &mut Outcome, rep: &ValidationReport, tol: f64) {
    let mut channels: Vec<ChannelKind> = rep.rows.iter().map(|r| r.channel).collect();
    channels.dedup();
    for ch in channels {
        let rows: Vec<&ValidationRow> = rep
            .rows
            .iter()
            .filter(|r| r.channel == ch && r.status != Status::DiscrepantByDesign)
            .collect();
        if rows.is_empty() {
            continue;
        }
        let worst = rows
            .iter()
            .max_by(|a, b| a.abs_diff.total_cmp(&b.abs_diff))
            .unwrap();
        let failing = rows.iter().filter(|r| r.abs_diff > tol).count();
        out.check(
            failing == 0,
            format!(
                "{} {}: {}/{} points within {tol:e}, max |diff| {:.3e}",
                worst.table,
                ch,
                rows.len() - failing,
                rows.len(),
                worst.abs_diff
            ),
        );
        if failing > 0 {
            out.note(format!("worst: {}", describe(worst)));
        }
    }
}

fn criterion_1(rep3: &ValidationReport, t3: Duration, rep6: &ValidationReport, t6: Duration) -> Outcome {
    let mut out = Outcome::new(
        "C1",
        "closed forms for 3- and 6-qubit Werner-GHZ match numerical GQD_HS (tol 1e-6)",
    );
    table_agreement(&mut out, rep3, 1e-6);
    table_agreement(&mut out, rep6, 1e-6);
    out.check(
        t3 < Duration::from_secs(60),
        format!("3-qubit runtime {:.1}s < 60s", t3.as_secs_f64()),
    );
    out.check(
        t6 < Duration::from_secs(600),
        format!("6-qubit runtime {:.1}s < 600s", t6.as_secs_f64()),
    );
    out
}

fn criterion_2(rep: &ValidationReport) -> Outcome {
    let mut out = Outcome::new(
        "C2",
        "closed forms for the accelerated-observer state match numerical GQD_HS (tol 1e-6)",
    );
    table_agreement(&mut out, rep, 1e-6);
    out
}

fn criterion_3(rep3: &ValidationReport, rep_r: &ValidationReport) -> Outcome {
    let mut out = Outcome::new(
        "C3",
        "depolarizing rows of the 3-qubit and accelerated tables reported as discrepant",
    );
    for rep in [rep3, rep_r] {
        let dep: Vec<&ValidationRow> = rep
            .rows
            .iter()
            .filter(|r| r.channel == ChannelKind::Depolarizing)
            .collect();
        let table = dep[0].table;
        out.check(
            dep.iter().all(|r| r.status == Status::DiscrepantByDesign),
            format!(
                "{table}: all {} depolarizing rows marked DISCREPANT-BY-DESIGN",
                dep.len()
            ),
        );
        let mismatched = dep.iter().filter(|r| r.abs_diff > 1e-6).count();
        out.check(
            mismatched > 0,
            format!("{table}: {mismatched} rows differ from the oracle by more than 1e-6"),
        );
        let at_one: Vec<&&ValidationRow> = dep.iter().filter(|r| r.p == 1.0).collect();
        let worst = at_one.iter().map(|r| r.numerical.abs()).fold(0.0, f64::max);
        out.check(
            worst <= 1e-10,
            format!("{table}: oracle at p=1 is {worst:.1e} (≤ 1e-10)"),
        );
    }
    if let Some(row) = rep3
        .rows
        .iter()
        .find(|r| r.channel == ChannelKind::Depolarizing && r.p == 1.0 && r.mu == Some(0.5))
    {
        out.check(
            (row.closed - 0.03125).abs() < 1e-15,
            format!(
                "3-qubit, mu=0.5, p=1: closed {} vs numerical {:.1e}",
                row.closed, row.numerical
            ),
        );
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new(
        "C4",
        "global QD ≤ 0.01 at mu=0.5 beyond the vanishing threshold (damping channels)",
    );
    let channels = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::PhaseDamping,
        ChannelKind::Depolarizing,
    ];
    for (n, grid, threshold) in [
        (3usize, linspace(0.0, 1.0, 101), 0.75),
        (6, linspace(0.0, 1.0, 21), 0.5),
    ] {
        let start = Instant::now();
        let rows = run_sweep(&SweepConfig {
            family: FamilySpec::WernerGhz { n_qubits: n, mu: 0.5 },
            channels: channels.to_vec(),
            p_grid: grid.clone(),
            measures: vec![Measure::Qd],
            targets: None,
            optimizer: cfg(),
            execution: Execution::best_available(),
        })
        .unwrap()
        .rows;
        let elapsed = start.elapsed();
        for ch in channels {
            let tail: Vec<_> = rows
                .iter()
                .filter(|r| r.channel == ch && r.p >= threshold - 1e-12)
                .collect();
            let worst = tail.iter().max_by(|a, b| a.value.total_cmp(&b.value)).unwrap();
            let above = tail.iter().filter(|r| r.value > 0.01).count();
            out.check(
                above == 0,
                format!(
                    "n={n} {ch}: max QD for p ≥ {threshold} is {:.6} at p={:.2} ({above}/{} points above 0.01)",
                    worst.value,
                    worst.p,
                    tail.len()
                ),
            );
        }
        if n == 6 {
            out.check(
                elapsed < Duration::from_secs(900),
                format!(
                    "6-qubit 21-point sweep took {:.1}s (< 900s)",
                    elapsed.as_secs_f64()
                ),
            );
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new(
        "C5",
        "flip channels symmetric about p = 0.5 (QD 2e-6, GQD_HS 1e-8)",
    );
    let rho = werner_ghz(3, 0.5).unwrap();
    for ch in [
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
    ] {
        let (mut dq, mut dh) = (0.0f64, 0.0f64);
        for p in [0.1, 0.25, 0.4] {
            let a = evolve(ch, p, &rho);
            let b = evolve(ch, 1.0 - p, &rho);
            dq = dq.max((global_qd(&a, &cfg()).unwrap().value - global_qd(&b, &cfg()).unwrap().value).abs());
            dh = dh.max((gqd_hs(&a, &cfg()).unwrap().value - gqd_hs(&b, &cfg()).unwrap().value).abs());
        }
        out.check(
            dq <= 2e-6 && dh <= 1e-8,
            format!("{ch}: max |ΔQD| {dq:.2e}, max |ΔGQD_HS| {dh:.2e}"),
        );
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new("C6", "phase flip kills global QD at p = 0.5 (0 ± 1e-6)");
    let v = global_qd(
        &evolve(ChannelKind::PhaseFlip, 0.5, &werner_ghz(3, 0.5).unwrap()),
        &cfg(),
    )
    .unwrap()
    .value;
    out.check(v.abs() <= 1e-6, format!("QD = {v:.3e}"));
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new(
        "C7",
        "pure 3-qubit GHZ has 1 bit of global QD with a σ_z minimizer",
    );
    let res = global_qd(&werner_ghz(3, 1.0).unwrap(), &cfg()).unwrap();
    out.check((res.value - 1.0).abs() <= 1e-4, format!("QD = {:.10}", res.value));
    out.check(
        res.minimizer.is_sigma_z_equivalent(1e-4),
        format!("minimizer angles {:?}", res.minimizer.angles()),
    );
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new(
        "C8",
        "amplitude damping at p = 0.5: QD and GQD_HS non-increasing in r, GQD_HS ∝ cos⁴ r",
    );
    let rs = linspace(0.0, PI / 4.0, 33);
    let (mut qd, mut hs) = (Vec::new(), Vec::new());
    for &r in &rs {
        let rho = evolve(
            ChannelKind::AmplitudeDamping,
            0.5,
            &rindler_tripartite(r).unwrap(),
        );
        qd.push(global_qd(&rho, &cfg()).unwrap().value);
        hs.push(gqd_hs(&rho, &cfg()).unwrap().value);
    }
    for (name, v) in [("QD", &qd), ("GQD_HS", &hs)] {
        let worst_rise = v
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        out.check(
            worst_rise <= 0.0,
            format!(
                "{name}: largest step {worst_rise:.2e} (from {:.6} to {:.6})",
                v[0], v[32]
            ),
        );
    }
    let ratio_err = rs
        .iter()
        .zip(&hs)
        .map(|(r, h)| (h / hs[0] - r.cos().powi(4)).abs())
        .fold(0.0, f64::max);
    out.check(
        ratio_err <= 1e-6,
        format!("max |GQD_HS(r)/GQD_HS(0) − cos⁴ r| = {ratio_err:.2e}"),
    );
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new(
        "C9",
        "channel sanity: completeness, trace, positivity, lifted vs sequential",
    );
    let mut r = common::rng(9);
    let mut inputs: Vec<DensityMatrix> = Vec::new();
    for n in [3usize, 4, 6] {
        inputs.push(werner_ghz(n, 0.5).unwrap());
        inputs.push(common::random_state(n, &mut r));
    }
    inputs.push(rindler_tripartite(0.5).unwrap());
    let (mut completeness, mut trace, mut min_eig, mut lift_diff) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    let mut count = 0;
    for kind in ChannelKind::ALL {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let ch = kraus_set(kind, p).unwrap();
            completeness = completeness.max(ch.completeness_deviation());
            for rho in &inputs {
                let n = rho.n_qubits();
                let targets: Vec<usize> = (0..n).collect();
                let seq = apply_sequential(&ch, rho, &targets).unwrap();
                trace = trace.max((seq.trace() - 1.0).abs());
                min_eig = min_eig.min(seq.min_eigenvalue().unwrap());
                if n <= 4 {
                    let lifted = apply(&ch, rho, &targets).unwrap();
                    lift_diff = lift_diff.max(lifted.matrix().max_abs_diff(seq.matrix()));
                }
                count += 1;
            }
        }
    }
    out.note(format!("{count} channel applications over n ∈ {{3, 4, 6}}"));
    out.check(
        completeness <= 1e-12,
        format!("max completeness deviation {completeness:.1e}"),
    );
    out.check(trace <= 1e-10, format!("max |tr − 1| {trace:.1e}"));
    out.check(min_eig >= -1e-10, format!("min eigenvalue {min_eig:.1e}"));
    out.check(
        lift_diff <= 1e-10,
        format!("max lifted vs sequential difference {lift_diff:.1e} (n ≤ 4)"),
    );
    out
}

fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let log =
        |m: &DensityMatrix| hermitian_map(m.matrix(), |x| if x > 0.0 { x.log2() } else { 0.0 }).unwrap();
    let (lr, ls) = (log(rho), log(sigma));
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (rho.get(i, j) * (lr[(j, i)] - ls[(j, i)])).re;
        }
    }
    acc
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new(
        "C10",
        "S(Φ(ρ)) − S(ρ) equals the relative entropy to the pinched state (tol 1e-8)",
    );
    let mut r = common::rng(10);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let rho = common::random_state(3, &mut r);
        let angles: Vec<f64> = (0..6).map(|_| r.random::<f64>() * 2.0 * PI).collect();
        let pinched = dephase(&rho, &MeasurementProfile::from_angles(&angles).unwrap()).unwrap();
        let lhs = von_neumann_entropy(&pinched).unwrap() - von_neumann_entropy(&rho).unwrap();
        worst = worst.max((lhs - relative_entropy(&rho, &pinched)).abs());
    }
    out.check(
        worst <= 1e-8,
        format!("50 random states, max deviation {worst:.2e}"),
    );
    out
}

type Curve = Vec<(f64, f64)>;

/// Reads `(x, value)` pairs back from an emitted CSV for one channel and
/// measure, with `x` taken from column `x_col` and rows filtered on
/// `fixed` (column, value).
fn read_curve(
    path: &Path,
    channel: &str,
    measure: &str,
    x_col: usize,
    fixed: Option<(usize, &str)>,
) -> Curve {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.records()
        .map(|r| r.unwrap())
        .filter(|r| &r[1] == channel && &r[5] == measure)
        .filter(|r| fixed.is_none_or(|(c, v)| &r[c] == v))
        .map(|r| (r[x_col].parse().unwrap(), r[6].parse().unwrap()))
        .collect()
}

const SHAPE_SLACK: f64 = 1e-9;

fn non_increasing(c: &[(f64, f64)]) -> bool {
    c.windows(2).all(|w| w[1].1 <= w[0].1 + SHAPE_SLACK)
}

/// Falls to the midpoint and recovers symmetrically afterwards.
fn dip_and_revival(c: &[(f64, f64)]) -> bool {
    let (left, right): (Curve, Curve) = c.iter().partition(|(p, _)| *p <= 0.5 + 1e-12);
    let right: Curve = std::iter::once(*left.last().unwrap()).chain(right).collect();
    non_increasing(&left)
        && right.windows(2).all(|w| w[1].1 >= w[0].1 - SHAPE_SLACK)
        && left.last().unwrap().1 < left[0].1
}

fn criterion_11() -> Outcome {
    let mut out = Outcome::new(
        "C11",
        "figure presets: damping curves decay, flip curves dip and revive, decay in r",
    );
    let dir = tempfile::tempdir().unwrap();
    for name in FIGURE_PRESETS {
        let config = figure_preset(name).unwrap();
        let path = dir.path().join(format!("{name}.csv"));
        let rows = run_sweep(&config).unwrap().rows;
        emit_csv(&rows, &path).unwrap();
        let mut bad = Vec::new();
        let mut curves = 0;
        match &config.family {
            FamilySpec::WernerGhz { .. } => {
                let m = config.measures[0].label();
                for ch in &config.channels {
                    let c = read_curve(&path, ch.label(), m, 2, None);
                    curves += 1;
                    let ok = if ch.is_flip() {
                        dip_and_revival(&c)
                    } else {
                        non_increasing(&c)
                    };
                    if !ok {
                        bad.push(ch.label().to_string());
                    }
                }
            }
            FamilySpec::Rindler { r_grid } if config.p_grid.len() > 1 => {
                let ch = config.channels[0];
                for &r in r_grid {
                    let key = ghz_discord::sweep::format_number(r);
                    let c = read_curve(&path, ch.label(), "GQD_HS", 2, Some((4, &key)));
                    curves += 1;
                    let ok = if ch.is_flip() {
                        dip_and_revival(&c)
                    } else {
                        non_increasing(&c)
                    };
                    if !ok {
                        bad.push(format!("{ch} r={r:.4}"));
                    }
                }
                for &p in &config.p_grid {
                    let key = ghz_discord::sweep::format_number(p);
                    let c = read_curve(&path, ch.label(), "GQD_HS", 4, Some((2, &key)));
                    curves += 1;
                    if !non_increasing(&c) {
                        bad.push(format!("{ch} p={p:.2} vs r"));
                    }
                }
            }
            FamilySpec::Rindler { .. } => {
                for ch in &config.channels {
                    for m in &config.measures {
                        let c = read_curve(&path, ch.label(), m.label(), 4, None);
                        curves += 1;
                        if !non_increasing(&c) {
                            bad.push(format!("{ch} {m} vs r"));
                        }
                    }
                }
            }
        }
        out.check(
            bad.is_empty(),
            format!(
                "{name}: {} rows, {}/{curves} curves with the expected shape {}",
                rows.len(),
                curves - bad.len(),
                if bad.is_empty() {
                    String::new()
                } else {
                    format!("(off: {})", bad.join(", "))
                }
            ),
        );
    }
    out
}

fn main() {
    // libtest-style flags (e.g. --nocapture, filters) are accepted and ignored,
    // except that listing must not run the suite
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    println!(
        "\nacceptance suite ({} execution)\n",
        if Execution::Parallel.is_parallel() {
            "parallel"
        } else {
            "sequential"
        }
    );
    let mut outcomes = Vec::new();
    let mut run = |f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        o.print(start.elapsed());
        outcomes.push(o.pass);
    };

    let (rep3, t3) = validation(&[ClosedFormTable::WernerGhz3]);
    let (rep6, t6) = validation(&[ClosedFormTable::WernerGhz6]);
    let (rep_r, _) = validation(&[ClosedFormTable::Rindler]);
    run(&mut || criterion_1(&rep3, t3, &rep6, t6));
    run(&mut || criterion_2(&rep_r));
    run(&mut || criterion_3(&rep3, &rep_r));
    run(&mut criterion_4);
    run(&mut criterion_5);
    run(&mut criterion_6);
    run(&mut criterion_7);
    run(&mut criterion_8);
    run(&mut criterion_9);
    run(&mut criterion_10);
    run(&mut criterion_11);

    let failed = outcomes.iter().filter(|p| !**p).count();
    println!(
        "\n{} criteria: {} passed, {failed} failed",
        outcomes.len(),
        outcomes.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
