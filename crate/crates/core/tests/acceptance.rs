//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line.
//!
//! Sweep criteria are evaluated on the 10-replication aggregates for five
//! base seeds; a criterion holds when at least four of the five seeds pass.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opinion_core::graph::{degree_exponent_estimate, generate_scale_free, GraphParams};
use opinion_core::reporting::{render_svg, smallest_inverting_wise_fraction, summarize, summary_json, timeseries_csv, Plot, SummaryRow};
use opinion_core::scenarios::{run_sweep, scenario_grid};
use opinion_core::{bcm_update_scalar, expert_update, media_update, peer_update, Message, OpinionPair, UpdateParams};

const BASE_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const REQUIRED_SEEDS: usize = 4;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);

struct ScenarioRuns {
    /// Summary rows per base seed.
    rows: Vec<Vec<SummaryRow>>,
    /// Slowest single-threaded sweep.
    slowest: Duration,
}

fn scenario(id: u8) -> &'static ScenarioRuns {
    static CACHE: [OnceLock<ScenarioRuns>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[usize::from(id - 1)].get_or_init(|| {
        let mut slowest = Duration::ZERO;
        let rows = BASE_SEEDS
            .iter()
            .map(|&seed| {
                let grid = scenario_grid(id, seed).unwrap();
                let start = Instant::now();
                let result = run_sweep(&grid, 1).unwrap();
                slowest = slowest.max(start.elapsed());
                summarize(&result)
            })
            .collect();
        ScenarioRuns { rows, slowest }
    })
}

fn row(rows: &[SummaryRow], tv: f64, wise: f64, tolerance: f64) -> &SummaryRow {
    rows.iter()
        .find(|r| (r.tv_fraction - tv).abs() < 1e-9 && (r.wise_fraction - wise).abs() < 1e-9 && (r.tolerance - tolerance).abs() < 1e-9)
        .unwrap_or_else(|| panic!("no cell tv={tv} wise={wise} t={tolerance}"))
}

/// Applies `check` per seed, prints the verdict and asserts the majority.
fn majority(name: &str, id: u8, check: impl Fn(&[SummaryRow]) -> Result<(), String>) {
    let runs = scenario(id);
    let mut passes = 0;
    let mut notes = Vec::new();
    for (seed, rows) in BASE_SEEDS.iter().zip(&runs.rows) {
        match check(rows) {
            Ok(()) => passes += 1,
            Err(why) => notes.push(format!("seed {seed}: {why}")),
        }
    }
    let ok = passes >= REQUIRED_SEEDS;
    println!(
        "[{}] {name}: {passes}/{} seeds{}",
        if ok { "PASS" } else { "FAIL" },
        BASE_SEEDS.len(),
        if notes.is_empty() { String::new() } else { format!(" ({})", notes.join("; ")) }
    );
    assert!(ok, "{name}: only {passes}/{} seeds passed: {notes:?}", BASE_SEEDS.len());
}

fn within(value: f64, target: f64, band: f64) -> bool {
    (value - target).abs() <= band
}

#[test]
fn c1_gossip_baseline() {
    majority("1 gossip baseline around 0.5", 1, |rows| {
        for r in rows {
            if !within(r.final_mean_welfare, 0.5, 0.10) || !within(r.final_mean_security, 0.5, 0.10) {
                return Err(format!(
                    "t={} ends at ({:.3}, {:.3})",
                    r.tolerance, r.final_mean_welfare, r.final_mean_security
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn c2_full_broadcast_convergence() {
    majority("2 full broadcast at t=0.8 reaches the media message", 2, |rows| {
        let r = row(rows, 1.0, 0.0, 0.8);
        if within(r.final_mean_security, 0.8, 0.10) && within(r.final_mean_welfare, 0.3, 0.10) {
            Ok(())
        } else {
            Err(format!("ends at ({:.3}, {:.3})", r.final_mean_welfare, r.final_mean_security))
        }
    });
}

#[test]
fn c3_mid_tolerance_nonlinearity() {
    majority("3 nonlinearity at t=0.5", 2, |rows| {
        let high = (row(rows, 0.8, 0.0, 0.5).final_mean_security - 0.8).abs();
        let low = (row(rows, 0.4, 0.0, 0.5).final_mean_security - 0.8).abs();
        if high >= low {
            return Err(format!("|sec-0.8| at tv=0.8 is {high:.3}, at tv=0.4 is {low:.3}"));
        }
        for k in 0..=4 {
            let tv = f64::from(k) / 10.0;
            let s = row(rows, tv, 0.0, 0.5).final_mean_security;
            if !within(s, 0.5, 0.15) {
                return Err(format!("security at tv={tv} is {s:.3}"));
            }
        }
        Ok(())
    });
}

fn inversion_point(rows: &[SummaryRow], tolerance: f64) -> Result<f64, String> {
    smallest_inverting_wise_fraction(rows, tolerance).ok_or_else(|| format!("no inversion at t={tolerance}"))
}

#[test]
fn c4_expert_inversion_low_tolerance() {
    majority("4 experts invert media at t=0.2 with <=30% WAs", 3, |rows| {
        let w = inversion_point(rows, 0.2)?;
        if w <= 0.3 + 1e-9 {
            Ok(())
        } else {
            Err(format!("first inversion at wise={w}"))
        }
    });
}

#[test]
fn c5_expert_inversion_mid_tolerance() {
    majority("5 experts invert media at t=0.5 with <=20% WAs", 3, |rows| {
        let mid = inversion_point(rows, 0.5)?;
        let low = inversion_point(rows, 0.2)?;
        if mid <= 0.2 + 1e-9 && mid <= low + 1e-9 {
            Ok(())
        } else {
            Err(format!("first inversion at wise={mid} (t=0.5), {low} (t=0.2)"))
        }
    });
}

#[test]
fn c6_white_zone_damping() {
    majority("6 white zone keeps security short of the media value", 4, |rows| {
        for t in [0.2, 0.5, 0.8] {
            let s = row(rows, 0.7, 0.0, t).final_mean_security;
            if s > 0.8 - 0.05 {
                return Err(format!("t={t}: security {s:.3}"));
            }
        }
        Ok(())
    });
}

#[test]
fn c7_graph_fidelity() {
    let mut in_band = 0;
    let mut notes = Vec::new();
    for seed in 0..10 {
        let params = GraphParams::new(10_000, 2, seed);
        let g = generate_scale_free(params).unwrap();
        assert_eq!(g.edge_count(), params.expected_edge_count());
        assert_eq!(g.edge_count(), 3 + (10_000 - 3) * 2);
        assert!(g.is_connected());
        let y = degree_exponent_estimate(&g, 5).unwrap();
        notes.push(format!("{y:.3}"));
        if (2.5..=3.5).contains(&y) {
            in_band += 1;
        }
    }
    let ok = in_band >= 9;
    println!(
        "[{}] 7 graph fidelity: exponent in [2.5, 3.5] for {in_band}/10 seeds ({}), edge count exact, connected",
        if ok { "PASS" } else { "FAIL" },
        notes.join(", ")
    );
    assert!(ok);
}

#[test]
fn c8_determinism_across_jobs() {
    let render = |jobs: usize| {
        let grid = scenario_grid(4, 99).unwrap();
        let result = run_sweep(&grid, jobs).unwrap();
        let csv = timeseries_csv(&result, Some("provenance"));
        let json = summary_json(&summarize(&result));
        let svg = render_svg(&Plot::from_time_series("cell 0", &result.cells[0].aggregated)).unwrap();
        (csv, json, svg)
    };
    let single = render(1);
    let ok = [2, 8].iter().all(|&j| render(j) == single);
    println!("[{}] 8 determinism: byte-identical CSV/JSON/SVG for jobs 1, 2, 8", if ok { "PASS" } else { "FAIL" });
    assert!(ok);
}

fn unit_pair(rng: &mut ChaCha8Rng) -> OpinionPair {
    OpinionPair {
        welfare: rng.random(),
        security: rng.random(),
    }
}

fn unit_message(rng: &mut ChaCha8Rng) -> Message {
    Message {
        welfare: rng.random(),
        security: rng.random(),
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> UpdateParams {
    // convergence in (0, 0.5]
    let convergence = 0.5 - rng.random::<f64>() * 0.5;
    UpdateParams::new(rng.random(), convergence).unwrap()
}

#[test]
fn c9_kernel_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let in_unit = |p: OpinionPair| (0.0..=1.0).contains(&p.welfare) && (0.0..=1.0).contains(&p.security);

    let mut bounded = true;
    for _ in 0..1_000_000 {
        let (a, b, msg, params) = (unit_pair(&mut rng), unit_pair(&mut rng), unit_message(&mut rng), random_params(&mut rng));
        bounded &= in_unit(peer_update(a, b, params));
        bounded &= in_unit(media_update(a, msg, params));
        bounded &= in_unit(expert_update(a, msg, params.convergence));
    }

    let mut contraction = true;
    for _ in 0..100_000 {
        let (x, y, params) = (rng.random::<f64>(), rng.random::<f64>(), random_params(&mut rng));
        let out = bcm_update_scalar(x, y, UpdateParams { tolerance: 1.0, ..params });
        let expected = (1.0 - params.convergence) * (x - y).abs();
        contraction &= ((out - y).abs() - expected).abs() <= 1e-12;
    }

    let mut equivalent = true;
    for _ in 0..100_000 {
        let (a, msg, params) = (unit_pair(&mut rng), unit_message(&mut rng), random_params(&mut rng));
        let open = UpdateParams { tolerance: 1.0, convergence: params.convergence };
        equivalent &= expert_update(a, msg, params.convergence) == media_update(a, msg, open);
    }

    let ok = bounded && contraction && equivalent;
    println!(
        "[{}] 9 kernel properties: bounded={bounded} contraction={contraction} expert==media(t=1)={equivalent}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn c10_sweep_time_budget() {
    let mut worst = Duration::ZERO;
    for id in 1..=4 {
        worst = worst.max(scenario(id).slowest);
    }
    let ok = worst < SWEEP_BUDGET;
    println!(
        "[{}] sweep budget: slowest single-threaded scenario sweep {:.2}s (< {}s)",
        if ok { "PASS" } else { "FAIL" },
        worst.as_secs_f64(),
        SWEEP_BUDGET.as_secs()
    );
    assert!(ok);
}
