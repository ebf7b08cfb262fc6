use peskin_core::diagnostics::*;
use peskin_core::dynamics::*;
use peskin_core::lagrangian::*;
use std::f64::consts::PI;

fn main() {
    // criterion 7: single mode k=3 exact decay
    let cfg = RunConfig {
        initial: InitialData::Preset(Preset::SingleMode { mode: 3, mean: 1.0, amp: 0.05 }),
        capacity: 64, cfl: 0.25, t_end: 2.0, record_dt: 0.01,
        ..RunConfig::default()
    };
    let t = simulate(&cfg).unwrap();
    let mut acc = 0.0; let mut worst = 0.0f64; let mut prev: Option<&DiagRecord> = None;
    for r in &t.records {
        if let Some(p) = prev { acc += 0.5 * (r.t - p.t) * (p.fbar + r.fbar); }
        let c3 = r.wiener01 / 2.0;
        let expect = 0.05 * (-3.0 * acc).exp();
        worst = worst.max((c3 - expect).abs() / expect);
        prev = Some(r);
    }
    println!("single-mode decay rel err {worst:.4e}");

    // criterion 12: analyticity run t_end 10
    let cfg = RunConfig {
        initial: InitialData::Preset(Preset::TwoMode { mean: 0.8, amp: 0.01 }),
        capacity: 64, cfl: 0.5, t_end: 10.0, record_dt: 0.01,
        ..RunConfig::default()
    };
    let t = simulate(&cfg).unwrap();
    let rep = check_analyticity(&t);
    println!("analyticity: {} worst {:.4e} note '{}'", rep.status.as_str(), rep.worst, rep.note);

    // criterion 13: decay rate two_mode(1,0.6) to t=20
    let t0 = std::time::Instant::now();
    let cfg = RunConfig {
        initial: InitialData::Preset(Preset::TwoMode { mean: 1.0, amp: 0.3 }),
        capacity: 64, cfl: 0.5, t_end: 20.0, record_dt: 0.01,
        ..RunConfig::default()
    };
    let t = simulate(&cfg).unwrap();
    for rep in check_decay_to_equilibrium(&t) {
        println!("two_mode {}: {} worst {:.4e} note '{}'", rep.name, rep.status.as_str(), rep.worst, rep.note);
    }
    println!("  t=20 run took {:?}", t0.elapsed());
    let cfg = RunConfig {
        initial: InitialData::Preset(Preset::Random { band_limit: 16, amp: 0.3, seed: 9 }),
        capacity: 64, cfl: 0.5, t_end: 20.0, record_dt: 0.01,
        ..RunConfig::default()
    };
    let t = simulate(&cfg).unwrap();
    for rep in check_decay_to_equilibrium(&t) {
        println!("random {}: {} worst {:.4e} note '{}'", rep.name, rep.status.as_str(), rep.worst, rep.note);
    }

    // criterion 14: W1 continuity window
    let cfg = RunConfig {
        initial: InitialData::Preset(Preset::TwoMode { mean: 1.0, amp: 0.3 }),
        capacity: 64, cfl: 0.25, t_end: 0.01, record_dt: 1e-4,
        ..RunConfig::default()
    };
    let t = simulate(&cfg).unwrap();
    let rep = check_w1_continuity(&t);
    println!("w1 continuity: {} worst {:.4e} note '{}'", rep.status.as_str(), rep.worst, rep.note);

    // criterion 9: two_mode(1,0.9) slope; note 1/||f0|| = 1/(2pi)
    let cfg = RunConfig {
        initial: InitialData::Preset(Preset::TwoMode { mean: 1.0, amp: 0.45 }),
        capacity: 64, cfl: 0.25, t_end: 0.2, record_dt: 1e-3,
        ..RunConfig::default()
    };
    let t = simulate(&cfg).unwrap();
    for rep in check_explicit_bounds(&t, &Constants::default()) {
        println!("bounds(1,0.9) {}: {} worst {:.4e} note '{}'", rep.name, rep.status.as_str(), rep.worst, rep.note);
    }

    // criterion 15: lagrangian suite on two_mode(1,0.3) to t=1
    let t0 = std::time::Instant::now();
    let n_snap = 1000;
    let snaps: Vec<f64> = (0..=n_snap).map(|i| i as f64 / n_snap as f64).collect();
    let cfg = RunConfig {
        initial: InitialData::Preset(Preset::TwoMode { mean: 1.0, amp: 0.3 }),
        capacity: 64, cfl: 0.25, t_end: 1.0, record_dt: 0.01,
        snapshot_times: snaps,
        ..RunConfig::default()
    };
    let traj = simulate(&cfg).unwrap();
    println!("lagrangian base run took {:?}", t0.elapsed());
    let f0 = &traj.snapshots[0].1;
    for n in [256usize, 512, 1024, 2048] {
        let labels = labels_for_field(f0, n).unwrap();
        let flow = advect_flow(&traj, labels.positions()).unwrap();
        let strings = reconstruct_string(&flow, &labels).unwrap();
        let last = vec![strings.last().unwrap().clone()];
        let rep = check_stretch_consistency(&last, &traj, 1e-3);
        println!("stretch n={n}: worst {:.6e}", rep.worst);
        if n == 2048 {
            let rep = check_pushforward(&flow, &traj, 1e-3);
            println!("pushforward n={n}: worst {:.6e} ({})", rep.worst, rep.note);
            // H1 monotone + order preservation
            let h1: Vec<f64> = strings.iter().step_by(100).map(|(_, s)| s.h1_norm()).collect();
            println!("H1 over time: {:?}", h1.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>());
            let (lam, bound) = well_stretched_constant(&traj, 1.0).unwrap();
            println!("lambda(1) = {lam:.4}, coth bound {bound:.4}");
        }
    }
    println!("lagrangian total {:?}", t0.elapsed());
}
