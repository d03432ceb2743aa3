use std::time::Instant;

use lrvqe::circuit::{build_ansatz, AnsatzKind};
use lrvqe::entanglement::{entanglement_error, negativity_profile, PairStrategy};
use lrvqe::exact::{dense_matrix, ground_state};
use lrvqe::model::{build_hamiltonian, ModelParams};
use lrvqe::vqe::{minimize, OptimizerConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(8);
    let kind: AnsatzKind = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(AnsatzKind::NN);
    let alpha: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(0.5);
    let lambda: f64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(0.5);
    let max_iters: usize = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(100);
    let init_scale: f64 = args.get(6).map(|s| s.parse().unwrap()).unwrap_or(std::f64::consts::PI);
    let params = ModelParams::new(n, alpha, lambda).unwrap();
    let ham = build_hamiltonian(&params);
    let sol = ground_state(&dense_matrix(&ham).unwrap()).unwrap();
    let exact_profile = negativity_profile(&sol.state, PairStrategy::Average).unwrap();
    println!("n={n} kind={kind} alpha={alpha} lambda={lambda} cap={max_iters} init={init_scale:.3}");

    let mut streak = 0;
    for p in 1..=45usize {
        let spec = build_ansatz(kind, n, p).unwrap();
        let restarts: usize = std::env::var("BENCH_RESTARTS").ok().and_then(|s| s.parse().ok()).unwrap_or(5);
        let cfg = OptimizerConfig {
            seed: lrvqe::vqe::mix_seed(&[42, alpha.to_bits(), lambda.to_bits(), n as u64, kind as u64, p as u64]),
            grad_tol: std::env::var("BENCH_GTOL").ok().and_then(|s| s.parse().ok()).unwrap_or(1e-6),
            f_tol: std::env::var("BENCH_FTOL").ok().and_then(|s| s.parse().ok()).unwrap_or(1e-10),
            max_iters,
            init_scale,
            restarts,
            ..Default::default()
        };
        let t = Instant::now();
        let r = minimize(&spec, &ham, &cfg, &sol).unwrap();
        let profile = negativity_profile(&r.state, PairStrategy::Average).unwrap();
        let ent = entanglement_error(&profile, &exact_profile).unwrap();
        println!(
            "p={p:2}: {:6.2?}  E(p)={ent:.4e} fid={:.8} iters mean={:.0}",
            t.elapsed(),
            r.fidelity,
            r.mean_restart_iters(),
        );
        streak = if ent <= 1e-3 { streak + 1 } else { 0 };
        if streak >= 2 {
            println!("p* = {}", p - 1);
            break;
        }
    }
}
