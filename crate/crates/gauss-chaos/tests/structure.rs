//! Structural properties of restricted diagrams.
//!
//! For a connected closed diagram on `m` rows, cutting it to its first
//! `r < m` rows leaves components that each still touch the removed
//! rows, i.e. keep at least one open vertex. With kernels scaled onto a
//! `V̄_s ≤ R^{s−1}` ladder, each component's contracted kernel obeys the
//! graded bound `V̄_s(F) ≤ R^{|A|+s−2}` where `|A|` counts the
//! component's rows. Both facts are exercised over full closed-diagram
//! enumerations on small row profiles.

use gauss_chaos::diagram::{enumerate_closed_diagrams, evaluate, Diagram};
use gauss_chaos::gen;
use gauss_chaos::partition::{norm_profile, NormConfig, MAX_ORDER};
use gauss_chaos::rng;
use gauss_chaos::tensor::CoefficientTensor;

const SEED: u64 = 0xD1A6;
const CELLS: [(usize, usize, usize); 6] = [
    // (rows m, order k, dim n); all cells enumerate in full. k = 1 only
    // admits connected closed diagrams at m = 2 (a pairing of singleton
    // rows never links three rows), so deeper cells use k >= 2.
    (2, 1, 3),
    (2, 3, 2),
    (3, 2, 2),
    (4, 2, 3),
    (4, 3, 2),
    (5, 2, 2),
];

fn connected_closed(m: usize, k: usize) -> Vec<Diagram> {
    let rows = vec![k; m];
    enumerate_closed_diagrams(&rows)
        .unwrap()
        .filter(Diagram::is_connected)
        .collect()
}

#[test]
fn restriction_components_keep_open_vertices() {
    for (m, k, _) in CELLS {
        let diagrams = connected_closed(m, k);
        assert!(!diagrams.is_empty(), "cell m={m} k={k} enumerated nothing");
        for d in &diagrams {
            for r in 1..m {
                let cut = d.restrict_to_first_rows(r).unwrap();
                for comp in cut.connected_components() {
                    assert!(
                        !comp.open_vertices().is_empty(),
                        "closed component in restriction r={r} of m={m} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn restriction_components_obey_graded_norm_ladder() {
    const R_LIST: [f64; 3] = [0.25, 0.5, 1.0];
    // Lower-bound certificates suffice for a <= check, so a light
    // restart budget keeps the sweep fast without weakening failures.
    let cfg = NormConfig {
        restarts: 4,
        seed: SEED,
        ..NormConfig::default()
    };
    for (m, k, n) in CELLS {
        let diagrams = connected_closed(m, k);
        let step = (diagrams.len() / 12).max(1);
        for i in 0..3u64 {
            let cells = (n as u64).pow(k as u32);
            let support = (2 * k as u64).min(cells) as usize;
            let f = gen::random_sparse(
                k,
                n,
                support,
                rng::mix(SEED, &[m as u64, k as u64, n as u64, i]),
            );
            let base = norm_profile(&f, &cfg).unwrap();
            // Scale factors putting f on the V̄_s <= R^{s-1} ladder; the
            // contracted kernels are degree-|A| homogeneous in f, so one
            // unscaled evaluation serves every R.
            let scale_for = |r: f64| {
                (1..=k)
                    .filter(|&s| base.v_s[s - 1] > 0.0)
                    .map(|s| r.powi(s as i32 - 1) / base.v_s[s - 1])
                    .fold(f64::INFINITY, f64::min)
            };
            for d in diagrams.iter().step_by(step) {
                for r in 1..m {
                    let cut = d.restrict_to_first_rows(r).unwrap();
                    for comp in cut.connected_components() {
                        let rows_in_comp = comp.num_rows();
                        let kernels: Vec<&CoefficientTensor> = vec![&f; rows_in_comp];
                        let pk = evaluate(&comp, &kernels).unwrap();
                        let order = pk.tensor.order();
                        assert!(order >= 1, "closed component slipped through");
                        if order > MAX_ORDER {
                            continue;
                        }
                        let profile = norm_profile(&pk.tensor, &cfg).unwrap();
                        for rr in R_LIST {
                            let c = scale_for(rr);
                            for s in 1..=order {
                                let lhs = c.powi(rows_in_comp as i32) * profile.v_s[s - 1];
                                let limit = rr.powi((rows_in_comp + s) as i32 - 2);
                                assert!(
                                    lhs <= limit * (1.0 + 1e-9),
                                    "m={m} k={k} n={n} i={i} |A|={rows_in_comp} s={s} R={rr}: \
                                     {lhs:.6e} > {limit:.6e}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn restriction_to_all_rows_is_identity() {
    for (m, k, _) in CELLS.iter().take(3) {
        for d in connected_closed(*m, *k).iter().take(20) {
            let full = d.restrict_to_first_rows(*m).unwrap();
            assert_eq!(full.edges(), d.edges());
            assert!(full.is_closed());
        }
    }
}

#[test]
fn single_row_restriction_recovers_kernel() {
    // With no second row, nothing is contracted: the one-row restriction
    // of any diagram evaluates to the bare kernel.
    let f = gen::random_sparse(2, 3, 5, rng::mix(SEED, &[99]));
    for d in connected_closed(3, 2).iter().take(10) {
        let cut = d.restrict_to_first_rows(1).unwrap();
        let comps = cut.connected_components();
        assert_eq!(comps.len(), 1);
        let pk = evaluate(&comps[0], &[&f]).unwrap();
        assert_eq!(pk.tensor.order(), 2);
        let mut diff = 0.0f64;
        for (idx, v) in pk.tensor.iter() {
            diff = diff.max((v - f.get(&idx)).abs());
        }
        for (idx, v) in f.iter() {
            diff = diff.max((v - pk.tensor.get(&idx)).abs());
        }
        assert!(diff < 1e-15, "one-row restriction altered the kernel");
    }
}
