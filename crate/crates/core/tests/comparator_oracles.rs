//! Brute-force oracles for the offline comparator solvers: fine grid
//! searches over the simplex and the Bloch ball confirm the certified
//! objectives, and the conditional-gradient duality bound is checked
//! directly.

use barrier_omd::comparator::{
    best_crp, best_fixed_state, grid_min_bloch2, grid_min_simplex2, grid_min_simplex3,
};
use barrier_omd::ops::{ops_loss, PriceRelatives};
use barrier_omd::quantum::{quantum_loss, random_gaussian_matrix, DensityMatrix, Observable};
use barrier_omd::simplex::SimplexPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_market<R: Rng>(d: usize, t: usize, rng: &mut R) -> Vec<PriceRelatives> {
    (0..t)
        .map(|_| {
            PriceRelatives::new((0..d).map(|_| rng.random_range(0.05..=1.0)).collect()).unwrap()
        })
        .collect()
}

fn market_loss(days: &[PriceRelatives], x: &SimplexPoint) -> f64 {
    days.iter().map(|a| ops_loss(a, x).map_or(f64::INFINITY, |v| v)).sum()
}

#[test]
fn crp_solver_matches_a_fine_grid_on_two_asset_markets() {
    let mut r = rng(41);
    for _ in 0..10 {
        let days = random_market(2, 50, &mut r);
        let res = best_crp(&days, 1e-8).unwrap();
        let (_, grid_val) = grid_min_simplex2(1e-5, |x| market_loss(&days, x)).unwrap();
        assert!(
            (res.objective - grid_val).abs() <= 1e-6,
            "solver {} vs grid {}",
            res.objective,
            grid_val
        );
        // Duality: objective minus certified gap lower-bounds every feasible
        // value the grid can produce.
        assert!(res.objective - res.gap <= grid_val + 1e-9);
    }
}

#[test]
fn crp_solver_matches_the_grid_on_three_asset_markets() {
    let mut r = rng(42);
    for _ in 0..5 {
        let days = random_market(3, 30, &mut r);
        let res = best_crp(&days, 1e-8).unwrap();
        let (_, grid_val) = grid_min_simplex3(1e-4, |x| market_loss(&days, x)).unwrap();
        assert!((res.objective - grid_val).abs() <= 1e-5);
        assert!(res.objective - res.gap <= grid_val + 1e-9);
    }
}

#[test]
fn fixed_state_solver_matches_the_bloch_grid() {
    let mut r = rng(43);
    for _ in 0..6 {
        let rounds: Vec<Observable> = (0..12)
            .map(|_| {
                let g = random_gaussian_matrix(2, &mut r);
                Observable::new(&g * g.adjoint()).unwrap()
            })
            .collect();
        let res = best_fixed_state(&rounds, 1e-4).unwrap();
        let stream_loss = |rho: &DensityMatrix| {
            rounds.iter().map(|a| quantum_loss(rho, a).map_or(f64::INFINITY, |v| v)).sum::<f64>()
        };
        let (_, grid_val) = grid_min_bloch2(1e-3, stream_loss).unwrap();
        // The certified solution can beat the grid only within its gap, and
        // the grid can beat the solver only by its own resolution error.
        assert!(res.objective <= grid_val + 1e-4);
        assert!(grid_val <= res.objective + 0.05);
        assert!(res.objective - res.gap <= grid_val + 1e-9);
    }
}
