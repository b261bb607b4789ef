//! Independent oracles for the Bregman prox solvers: brute-force grid
//! searches over the simplex and the Bloch ball, plus the KKT, feasibility,
//! and solver-diagnostic contracts on seeded random instances.

use barrier_omd::comparator::{grid_min_bloch2, grid_min_simplex2, grid_min_simplex3};
use barrier_omd::omd::MirrorMap;
use barrier_omd::quantum::{
    logdet_bregman, logdet_prox, random_density_gram, random_hermitian, trace_product,
    DensityMatrix, HermitianMatrix,
};
use barrier_omd::simplex::{
    entropy_prox, lbftrl_leader, logbarrier_prox, EntropyMap, LogBarrierMap, SimplexPoint,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_interior<R: Rng>(d: usize, rng: &mut R) -> SimplexPoint {
    let raw: Vec<f64> = (0..d).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    SimplexPoint::new(raw.into_iter().map(|v| v / s).collect()).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn logbarrier_objective(y: &SimplexPoint, x: &SimplexPoint, g: &[f64], eta: f64) -> f64 {
    eta * dot(g, y.coords()) + LogBarrierMap.bregman(y, x)
}

fn entropy_objective(y: &SimplexPoint, x: &SimplexPoint, g: &[f64], eta: f64) -> f64 {
    eta * dot(g, y.coords()) + EntropyMap.bregman(y, x)
}

#[test]
fn logbarrier_prox_matches_grid_search_in_dim_2() {
    // A fixed representative instance, then seeded random ones.
    let mut cases = vec![(vec![0.5, 0.5], vec![-2.0, -1.0], 0.1)];
    let mut r = rng(11);
    for _ in 0..20 {
        let x = random_interior(2, &mut r);
        let g = vec![r.random_range(-5.0..5.0), r.random_range(-5.0..5.0)];
        let eta = r.random_range(0.05..0.8);
        cases.push((x.coords().to_vec(), g, eta));
    }
    for (xc, g, eta) in cases {
        let x = SimplexPoint::new(xc).unwrap();
        let (y, _) = logbarrier_prox(&x, &g, eta).unwrap();
        let (grid_pt, grid_val) =
            grid_min_simplex2(1e-4, |p| logbarrier_objective(p, &x, &g, eta)).unwrap();
        for (yi, gi) in y.coords().iter().zip(grid_pt.coords()) {
            assert!(
                (yi - gi).abs() <= 1e-3,
                "solver {:?} vs grid {:?} (eta {eta})",
                y.coords(),
                grid_pt.coords()
            );
        }
        assert!(logbarrier_objective(&y, &x, &g, eta) <= grid_val + 1e-4);
    }
}

#[test]
fn entropy_prox_matches_grid_search_in_dim_3() {
    let mut r = rng(12);
    for _ in 0..8 {
        let x = random_interior(3, &mut r);
        let g: Vec<f64> = (0..3).map(|_| r.random_range(-3.0..3.0)).collect();
        let eta = r.random_range(0.1..0.6);
        let y = entropy_prox(&x, &g, eta).unwrap();
        let (grid_pt, grid_val) =
            grid_min_simplex3(1e-4, |p| entropy_objective(p, &x, &g, eta)).unwrap();
        for (yi, gi) in y.coords().iter().zip(grid_pt.coords()) {
            assert!((yi - gi).abs() <= 1e-3);
        }
        assert!(entropy_objective(&y, &x, &g, eta) <= grid_val + 1e-4);
    }
}

#[test]
fn logbarrier_prox_matches_grid_search_in_dim_3() {
    let mut r = rng(13);
    for _ in 0..8 {
        let x = random_interior(3, &mut r);
        let g: Vec<f64> = (0..3).map(|_| r.random_range(-4.0..4.0)).collect();
        let eta = r.random_range(0.1..0.6);
        let (y, _) = logbarrier_prox(&x, &g, eta).unwrap();
        let (grid_pt, grid_val) =
            grid_min_simplex3(1e-4, |p| logbarrier_objective(p, &x, &g, eta)).unwrap();
        for (yi, gi) in y.coords().iter().zip(grid_pt.coords()) {
            assert!((yi - gi).abs() <= 1e-3);
        }
        assert!(logbarrier_objective(&y, &x, &g, eta) <= grid_val + 1e-4);
    }
}

#[test]
fn logdet_prox_beats_the_bloch_grid_oracle() {
    let mut r = rng(14);
    for _ in 0..4 {
        let rho = random_density_gram(2, &mut r).unwrap().mix_with_identity(0.2).unwrap();
        let g = HermitianMatrix::new(random_hermitian(2, &mut r)).unwrap();
        let eta = r.random_range(0.1..0.9);
        let (next, _) = logdet_prox(&rho, &g, eta).unwrap();
        let objective = |p: &DensityMatrix| {
            eta * trace_product(g.matrix(), p.matrix()) + logdet_bregman(p, &rho)
        };
        let (_, grid_val) = grid_min_bloch2(1e-3, objective).unwrap();
        assert!(
            objective(&next) <= grid_val + 1e-4,
            "solver objective {} vs grid {}",
            objective(&next),
            grid_val
        );
    }
}

#[test]
fn logbarrier_prox_contracts_hold_on_many_random_instances() {
    let mut r = rng(15);
    for i in 0..500 {
        let d = [2, 3, 5, 8][i % 4];
        let x = random_interior(d, &mut r);
        // A tenth of the instances push the gradient scale to the contract
        // limit ||eta*g||_inf <= 1e3.
        let scale = if i % 10 == 0 { 1e3 } else { 10.0 };
        let g: Vec<f64> = (0..d).map(|_| r.random_range(-scale..scale)).collect();
        let eta = r.random_range(0.05..1.0);
        let (y, rep) = logbarrier_prox(&x, &g, eta).unwrap();

        let sum: f64 = y.coords().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(y.min_coord() > 0.0);
        assert!(rep.iterations <= 50, "iterations {} at scale {scale}", rep.iterations);
        assert!(rep.residual <= 1e-12);

        // Stationarity: eta*g + grad h(y) - grad h(x) must be the constant
        // vector -lambda.
        for ((&yi, &xi), &gi) in y.coords().iter().zip(x.coords()).zip(&g) {
            let dev = eta * gi - 1.0 / yi + 1.0 / xi;
            assert!((dev + rep.lambda).abs() <= 1e-8, "KKT deviation {}", dev + rep.lambda);
        }

        // The step never increases the prox objective relative to staying
        // at the center.
        let at_center = eta * dot(&g, x.coords());
        assert!(logbarrier_objective(&y, &x, &g, eta) <= at_center + 1e-10);
    }
}

#[test]
fn entropy_prox_contracts_hold_on_many_random_instances() {
    let mut r = rng(16);
    for i in 0..300 {
        let d = [2, 4, 6][i % 3];
        let x = random_interior(d, &mut r);
        let g: Vec<f64> = (0..d).map(|_| r.random_range(-25.0..25.0)).collect();
        let eta = r.random_range(0.05..1.0);
        let y = entropy_prox(&x, &g, eta).unwrap();

        let sum: f64 = y.coords().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(y.min_coord() > 0.0);

        // Stationarity up to the simplex multiplier: eta*g_i + ln y_i -
        // ln x_i is the same for every coordinate.
        let devs: Vec<f64> = y
            .coords()
            .iter()
            .zip(x.coords())
            .zip(&g)
            .map(|((&yi, &xi), &gi)| eta * gi + yi.ln() - xi.ln())
            .collect();
        let mean = devs.iter().sum::<f64>() / d as f64;
        for dev in devs {
            assert!((dev - mean).abs() <= 1e-8);
        }

        let at_center = eta * dot(&g, x.coords());
        assert!(entropy_objective(&y, &x, &g, eta) <= at_center + 1e-10);
    }
}

#[test]
fn lbftrl_leader_contracts_hold_on_many_random_instances() {
    let mut r = rng(17);
    for i in 0..300 {
        let d = [2, 3, 7][i % 3];
        let scale = if i % 10 == 0 { 4e3 } else { 100.0 };
        let cg: Vec<f64> = (0..d).map(|_| r.random_range(-scale..scale)).collect();
        let eta = r.random_range(0.01..0.25);
        let (y, rep) = lbftrl_leader(&cg, eta).unwrap();

        let sum: f64 = y.coords().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(y.min_coord() > 0.0);
        assert!(rep.iterations <= 50);
        assert!(rep.residual <= 1e-12);

        // Stationarity: 1/y_i = eta*cg_i + lambda.
        for (&yi, &ci) in y.coords().iter().zip(&cg) {
            assert!((1.0 / yi - eta * ci - rep.lambda).abs() <= 1e-8 * (1.0 + rep.lambda.abs()));
        }

        // The leader beats the uniform point on the regularized objective.
        let leader_obj =
            eta * dot(&cg, y.coords()) - y.coords().iter().map(|v| v.ln()).sum::<f64>();
        let u = SimplexPoint::uniform(d).unwrap();
        let uniform_obj =
            eta * dot(&cg, u.coords()) - u.coords().iter().map(|v| v.ln()).sum::<f64>();
        assert!(leader_obj <= uniform_obj + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn prox_outputs_stay_feasible(
        raw in prop::collection::vec(0.01f64..1.0, 2..=6),
        gseed in prop::collection::vec(-20.0f64..20.0, 6),
        eta in 0.05f64..0.9,
    ) {
        let d = raw.len();
        let s: f64 = raw.iter().sum();
        let x = SimplexPoint::new(raw.iter().map(|v| v / s).collect()).unwrap();
        let g = &gseed[..d];

        let (lb, _) = logbarrier_prox(&x, g, eta).unwrap();
        prop_assert!(lb.is_interior());
        prop_assert!((lb.coords().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(logbarrier_objective(&lb, &x, g, eta) <= eta * dot(g, x.coords()) + 1e-10);

        let en = entropy_prox(&x, g, eta).unwrap();
        prop_assert!(en.is_interior());
        prop_assert!((en.coords().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(entropy_objective(&en, &x, g, eta) <= eta * dot(g, x.coords()) + 1e-10);
    }
}
