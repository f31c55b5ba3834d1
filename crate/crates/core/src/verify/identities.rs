//! Monte Carlo check of the coordinate algebra on random configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{Check, VerificationReport};
use crate::coords::{
    from_jacobi, from_spherical, jacobi_matrix, pair_sum, potential_jacobi, potential_particle,
    to_jacobi, to_spherical, ParticleConfig,
};
use crate::exec::Execution;
use crate::model::ModelParams;

/// Relative agreement required of the potential and round trips.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
/// Entrywise bound on `JᵀJ - I`.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-14;

const BLOCK: usize = 1000;
const POSITION_RANGE: f64 = 4.0;

#[derive(Debug, Clone, Copy, Default)]
struct Worst {
    potential: f64,
    pair_sum: f64,
    round_trip: f64,
    spherical: f64,
    sampled: usize,
}

impl Worst {
    fn merge(self, o: Worst) -> Worst {
        Worst {
            potential: self.potential.max(o.potential),
            pair_sum: self.pair_sum.max(o.pair_sum),
            round_trip: self.round_trip.max(o.round_trip),
            spherical: self.spherical.max(o.spherical),
            sampled: self.sampled + o.sampled,
        }
    }
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn run_block(params: &ModelParams, seed: u64, block: usize, count: usize) -> Worst {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    let mut worst = Worst::default();
    for _ in 0..count {
        let x: [f64; 4] =
            std::array::from_fn(|_| rng.random_range(-POSITION_RANGE..POSITION_RANGE));
        let p = ParticleConfig { positions: x };
        let j = to_jacobi(&p);
        let (Ok(vp), Ok(vj)) = (potential_particle(&p, params), potential_jacobi(&j, params))
        else {
            // measure-zero singular plane
            continue;
        };
        let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        worst.potential = worst.potential.max(relative(vp, vj));
        worst.pair_sum = worst
            .pair_sum
            .max(relative(pair_sum(&p), 4.0 * j.radius().powi(2)));
        let back = from_jacobi(&j);
        worst.round_trip = worst
            .round_trip
            .max(max_abs_diff(&back.positions, &x) / scale);
        if let Ok(s) = to_spherical(&j) {
            let again = from_spherical(&s);
            worst.spherical = worst
                .spherical
                .max(max_abs_diff(&again.internal, &j.internal) / scale);
        }
        worst.sampled += 1;
    }
    worst
}

/// `samples` random configurations in `[-4, 4]⁴`, drawn from per-block
/// streams of one seed so the result does not depend on scheduling.
pub fn transform_identities(
    params: &ModelParams,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> VerificationReport {
    let blocks: Vec<(usize, usize)> = (0..samples.div_ceil(BLOCK))
        .map(|b| (b, BLOCK.min(samples - b * BLOCK)))
        .collect();
    let worst = exec
        .map(&blocks, |&(b, n)| run_block(params, seed, b, n))
        .into_iter()
        .fold(Worst::default(), Worst::merge);

    let m = jacobi_matrix();
    let mut ortho: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let dot: f64 = (0..4).map(|r| m[r][a] * m[r][b]).sum();
            let identity = if a == b { 1.0 } else { 0.0 };
            ortho = ortho.max((dot - identity).abs());
        }
    }

    let mut report = VerificationReport::new(*params);
    report.push(Check::within(
        "identity.orthonormality",
        ortho,
        0.0,
        ORTHONORMALITY_TOLERANCE,
        "max entry of |J^T J - I|",
    ));
    report.push(Check::within(
        "identity.potential",
        worst.potential,
        0.0,
        IDENTITY_TOLERANCE,
        "max relative |V(x) - V(J x)| over samples",
    ));
    report.push(Check::within(
        "identity.pair_sum",
        worst.pair_sum,
        0.0,
        IDENTITY_TOLERANCE,
        "max relative |sum (x_i - x_j)^2 - 4|X|^2|",
    ));
    report.push(Check::within(
        "identity.jacobi_round_trip",
        worst.round_trip,
        0.0,
        IDENTITY_TOLERANCE,
        "max |J^T J x - x| / max|x|",
    ));
    report.push(Check::within(
        "identity.spherical_round_trip",
        worst.spherical,
        0.0,
        IDENTITY_TOLERANCE,
        "max |S^-1 S X - X| / max|x|",
    ));
    report.push(Check::within(
        "identity.samples",
        worst.sampled as f64,
        samples as f64,
        0.0,
        "configurations evaluated",
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batch_passes() {
        let params = ModelParams::new(1.3, 2.0).unwrap();
        let report = transform_identities(&params, 2500, 7, Execution::default());
        assert!(
            report.passed(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn independent_of_execution_mode() {
        let params = ModelParams::new(1.0, 3.0).unwrap();
        let a = transform_identities(&params, 3000, 11, Execution::Sequential);
        let b = transform_identities(&params, 3000, 11, Execution::Parallel);
        assert_eq!(a, b);
    }
}
