//! Seeded random instances.

use omnivocal_core::{Edge, JointSource, PinGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

/// Largest product alphabet a generated source may span.
pub const MAX_CELLS: u64 = 1 << 20;

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial))
}

/// Every tuple of the product alphabet in lexicographic order.
pub fn product_tuples(sizes: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    let mut next = if sizes.iter().all(|&s| s > 0) { Some(vec![0; sizes.len()]) } else { None };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for i in (0..sizes.len()).rev() {
            succ[i] += 1;
            if succ[i] < sizes[i] {
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    })
}

fn check_cells(sizes: &[u32]) -> Result<(), CliError> {
    let cells = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s as u64));
    match cells {
        Some(c) if c <= MAX_CELLS => Ok(()),
        _ => Err(CliError::Domain(format!("the product alphabet {sizes:?} exceeds {MAX_CELLS} cells"))),
    }
}

/// Independent uniform weights on every tuple, normalized.
pub fn uniform_source<R: Rng>(rng: &mut R, sizes: &[u32]) -> Result<JointSource, CliError> {
    check_cells(sizes)?;
    let weights: Vec<(Vec<u32>, f64)> = product_tuples(sizes).map(|x| (x, 1.0 - rng.gen::<f64>())).collect();
    let total: f64 = weights.iter().map(|w| w.1).sum();
    let atoms = weights.into_iter().map(|(x, w)| (x, w / total)).collect();
    Ok(JointSource::new(sizes.to_vec(), atoms)?)
}

/// A mixture of i.i.d. product laws: invariant under any permutation of the
/// terminals, hence isentropic.
pub fn exchangeable_mixture<R: Rng>(
    rng: &mut R,
    m: usize,
    alphabet: u32,
    components: usize,
) -> Result<JointSource, CliError> {
    let sizes = vec![alphabet; m];
    check_cells(&sizes)?;
    let normalized = |v: Vec<f64>| {
        let t: f64 = v.iter().sum();
        v.into_iter().map(|x| x / t).collect::<Vec<f64>>()
    };
    let weights = normalized((0..components).map(|_| 1.0 - rng.gen::<f64>()).collect());
    let laws: Vec<Vec<f64>> =
        (0..components).map(|_| normalized((0..alphabet).map(|_| 1.0 - rng.gen::<f64>()).collect())).collect();
    let atoms: Vec<(Vec<u32>, f64)> = product_tuples(&sizes)
        .map(|x| {
            let p = weights
                .iter()
                .zip(&laws)
                .map(|(w, q)| w * x.iter().map(|&s| q[s as usize]).product::<f64>())
                .sum();
            (x, p)
        })
        .collect();
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    let atoms = atoms.into_iter().map(|(x, p)| (x, p / total)).collect();
    Ok(JointSource::new(sizes, atoms)?)
}

/// Each pair gets an edge with probability `density`, multiplicity uniform in `1..=max_mult`.
pub fn random_graph<R: Rng>(rng: &mut R, m: usize, density: f64, max_mult: u64) -> Result<PinGraph, CliError> {
    let mut edges = Vec::new();
    for u in 1..=m {
        for v in u + 1..=m {
            if rng.gen_bool(density) {
                edges.push(Edge { u, v, mult: rng.gen_range(1..=max_mult) });
            }
        }
    }
    Ok(PinGraph::new(m, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use omnivocal_core::{isentropy_check, Isentropy};

    #[test]
    fn tuples_in_order() {
        let all: Vec<_> = product_tuples(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
    }

    #[test]
    fn generation_is_reproducible() {
        let a = uniform_source(&mut trial_rng(9, 3), &[2, 3, 2]).unwrap();
        let b = uniform_source(&mut trial_rng(9, 3), &[2, 3, 2]).unwrap();
        let c = uniform_source(&mut trial_rng(9, 4), &[2, 3, 2]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.atoms().len(), 12);
        assert!(a.atoms().iter().all(|(_, p)| *p > 0.0));
    }

    #[test]
    fn mixtures_are_isentropic() {
        let mut rng = trial_rng(1, 0);
        for m in 3..=5 {
            let s = exchangeable_mixture(&mut rng, m, 3, 3).unwrap().seal().unwrap();
            assert_eq!(isentropy_check(&s, 1e-9).unwrap().is_isentropic, Isentropy::Yes);
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(uniform_source(&mut trial_rng(0, 0), &[1024, 1024, 2]), Err(CliError::Domain(_))));
    }
}
