//! Seeded random generators for observables, states and channels, used
//! by the reproduction scenarios and the property suites. Everything is
//! driven by a caller-supplied RNG so runs are reproducible.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::Channel;
use crate::observable::Observable;
use crate::operator::{ComplexMatrix, HermitianOperator};

/// The deterministic RNG used throughout the crate's randomized suites.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller.
fn gauss(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

pub fn random_complex_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, Complex64::new(gauss(rng), gauss(rng)));
        }
    }
    m
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize, scale: f64) -> HermitianOperator {
    let g = random_complex_matrix(rng, dim, dim);
    HermitianOperator::symmetrize(&g.scale_re(scale))
}

/// Random full-rank density matrix `GG† / Tr[GG†]`.
pub fn random_state(rng: &mut impl Rng, dim: usize) -> HermitianOperator {
    let g = random_complex_matrix(rng, dim, dim);
    let gg = g.matmul(&g.adjoint());
    let trace = gg.trace().re;
    HermitianOperator::symmetrize(&gg.scale_re(1.0 / trace))
}

/// Random unitary: the eigenvector matrix of a random Hermitian.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    random_hermitian(rng, dim, 1.0).eig().eigenvectors
}

/// Random probability vector with entries at least `floor`.
pub fn random_probability_vector(rng: &mut impl Rng, n: usize, floor: f64) -> Vec<f64> {
    assert!(floor * n as f64 <= 1.0);
    loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum();
        if total < 1e-6 {
            continue;
        }
        let v: Vec<f64> = raw
            .iter()
            .map(|r| floor + (1.0 - floor * n as f64) * r / total)
            .collect();
        return v;
    }
}

/// Random `n`-outcome observable: Gaussian PSD seeds `P_x`, normalized by
/// `S^{-1/2} P_x S^{-1/2}` with `S = Σ P_x`.
pub fn random_observable(rng: &mut impl Rng, dim: usize, n_outcomes: usize) -> Observable {
    let seeds: Vec<ComplexMatrix> = (0..n_outcomes)
        .map(|_| {
            let g = random_complex_matrix(rng, dim, dim);
            g.matmul(&g.adjoint())
        })
        .collect();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for p in &seeds {
        total = &total + p;
    }
    let inv_root = HermitianOperator::symmetrize(&total)
        .eig()
        .reconstruct_with(|l| if l > 1e-12 { 1.0 / l.sqrt() } else { 0.0 });
    let effects = seeds
        .iter()
        .map(|p| HermitianOperator::symmetrize(&inv_root.matmul(p).matmul(&inv_root)))
        .collect();
    Observable::new(effects).expect("normalized seeds form a POVM")
}

/// Random channel from `n_kraus` Gaussian Kraus seeds, normalized to the
/// completeness relation.
pub fn random_channel(
    rng: &mut impl Rng,
    dim_in: usize,
    dim_out: usize,
    n_kraus: usize,
) -> Channel {
    let seeds: Vec<ComplexMatrix> = (0..n_kraus)
        .map(|_| random_complex_matrix(rng, dim_out, dim_in))
        .collect();
    let mut total = ComplexMatrix::zeros(dim_in, dim_in);
    for k in &seeds {
        total = &total + &k.adjoint().matmul(k);
    }
    let inv_root = HermitianOperator::symmetrize(&total)
        .eig()
        .reconstruct_with(|l| if l > 1e-12 { 1.0 / l.sqrt() } else { 0.0 });
    let kraus: Vec<ComplexMatrix> = seeds.iter().map(|k| k.matmul(&inv_root)).collect();
    Channel::from_kraus(&kraus, dim_in, dim_out).expect("normalized Kraus list is complete")
}

/// Random observable with all effects diagonal in `basis`: effect `x` is
/// `Σ_i w_i(x) |v_i><v_i|` where each per-level weight vector `w_i` is a
/// probability distribution over outcomes. With `min_contrast > 0` the
/// result is guaranteed non-trivial (two levels differ by at least that
/// much on some outcome).
pub fn random_diagonal_observable(
    rng: &mut impl Rng,
    basis: &ComplexMatrix,
    n_outcomes: usize,
    min_contrast: f64,
) -> Observable {
    let d = basis.rows();
    loop {
        let weights: Vec<Vec<f64>> = (0..d)
            .map(|_| random_probability_vector(rng, n_outcomes, 0.0))
            .collect();
        if min_contrast > 0.0 {
            let mut contrast = 0.0f64;
            for x in 0..n_outcomes {
                for i in 0..d {
                    for j in (i + 1)..d {
                        contrast = contrast.max((weights[i][x] - weights[j][x]).abs());
                    }
                }
            }
            if contrast < min_contrast {
                continue;
            }
        }
        let effects: Vec<HermitianOperator> = (0..n_outcomes)
            .map(|x| {
                let mut m = ComplexMatrix::zeros(d, d);
                for i in 0..d {
                    let v = basis.column(i);
                    let proj = ComplexMatrix::outer(&v, &v);
                    m = &m + &proj.scale_re(weights[i][x]);
                }
                HermitianOperator::symmetrize(&m)
            })
            .collect();
        return Observable::new(effects).expect("stochastic weights form a POVM");
    }
}

/// A commutative, mutually commuting qubit pair: both observables
/// diagonal in a shared random basis, both non-trivial.
pub fn random_commuting_qubit_pair(
    rng: &mut impl Rng,
    n_a: usize,
    n_b: usize,
) -> (Observable, Observable, ComplexMatrix) {
    let basis = random_unitary(rng, 2);
    let a = random_diagonal_observable(rng, &basis, n_a, 0.1);
    let b = random_diagonal_observable(rng, &basis, n_b, 0.1);
    (a, b, basis)
}

/// A non-mutually-commuting, non-trivial qubit pair: binary observables
/// along two Bloch directions with a guaranteed commutator. The cross
/// commutator of `(I + p a·σ)/2` effects has magnitude `p q |a × b| / 2`
/// in max-entry norm, so the returned pair stays safely noncommuting
/// under any smearing later applied by the caller down to that floor.
pub fn random_noncommuting_qubit_pair(rng: &mut impl Rng) -> (Observable, Observable) {
    loop {
        let a_dir = random_bloch_direction(rng);
        let b_dir = random_bloch_direction(rng);
        let cross = [
            a_dir[1] * b_dir[2] - a_dir[2] * b_dir[1],
            a_dir[2] * b_dir[0] - a_dir[0] * b_dir[2],
            a_dir[0] * b_dir[1] - a_dir[1] * b_dir[0],
        ];
        let cross_norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        if cross_norm < 0.2 {
            continue;
        }
        let a = Observable::qubit_binary(a_dir).expect("unit Bloch direction");
        let b = Observable::qubit_binary(b_dir).expect("unit Bloch direction");
        return (a, b);
    }
}

/// Uniform direction on the Bloch sphere.
pub fn random_bloch_direction(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Unbiased binary qubit observable with Bloch length in `[min_len, 1]`.
pub fn random_unbiased_binary(rng: &mut impl Rng, min_len: f64) -> Observable {
    let dir = random_bloch_direction(rng);
    let len = rng.gen_range(min_len..=1.0);
    Observable::qubit_binary([dir[0] * len, dir[1] * len, dir[2] * len])
        .expect("Bloch vector inside the ball")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::{mutually_commuting, validate_povm};

    #[test]
    fn generators_produce_valid_objects() {
        let mut rng = seeded_rng(7);
        for _ in 0..5 {
            let o = random_observable(&mut rng, 3, 4);
            assert!(validate_povm(&o, 1e-9).is_valid);

            let u = random_unitary(&mut rng, 3);
            let gram = u.adjoint().matmul(&u);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-10);

            let state = random_state(&mut rng, 2);
            assert!((state.trace() - 1.0).abs() < 1e-12);
            assert!(state.is_psd(1e-12));

            let ch = random_channel(&mut rng, 2, 3, 2);
            assert_eq!(ch.dim_out(), 3);
        }
    }

    #[test]
    fn commuting_pair_generator_commutes() {
        let mut rng = seeded_rng(11);
        for _ in 0..10 {
            let (a, b, _) = random_commuting_qubit_pair(&mut rng, 2, 3);
            assert!(a.is_commutative(1e-10));
            assert!(b.is_commutative(1e-10));
            assert!(mutually_commuting(&a, &b, 1e-10).unwrap());
            assert!(!a.is_trivial(1e-3));
            assert!(!b.is_trivial(1e-3));
        }
    }

    #[test]
    fn noncommuting_pair_generator_does_not_commute() {
        let mut rng = seeded_rng(13);
        for _ in 0..10 {
            let (a, b) = random_noncommuting_qubit_pair(&mut rng);
            assert!(!mutually_commuting(&a, &b, 1e-3).unwrap());
        }
    }

    #[test]
    fn rng_is_reproducible() {
        let a = random_observable(&mut seeded_rng(42), 2, 2);
        let b = random_observable(&mut seeded_rng(42), 2, 2);
        assert!(a.effect(0).matrix().max_abs_diff(b.effect(0).matrix()) == 0.0);
    }
}
