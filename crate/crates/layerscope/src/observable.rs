//! POVMs and the observable-level predicates: validation, commutativity,
//! triviality, sharpness, uniform-noise smearing, joint observables and
//! their margins, and informational completeness.
//!
//! Outcomes are the 1-based consecutive integers `1..=n`; an effect at
//! vector index `k` belongs to outcome `k + 1`. Joint observables order
//! their pair outcomes `(x, y)` row-major in `y`.

use crate::error::{Error, Result};
use crate::operator::{commutator, operator_gram_rank, HermitianOperator};
use crate::DEFAULT_TOL;

/// A finite-outcome observable: PSD effects summing to the identity.
///
/// Zero effects are accepted; smearing maps them to multiples of the
/// identity, so nothing downstream needs to special-case them.
#[derive(Clone, Debug)]
pub struct Observable {
    dim: usize,
    effects: Vec<HermitianOperator>,
}

impl Observable {
    /// Validates the POVM invariants at the default tolerance `1e-9`.
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        Self::with_tolerance(effects, DEFAULT_TOL)
    }

    pub fn with_tolerance(effects: Vec<HermitianOperator>, tol: f64) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::EmptyObservable);
        }
        let dim = effects[0].dim();
        for (k, effect) in effects.iter().enumerate() {
            if effect.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "Observable::new",
                    expected: format!("dim {dim}"),
                    found: format!("dim {} at outcome {}", effect.dim(), k + 1),
                });
            }
        }
        let report = validate_effects(&effects, tol);
        if !report.is_valid {
            return Err(Error::InvalidPovm(report.failures.join("; ")));
        }
        Ok(Observable { dim, effects })
    }

    /// Skips validation; for intermediate values whose invariants are
    /// established by construction.
    pub(crate) fn new_unchecked(effects: Vec<HermitianOperator>) -> Self {
        let dim = effects[0].dim();
        Observable { dim, effects }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn effect(&self, outcome_index: usize) -> &HermitianOperator {
        &self.effects[outcome_index]
    }

    /// Sharp observable with one rank-one effect per basis vector.
    pub fn sharp_from_basis(basis: &crate::operator::ComplexMatrix) -> Result<Self> {
        use crate::operator::ComplexMatrix;
        let d = basis.rows();
        let mut effects = Vec::with_capacity(d);
        for k in 0..d {
            let v = basis.column(k);
            effects.push(HermitianOperator::symmetrize(&ComplexMatrix::outer(&v, &v)));
        }
        Observable::new(effects)
    }

    /// The two-effect observable `{(I + n·σ)/2, (I - n·σ)/2}`.
    pub fn qubit_binary(n: [f64; 3]) -> Result<Self> {
        use crate::operator::pauli;
        let plus = pauli::bloch_effect(n);
        let minus = pauli::bloch_effect([-n[0], -n[1], -n[2]]);
        Observable::new(vec![plus, minus])
    }

    /// Trivial observable `{w_k I}` with the given weights.
    pub fn trivial(dim: usize, weights: &[f64]) -> Result<Self> {
        let effects = weights
            .iter()
            .map(|&w| HermitianOperator::identity(dim).scale(w))
            .collect();
        Observable::new(effects)
    }

    /// Uniform-noise smearing `p A(x) + (1-p) I / n`.
    pub fn unsharp(&self, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "unsharp parameter must lie in (0, 1], got {p}"
            )));
        }
        let n = self.n_outcomes() as f64;
        let noise = HermitianOperator::identity(self.dim).scale((1.0 - p) / n);
        let effects = self
            .effects
            .iter()
            .map(|e| e.scale(p).add(&noise))
            .collect();
        Ok(Observable::new_unchecked(effects))
    }

    /// All pairwise effect commutators below `tol` (max-entry norm).
    pub fn is_commutative(&self, tol: f64) -> bool {
        for i in 0..self.effects.len() {
            for j in (i + 1)..self.effects.len() {
                let c = commutator(&self.effects[i], &self.effects[j]).unwrap();
                if c.max_abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Every effect within `tol` of `(Tr E / d) I`.
    pub fn is_trivial(&self, tol: f64) -> bool {
        let d = self.dim as f64;
        self.effects.iter().all(|e| {
            let target = HermitianOperator::identity(self.dim).scale(e.trace() / d);
            e.matrix().max_abs_diff(target.matrix()) <= tol
        })
    }

    /// Effects idempotent and mutually orthogonal within `tol`.
    pub fn is_sharp(&self, tol: f64) -> bool {
        for (i, e) in self.effects.iter().enumerate() {
            let e2 = e.matrix().matmul(e.matrix());
            if e2.max_abs_diff(e.matrix()) > tol {
                return false;
            }
            for f in &self.effects[i + 1..] {
                if e.matrix().matmul(f.matrix()).max_abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `(complete, rank)` where `rank` is the Gram rank of the effects and
    /// completeness means the effects span the full `d²`-dimensional
    /// operator space.
    pub fn is_informationally_complete(&self, tol: f64) -> (bool, usize) {
        let rank = operator_gram_rank(&self.effects, tol).expect("observable is non-empty");
        (rank == self.dim * self.dim, rank)
    }
}

/// All cross commutators `[A(x), B(y)]` below `tol`.
pub fn mutually_commuting(a: &Observable, b: &Observable, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "mutually_commuting",
            expected: format!("dim {}", a.dim()),
            found: format!("dim {}", b.dim()),
        });
    }
    for ea in a.effects() {
        for eb in b.effects() {
            if commutator(ea, eb)?.max_abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of POVM validation with per-effect diagnostics.
#[derive(Clone, Debug)]
pub struct PovmReport {
    pub is_valid: bool,
    /// Minimum eigenvalue of each effect.
    pub effect_min_eigenvalues: Vec<f64>,
    /// Max-entry distance of the effect sum from the identity.
    pub sum_residual: f64,
    pub failures: Vec<String>,
}

/// Checks PSD-ness of each effect and the identity sum at `tol`.
pub fn validate_effects(effects: &[HermitianOperator], tol: f64) -> PovmReport {
    let dim = effects[0].dim();
    let mut failures = Vec::new();
    let mut min_eigs = Vec::with_capacity(effects.len());
    for (k, effect) in effects.iter().enumerate() {
        let min_eig = effect.min_eigenvalue();
        min_eigs.push(min_eig);
        if min_eig < -tol {
            failures.push(format!(
                "effect {} is not PSD: minimum eigenvalue {:.3e}",
                k + 1,
                min_eig
            ));
        }
    }
    let mut sum = HermitianOperator::zero(dim);
    for effect in effects {
        sum = sum.add(effect);
    }
    let sum_residual = sum
        .matrix()
        .max_abs_diff(HermitianOperator::identity(dim).matrix());
    if sum_residual > tol {
        failures.push(format!(
            "sum of effects differs from identity by {sum_residual:.3e}"
        ));
    }
    PovmReport {
        is_valid: failures.is_empty(),
        effect_min_eigenvalues: min_eigs,
        sum_residual,
        failures,
    }
}

/// Validates an already-built observable at `tol`.
pub fn validate_povm(o: &Observable, tol: f64) -> PovmReport {
    validate_effects(o.effects(), tol)
}

/// An observable over a product outcome set `X × Y`, with the pair
/// outcome `(x, y)` stored at index `(x-1)·n_B + (y-1)`.
#[derive(Clone, Debug)]
pub struct JointObservable {
    base: Observable,
    x_size: usize,
    y_size: usize,
}

impl JointObservable {
    pub fn new(base: Observable, x_size: usize, y_size: usize) -> Result<Self> {
        if base.n_outcomes() != x_size * y_size {
            return Err(Error::OutcomeMismatch(format!(
                "joint observable needs {}x{} = {} effects, got {}",
                x_size,
                y_size,
                x_size * y_size,
                base.n_outcomes()
            )));
        }
        Ok(JointObservable {
            base,
            x_size,
            y_size,
        })
    }

    pub fn base(&self) -> &Observable {
        &self.base
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn effect(&self, x: usize, y: usize) -> &HermitianOperator {
        self.base.effect(x * self.y_size + y)
    }

    /// The margin observables `A(x) = Σ_y G(x,y)` and `B(y) = Σ_x G(x,y)`.
    pub fn margins(&self) -> (Observable, Observable) {
        let dim = self.base.dim();
        let mut a_effects = vec![HermitianOperator::zero(dim); self.x_size];
        let mut b_effects = vec![HermitianOperator::zero(dim); self.y_size];
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                let g = self.effect(x, y);
                a_effects[x] = a_effects[x].add(g);
                b_effects[y] = b_effects[y].add(g);
            }
        }
        (
            Observable::new_unchecked(a_effects),
            Observable::new_unchecked(b_effects),
        )
    }
}
