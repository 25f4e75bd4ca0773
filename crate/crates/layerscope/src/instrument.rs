//! Quantum instruments: outcome-indexed families of completely positive
//! maps whose sum is a channel. Covers the Lüders construction, the
//! "implements an observable" contract, nondisturbance of a second
//! observable, and the ancilla-witness characterization of
//! nondisturbance.

use crate::channel::{choi_dual, kraus_to_choi, Channel};
use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::operator::{ComplexMatrix, HermitianOperator};
use crate::DEFAULT_TOL;

/// An instrument on a `dim`-dimensional system. Each outcome map is a CP
/// map `S(H) → S(H)` stored as its Choi matrix; the outcome maps sum to a
/// trace-preserving total map.
#[derive(Clone, Debug)]
pub struct Instrument {
    dim: usize,
    outcome_maps: Vec<HermitianOperator>,
}

impl Instrument {
    /// Validates PSD-ness of every outcome Choi (within `1e-9`) and trace
    /// preservation of the total map (within `1e-9`).
    pub fn from_chois(dim: usize, outcome_maps: Vec<HermitianOperator>) -> Result<Self> {
        if outcome_maps.is_empty() {
            return Err(Error::InvalidParameter("instrument needs outcomes".into()));
        }
        for (k, choi) in outcome_maps.iter().enumerate() {
            if choi.dim() != dim * dim {
                return Err(Error::DimensionMismatch {
                    context: "Instrument::from_chois",
                    expected: format!("Choi dim {}", dim * dim),
                    found: format!("Choi dim {} at outcome {}", choi.dim(), k + 1),
                });
            }
            let min_eig = choi.min_eigenvalue();
            if min_eig < -DEFAULT_TOL {
                return Err(Error::NotPsd {
                    min_eigenvalue: min_eig,
                });
            }
        }
        let inst = Instrument { dim, outcome_maps };
        let total = inst.total_choi();
        let marginal = total
            .matrix()
            .partial_trace(dim, dim, crate::operator::Factor::A)?;
        let residual = marginal.max_abs_diff(&ComplexMatrix::identity(dim));
        if residual > DEFAULT_TOL {
            return Err(Error::InstrumentNotTracePreserving { residual });
        }
        Ok(inst)
    }

    /// The Lüders instrument of an observable,
    /// `I_x(ρ) = √A(x) ρ √A(x)`; its total map is a channel and the
    /// instrument implements the observable by construction.
    pub fn luders(a: &Observable) -> Result<Self> {
        let dim = a.dim();
        let mut outcome_maps = Vec::with_capacity(a.n_outcomes());
        for effect in a.effects() {
            let root = effect.sqrt_psd()?;
            let choi = kraus_to_choi(std::slice::from_ref(root.matrix()), dim, dim);
            outcome_maps.push(HermitianOperator::symmetrize(&choi));
        }
        Instrument::from_chois(dim, outcome_maps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcome_maps.len()
    }

    pub fn outcome_choi(&self, k: usize) -> &HermitianOperator {
        &self.outcome_maps[k]
    }

    pub fn outcome_maps(&self) -> &[HermitianOperator] {
        &self.outcome_maps
    }

    fn total_choi(&self) -> HermitianOperator {
        let mut total = HermitianOperator::zero(self.dim * self.dim);
        for choi in &self.outcome_maps {
            total = total.add(choi);
        }
        total
    }

    /// The total map `Σ_x I_x` as a channel.
    pub fn total_channel(&self) -> Result<Channel> {
        Channel::from_choi(self.total_choi(), self.dim, self.dim)
    }

    /// Worst residual of the implementation contract: the dual of each
    /// outcome map must send the identity to the matching effect, which
    /// is the operator form of `Tr[ρ A(x)] = Tr[I_x(ρ)]` for all states.
    pub fn implement_residual(&self, a: &Observable) -> Result<f64> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "Instrument::implement_residual",
                expected: format!("dim {}", self.dim),
                found: format!("dim {}", a.dim()),
            });
        }
        if a.n_outcomes() != self.n_outcomes() {
            return Err(Error::OutcomeMismatch(format!(
                "instrument has {} outcomes, observable has {}",
                self.n_outcomes(),
                a.n_outcomes()
            )));
        }
        let identity = ComplexMatrix::identity(self.dim);
        let mut worst = 0.0f64;
        for (choi, effect) in self.outcome_maps.iter().zip(a.effects()) {
            let image = choi_dual(choi.matrix(), self.dim, self.dim, &identity);
            worst = worst.max(image.max_abs_diff(effect.matrix()));
        }
        Ok(worst)
    }

    pub fn implements(&self, a: &Observable, tol: f64) -> Result<bool> {
        Ok(self.implement_residual(a)? <= tol)
    }

    /// Worst residual of `(I^C)*(B(y)) = B(y)` over the effects of `b`.
    pub fn nondisturbance_residual(&self, b: &Observable) -> Result<f64> {
        if b.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "Instrument::nondisturbance_residual",
                expected: format!("dim {}", self.dim),
                found: format!("dim {}", b.dim()),
            });
        }
        let total = self.total_choi();
        let mut worst = 0.0f64;
        for effect in b.effects() {
            let image = choi_dual(total.matrix(), self.dim, self.dim, effect.matrix());
            worst = worst.max(image.max_abs_diff(effect.matrix()));
        }
        Ok(worst)
    }

    /// `true` iff measuring with this instrument leaves the statistics of
    /// `b` intact, within `tol`.
    pub fn nondisturbs(&self, b: &Observable, tol: f64) -> Result<bool> {
        Ok(self.nondisturbance_residual(b)? <= tol)
    }

    /// Merges outcome maps into groups. The total map is unchanged, so
    /// nondisturbance survives any coarse-graining.
    pub fn coarse_grain(&self, groups: &[Vec<usize>]) -> Result<Instrument> {
        let mut seen = vec![false; self.n_outcomes()];
        let mut outcome_maps = Vec::with_capacity(groups.len());
        for group in groups {
            let mut merged = HermitianOperator::zero(self.dim * self.dim);
            for &k in group {
                if k >= self.n_outcomes() || seen[k] {
                    return Err(Error::OutcomeMismatch(format!(
                        "coarse-grain group index {k} out of range or repeated"
                    )));
                }
                seen[k] = true;
                merged = merged.add(&self.outcome_maps[k]);
            }
            outcome_maps.push(merged);
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::OutcomeMismatch(
                "coarse-grain groups must cover every outcome".into(),
            ));
        }
        Instrument::from_chois(self.dim, outcome_maps)
    }

    /// The pointer dilation `Λ(ρ) = Σ_x |x><x| ⊗ I_x(ρ)` into
    /// `S(K ⊗ H)` with `dim K` = number of outcomes, together with the
    /// sharp pointer observable on `K`. If the instrument implements `A`
    /// and nondisturbs `B`, the returned pair is an ancilla witness for
    /// measuring `A` without disturbing `B`.
    pub fn pointer_dilation(&self) -> Result<(Channel, Observable)> {
        let d = self.dim;
        let n = self.n_outcomes();
        let d_out = n * d;
        let mut choi = ComplexMatrix::zeros(d * d_out, d * d_out);
        for (x, outcome) in self.outcome_maps.iter().enumerate() {
            let jx = outcome.matrix();
            for i in 0..d {
                for j in 0..d {
                    for m in 0..d {
                        for nn in 0..d {
                            choi.set(
                                i * d_out + (x * d + m),
                                j * d_out + (x * d + nn),
                                jx.at(i * d + m, j * d + nn),
                            );
                        }
                    }
                }
            }
        }
        let channel = Channel::from_choi(HermitianOperator::symmetrize(&choi), d, d_out)?;
        let pointer = Observable::sharp_from_basis(&ComplexMatrix::identity(n))?;
        Ok((channel, pointer))
    }
}

/// Sufficient test for nondisturbance: measure `a` with its Lüders
/// instrument and check that `b`'s statistics survive. A `true` answer
/// certifies the pair nondisturbing in this order; `false` is
/// inconclusive in general, because some other instrument might work.
pub fn nondisturbance_by_luders(a: &Observable, b: &Observable, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "nondisturbance_by_luders",
            expected: format!("dim {}", a.dim()),
            found: format!("dim {}", b.dim()),
        });
    }
    Instrument::luders(a)?.nondisturbs(b, tol)
}

/// Worst dual residual of the ancilla-witness conditions for measuring
/// `a` without disturbing `b`:
///
/// ```text
/// Λ*(A'(x) ⊗ I) = A(x)   and   Λ*(I ⊗ B(y)) = B(y)
/// ```
///
/// where `l : S(H) → S(K ⊗ H)` and `a_prime` lives on the ancilla `K`
/// (any dimension).
pub fn ancilla_witness_residual(
    l: &Channel,
    a: &Observable,
    a_prime: &Observable,
    b: &Observable,
) -> Result<f64> {
    let d = a.dim();
    let d_anc = a_prime.dim();
    if b.dim() != d || l.dim_in() != d || l.dim_out() != d_anc * d {
        return Err(Error::DimensionMismatch {
            context: "ancilla_witness_residual",
            expected: format!("channel {d} -> {}", d_anc * d),
            found: format!("channel {} -> {}", l.dim_in(), l.dim_out()),
        });
    }
    if a_prime.n_outcomes() != a.n_outcomes() {
        return Err(Error::OutcomeMismatch(format!(
            "ancilla observable has {} outcomes, system observable has {}",
            a_prime.n_outcomes(),
            a.n_outcomes()
        )));
    }
    let id_sys = ComplexMatrix::identity(d);
    let id_anc = ComplexMatrix::identity(d_anc);
    let mut worst = 0.0f64;
    for (prime, effect) in a_prime.effects().iter().zip(a.effects()) {
        let lifted = HermitianOperator::symmetrize(&prime.matrix().tensor(&id_sys));
        let image = l.dual_apply(&lifted)?;
        worst = worst.max(image.matrix().max_abs_diff(effect.matrix()));
    }
    for effect in b.effects() {
        let lifted = HermitianOperator::symmetrize(&id_anc.tensor(effect.matrix()));
        let image = l.dual_apply(&lifted)?;
        worst = worst.max(image.matrix().max_abs_diff(effect.matrix()));
    }
    Ok(worst)
}

/// `true` certifies that `a` can be measured without disturbing `b`,
/// witnessed by the channel `l` and the ancilla observable `a_prime`.
pub fn verify_ancilla_witness(
    l: &Channel,
    a: &Observable,
    a_prime: &Observable,
    b: &Observable,
    tol: f64,
) -> Result<bool> {
    Ok(ancilla_witness_residual(l, a, a_prime, b)? <= tol)
}
