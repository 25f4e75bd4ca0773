//! Quantum channels in Choi form.
//!
//! The fixed convention is `J(Λ) = Σ_ij |i><j| ⊗ Λ(|i><j|)`: the input
//! index is the first (coarse-block) tensor factor, the output index the
//! second. Under that convention
//!
//! ```text
//! Λ(ρ)[m][n]   = Σ_ij ρ[i][j] · J[(i,m)][(j,n)]
//! Λ*(E)[r][s]  = Σ_mn J[(s,m)][(r,n)] · E[n][m]
//! ```
//!
//! and complete positivity is PSD-ness of `J`, trace preservation is
//! `Tr_out J = I`. Channels are stored canonically as Choi matrices;
//! Kraus lists are an input convenience. Composition, duals, tensoring
//! and mixing all act linearly on `J`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::operator::{ComplexMatrix, Factor, HermitianOperator};
use crate::DEFAULT_TOL;

/// A completely positive trace-preserving map with explicit input and
/// output dimensions.
#[derive(Clone, Debug)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    choi: HermitianOperator,
}

impl Channel {
    /// Validates complete positivity (Choi PSD within `1e-9`) and trace
    /// preservation (`Tr_out J = I` within `1e-9`, max-entry).
    pub fn from_choi(choi: HermitianOperator, dim_in: usize, dim_out: usize) -> Result<Self> {
        Self::from_choi_with_tol(choi, dim_in, dim_out, DEFAULT_TOL)
    }

    pub fn from_choi_with_tol(
        choi: HermitianOperator,
        dim_in: usize,
        dim_out: usize,
        tol: f64,
    ) -> Result<Self> {
        if choi.dim() != dim_in * dim_out {
            return Err(Error::DimensionMismatch {
                context: "Channel::from_choi",
                expected: format!("Choi dim {}", dim_in * dim_out),
                found: format!("Choi dim {}", choi.dim()),
            });
        }
        let min_eig = choi.min_eigenvalue();
        if min_eig < -tol {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        let marginal = choi.matrix().partial_trace(dim_in, dim_out, Factor::A)?;
        let residual = marginal.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if residual > tol {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Channel {
            dim_in,
            dim_out,
            choi,
        })
    }

    /// Assembles the Choi matrix from Kraus operators, checking the
    /// completeness relation `ΣK†K = I` within `1e-9`.
    pub fn from_kraus(kraus: &[ComplexMatrix], dim_in: usize, dim_out: usize) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidParameter("empty Kraus list".into()));
        }
        for k in kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::DimensionMismatch {
                    context: "Channel::from_kraus",
                    expected: format!("{dim_out}x{dim_in}"),
                    found: format!("{}x{}", k.rows(), k.cols()),
                });
            }
        }
        let mut completeness = ComplexMatrix::zeros(dim_in, dim_in);
        for k in kraus {
            completeness = &completeness + &k.adjoint().matmul(k);
        }
        let residual = completeness.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if residual > DEFAULT_TOL {
            return Err(Error::KrausIncomplete { residual });
        }

        Ok(Channel {
            dim_in,
            dim_out,
            choi: HermitianOperator::symmetrize(&kraus_to_choi(kraus, dim_in, dim_out)),
        })
    }

    /// The identity channel; its Choi matrix is the unnormalized
    /// maximally-entangled projector.
    pub fn identity(dim: usize) -> Self {
        Channel::from_kraus(&[ComplexMatrix::identity(dim)], dim, dim)
            .expect("identity Kraus operator is complete")
    }

    /// Conjugation by a unitary, `ρ ↦ U ρ U†`.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        let d = u.rows();
        Channel::from_kraus(std::slice::from_ref(u), d, d)
    }

    /// Total dephasing in an orthonormal basis: Kraus operators are the
    /// basis projectors.
    pub fn dephasing_in_basis(basis: &ComplexMatrix) -> Result<Self> {
        check_orthonormal(basis)?;
        let d = basis.rows();
        let kraus: Vec<ComplexMatrix> = (0..d)
            .map(|k| {
                let v = basis.column(k);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Channel::from_kraus(&kraus, d, d)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &HermitianOperator {
        &self.choi
    }

    /// Linear action on an arbitrary (not necessarily Hermitian) matrix.
    pub(crate) fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        choi_apply(self.choi.matrix(), self.dim_in, self.dim_out, m)
    }

    /// `Λ(ρ)`; preserves trace and, for PSD input, positivity.
    pub fn apply(&self, rho: &HermitianOperator) -> Result<HermitianOperator> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                context: "Channel::apply",
                expected: format!("dim {}", self.dim_in),
                found: format!("dim {}", rho.dim()),
            });
        }
        Ok(HermitianOperator::symmetrize(&self.apply_matrix(rho.matrix())))
    }

    /// The dual (Heisenberg) action `Λ*(E)`, the unique map satisfying
    /// `Tr[Λ(ρ) E] = Tr[ρ Λ*(E)]`. Dual channels are unital.
    pub fn dual_apply(&self, effect: &HermitianOperator) -> Result<HermitianOperator> {
        if effect.dim() != self.dim_out {
            return Err(Error::DimensionMismatch {
                context: "Channel::dual_apply",
                expected: format!("dim {}", self.dim_out),
                found: format!("dim {}", effect.dim()),
            });
        }
        Ok(HermitianOperator::symmetrize(&choi_dual(
            self.choi.matrix(),
            self.dim_in,
            self.dim_out,
            effect.matrix(),
        )))
    }

    /// `self ∘ earlier`: feeds the output of `earlier` into `self`.
    /// The dual of the composition reverses the order.
    pub fn compose(&self, earlier: &Channel) -> Result<Channel> {
        if earlier.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch {
                context: "Channel::compose",
                expected: format!("inner dim {}", self.dim_in),
                found: format!("inner dim {}", earlier.dim_out),
            });
        }
        let d_in = earlier.dim_in;
        let d_mid = earlier.dim_out;
        let d_out = self.dim_out;
        let j1 = earlier.choi.matrix();
        let mut choi = ComplexMatrix::zeros(d_in * d_out, d_in * d_out);
        for i in 0..d_in {
            for jj in 0..d_in {
                // Block (i, j) of J1 is Λ1(|i><j|).
                let block = ComplexMatrix::from_fn(d_mid, d_mid, |m, n| {
                    j1.at(i * d_mid + m, jj * d_mid + n)
                });
                let mapped = self.apply_matrix(&block);
                for m in 0..d_out {
                    for n in 0..d_out {
                        choi.set(i * d_out + m, jj * d_out + n, mapped.at(m, n));
                    }
                }
            }
        }
        Ok(Channel {
            dim_in: d_in,
            dim_out: d_out,
            choi: HermitianOperator::symmetrize(&choi),
        })
    }

    /// The product map `self ⊗ other` on the tensor-product spaces.
    pub fn tensor(&self, other: &Channel) -> Channel {
        let (a_in, a_out) = (self.dim_in, self.dim_out);
        let (b_in, b_out) = (other.dim_in, other.dim_out);
        let d_in = a_in * b_in;
        let d_out = a_out * b_out;
        let ja = self.choi.matrix();
        let jb = other.choi.matrix();
        let mut choi = ComplexMatrix::zeros(d_in * d_out, d_in * d_out);
        for i1 in 0..a_in {
            for m1 in 0..a_out {
                for j1 in 0..a_in {
                    for n1 in 0..a_out {
                        let va = ja.at(i1 * a_out + m1, j1 * a_out + n1);
                        if va == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for i2 in 0..b_in {
                            for m2 in 0..b_out {
                                for j2 in 0..b_in {
                                    for n2 in 0..b_out {
                                        let vb =
                                            jb.at(i2 * b_out + m2, j2 * b_out + n2);
                                        if vb == Complex64::new(0.0, 0.0) {
                                            continue;
                                        }
                                        let row = (i1 * b_in + i2) * d_out
                                            + (m1 * b_out + m2);
                                        let col = (j1 * b_in + j2) * d_out
                                            + (n1 * b_out + n2);
                                        choi.add_at(row, col, va * vb);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Channel {
            dim_in: d_in,
            dim_out: d_out,
            choi: HermitianOperator::symmetrize(&choi),
        }
    }

    /// Convex mixture `p·self + (1-p)·other` of the Choi matrices.
    pub fn mix(&self, other: &Channel, p: f64) -> Result<Channel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight must lie in [0, 1], got {p}"
            )));
        }
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::DimensionMismatch {
                context: "Channel::mix",
                expected: format!("{}->{}", self.dim_in, self.dim_out),
                found: format!("{}->{}", other.dim_in, other.dim_out),
            });
        }
        Ok(Channel {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            choi: self.choi.mix(&other.choi, p),
        })
    }

    /// Max-entry residual of the dual fixed-point condition
    /// `Θ*(A(x)) = A(x)` over all effects.
    pub fn nondisturbance_residual(&self, a: &Observable) -> Result<f64> {
        if self.dim_in != self.dim_out || self.dim_in != a.dim() {
            return Err(Error::DimensionMismatch {
                context: "Channel::nondisturbance_residual",
                expected: format!("square channel on dim {}", a.dim()),
                found: format!("{}->{}", self.dim_in, self.dim_out),
            });
        }
        let mut worst = 0.0f64;
        for effect in a.effects() {
            let image = self.dual_apply(effect)?;
            worst = worst.max(image.matrix().max_abs_diff(effect.matrix()));
        }
        Ok(worst)
    }

    /// `true` iff every effect of `a` is a fixed point of the dual
    /// within `tol`.
    pub fn is_nondisturbing_for(&self, a: &Observable, tol: f64) -> Result<bool> {
        Ok(self.nondisturbance_residual(a)? <= tol)
    }
}

/// Raw Kraus-to-Choi assembly without the completeness check; also used
/// for the completely positive but trace-decreasing maps of instruments.
pub(crate) fn kraus_to_choi(
    kraus: &[ComplexMatrix],
    dim_in: usize,
    dim_out: usize,
) -> ComplexMatrix {
    let n = dim_in * dim_out;
    let mut choi = ComplexMatrix::zeros(n, n);
    for k in kraus {
        for i in 0..dim_in {
            for m in 0..dim_out {
                let kmi = k.at(m, i);
                if kmi == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim_in {
                    for nn in 0..dim_out {
                        choi.add_at(i * dim_out + m, j * dim_out + nn, kmi * k.at(nn, j).conj());
                    }
                }
            }
        }
    }
    choi
}

/// Schrödinger-picture contraction of a Choi matrix against an input.
pub(crate) fn choi_apply(
    choi: &ComplexMatrix,
    dim_in: usize,
    dim_out: usize,
    m: &ComplexMatrix,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim_out, dim_out);
    for i in 0..dim_in {
        for j in 0..dim_in {
            let rho_ij = m.at(i, j);
            if rho_ij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for mm in 0..dim_out {
                for nn in 0..dim_out {
                    out.add_at(mm, nn, rho_ij * choi.at(i * dim_out + mm, j * dim_out + nn));
                }
            }
        }
    }
    out
}

/// Heisenberg-picture contraction of a Choi matrix against an effect.
pub(crate) fn choi_dual(
    choi: &ComplexMatrix,
    dim_in: usize,
    dim_out: usize,
    e: &ComplexMatrix,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim_in, dim_in);
    for r in 0..dim_in {
        for s in 0..dim_in {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..dim_out {
                for n in 0..dim_out {
                    acc += choi.at(s * dim_out + m, r * dim_out + n) * e.at(n, m);
                }
            }
            out.set(r, s, acc);
        }
    }
    out
}

fn check_orthonormal(basis: &ComplexMatrix) -> Result<()> {
    let gram = basis.adjoint().matmul(basis);
    let residual = gram.max_abs_diff(&ComplexMatrix::identity(basis.cols()));
    if residual > 1e-10 {
        return Err(Error::BasisNotOrthonormal { residual });
    }
    Ok(())
}

/// A channel from a system into two copies of its own space,
/// `Λ : S(H) → S(H ⊗ H)`.
#[derive(Clone, Debug)]
pub struct BroadcastingChannel {
    base: Channel,
}

impl BroadcastingChannel {
    pub fn new(base: Channel) -> Result<Self> {
        if base.dim_out != base.dim_in * base.dim_in {
            return Err(Error::DimensionMismatch {
                context: "BroadcastingChannel::new",
                expected: format!("dim_out {}", base.dim_in * base.dim_in),
                found: format!("dim_out {}", base.dim_out),
            });
        }
        Ok(BroadcastingChannel { base })
    }

    /// The classical copier `ρ ↦ Σ_k <v_k|ρ|v_k> |v_k v_k><v_k v_k|`.
    /// It broadcasts exactly the observables diagonal in the given basis.
    pub fn copier_from_basis(basis: &ComplexMatrix) -> Result<Self> {
        check_orthonormal(basis)?;
        let d = basis.rows();
        let kraus: Vec<ComplexMatrix> = (0..d)
            .map(|k| {
                let v = basis.column(k);
                ComplexMatrix::from_fn(d * d, d, |row, col| {
                    v[row / d] * v[row % d] * v[col].conj()
                })
            })
            .collect();
        BroadcastingChannel::new(Channel::from_kraus(&kraus, d, d * d)?)
    }

    /// The isometric cloner `ρ ↦ V ρ V†` with `V = Σ_k |v_k v_k><v_k|`.
    /// Broadcasts the same observables as the classical copier but keeps
    /// cross-basis coherence, so it is a genuinely different channel.
    pub fn isometric_cloner(basis: &ComplexMatrix) -> Result<Self> {
        check_orthonormal(basis)?;
        let d = basis.rows();
        let mut v_iso = ComplexMatrix::zeros(d * d, d);
        for k in 0..d {
            let v = basis.column(k);
            for row in 0..d * d {
                for col in 0..d {
                    v_iso.add_at(row, col, v[row / d] * v[row % d] * v[col].conj());
                }
            }
        }
        BroadcastingChannel::new(Channel::from_kraus(&[v_iso], d, d * d)?)
    }

    /// `ρ ↦ ξ ⊗ ρ` for a fixed state `ξ`: the right output reproduces
    /// every observable, the left output only trivial ones.
    pub fn fixed_left(xi: &HermitianOperator) -> Result<Self> {
        let d = xi.dim();
        if (xi.trace() - 1.0).abs() > DEFAULT_TOL || !xi.is_psd(DEFAULT_TOL) {
            return Err(Error::InvalidParameter(
                "fixed_left requires a unit-trace PSD state".into(),
            ));
        }
        let eig = xi.eig();
        let mut kraus = Vec::new();
        for (k, &mu) in eig.eigenvalues.iter().enumerate() {
            if mu <= 0.0 {
                continue;
            }
            let w = eig.eigenvectors.column(k);
            let root = mu.sqrt();
            kraus.push(ComplexMatrix::from_fn(d * d, d, |row, col| {
                if row % d == col {
                    w[row / d] * root
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
        BroadcastingChannel::new(Channel::from_kraus(&kraus, d, d * d)?)
    }

    /// `ρ ↦ ρ ⊗ ξ`, the mirror image of [`Self::fixed_left`].
    pub fn fixed_right(xi: &HermitianOperator) -> Result<Self> {
        let d = xi.dim();
        if (xi.trace() - 1.0).abs() > DEFAULT_TOL || !xi.is_psd(DEFAULT_TOL) {
            return Err(Error::InvalidParameter(
                "fixed_right requires a unit-trace PSD state".into(),
            ));
        }
        let eig = xi.eig();
        let mut kraus = Vec::new();
        for (k, &mu) in eig.eigenvalues.iter().enumerate() {
            if mu <= 0.0 {
                continue;
            }
            let w = eig.eigenvectors.column(k);
            let root = mu.sqrt();
            kraus.push(ComplexMatrix::from_fn(d * d, d, |row, col| {
                if row / d == col {
                    w[row % d] * root
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
        BroadcastingChannel::new(Channel::from_kraus(&kraus, d, d * d)?)
    }

    pub fn dim(&self) -> usize {
        self.base.dim_in
    }

    pub fn channel(&self) -> &Channel {
        &self.base
    }

    /// Worst dual residual of `Λ*(A(x) ⊗ I) = A(x)`: recovery of `a`
    /// from the left output alone.
    pub fn left_marginal_residual(&self, a: &Observable) -> Result<f64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "left_marginal_residual",
                expected: format!("dim {}", self.dim()),
                found: format!("dim {}", a.dim()),
            });
        }
        let identity = ComplexMatrix::identity(self.dim());
        let mut worst = 0.0f64;
        for effect in a.effects() {
            let lifted = HermitianOperator::symmetrize(&effect.matrix().tensor(&identity));
            let image = self.base.dual_apply(&lifted)?;
            worst = worst.max(image.matrix().max_abs_diff(effect.matrix()));
        }
        Ok(worst)
    }

    /// Worst dual residual of `Λ*(I ⊗ B(y)) = B(y)`: recovery from the
    /// right output alone.
    pub fn right_marginal_residual(&self, b: &Observable) -> Result<f64> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "right_marginal_residual",
                expected: format!("dim {}", self.dim()),
                found: format!("dim {}", b.dim()),
            });
        }
        let identity = ComplexMatrix::identity(self.dim());
        let mut worst = 0.0f64;
        for effect in b.effects() {
            let lifted = HermitianOperator::symmetrize(&identity.tensor(effect.matrix()));
            let image = self.base.dual_apply(&lifted)?;
            worst = worst.max(image.matrix().max_abs_diff(effect.matrix()));
        }
        Ok(worst)
    }

    /// Worst dual residual of the two broadcast conditions
    /// `Λ*(A(x) ⊗ I) = A(x)` and `Λ*(I ⊗ A(x)) = A(x)`.
    ///
    /// The operator form is equivalent to requiring equal outcome
    /// probabilities on every input state, by linearity in ρ.
    pub fn broadcast_residual(&self, a: &Observable) -> Result<f64> {
        Ok(self
            .left_marginal_residual(a)?
            .max(self.right_marginal_residual(a)?))
    }

    /// `true` iff both dual broadcast conditions hold within `tol` for
    /// every outcome.
    pub fn broadcasts(&self, a: &Observable, tol: f64) -> Result<bool> {
        Ok(self.broadcast_residual(a)? <= tol)
    }

    /// Worst dual residual of the one-side conditions
    /// `Λ*(A(x) ⊗ I) = A(x)` and `Λ*(I ⊗ B(y)) = B(y)`.
    pub fn one_side_residual(&self, a: &Observable, b: &Observable) -> Result<f64> {
        Ok(self
            .left_marginal_residual(a)?
            .max(self.right_marginal_residual(b)?))
    }

    /// `true` iff `a` is recovered from the left output and `b` from the
    /// right output, within `tol`.
    pub fn one_side_broadcasts(&self, a: &Observable, b: &Observable, tol: f64) -> Result<bool> {
        Ok(self.one_side_residual(a, b)? <= tol)
    }

    /// Pre-composition `Λ ∘ Θ` with a square channel; stays broadcasting.
    pub fn after(&self, theta: &Channel) -> Result<Self> {
        BroadcastingChannel::new(self.base.compose(theta)?)
    }

    /// Post-composition with local channels, `(Σ1 ⊗ Σ2) ∘ Λ`.
    pub fn locally_changed(&self, s1: &Channel, s2: &Channel) -> Result<Self> {
        let product = s1.tensor(s2);
        BroadcastingChannel::new(product.compose(&self.base)?)
    }

    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        BroadcastingChannel::new(self.base.mix(&other.base, p)?)
    }
}

/// Checks the local-change witness `Λ2 = (Σ1 ⊗ Σ2) ∘ Λ1` as a Choi-matrix
/// identity within `tol`. This verifies a supplied witness only; it does
/// not search for the local channels.
pub fn verify_local_change(
    l2: &BroadcastingChannel,
    l1: &BroadcastingChannel,
    s1: &Channel,
    s2: &Channel,
    tol: f64,
) -> Result<bool> {
    let composed = l1.locally_changed(s1, s2)?;
    if composed.channel().choi().dim() != l2.channel().choi().dim() {
        return Err(Error::DimensionMismatch {
            context: "verify_local_change",
            expected: format!("Choi dim {}", l2.channel().choi().dim()),
            found: format!("Choi dim {}", composed.channel().choi().dim()),
        });
    }
    let diff = composed
        .channel()
        .choi()
        .matrix()
        .max_abs_diff(l2.channel().choi().matrix());
    Ok(diff <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::Observable;
    use crate::operator::pauli;

    fn z_basis() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    fn x_basis() -> ComplexMatrix {
        let s = 1.0 / 2.0f64.sqrt();
        ComplexMatrix::from_rows(&[vec![(s, 0.0), (s, 0.0)], vec![(s, 0.0), (-s, 0.0)]])
    }

    fn plus_state() -> HermitianOperator {
        pauli::bloch_effect([1.0, 0.0, 0.0])
    }

    fn sharp_z() -> Observable {
        Observable::qubit_binary([0.0, 0.0, 1.0]).unwrap()
    }

    fn sharp_x() -> Observable {
        Observable::qubit_binary([1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn identity_choi_is_bell_projector() {
        let id = Channel::identity(2);
        let mut bell = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell.set(i, j, Complex64::new(1.0, 0.0));
        }
        assert!(id.choi().matrix().max_abs_diff(&bell) < 1e-15);
        let rho = plus_state();
        assert!(id.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn dephasing_kills_coherence() {
        let deph = Channel::dephasing_in_basis(&z_basis()).unwrap();
        let out = deph.apply(&plus_state()).unwrap();
        let half_id = HermitianOperator::identity(2).scale(0.5);
        assert!(out.matrix().max_abs_diff(half_id.matrix()) < 1e-15);
        // Dual action sends σx to zero.
        let image = deph.dual_apply(&pauli::sigma_x()).unwrap();
        assert!(image.matrix().max_abs() < 1e-15);
    }

    #[test]
    fn kraus_copier_matches_basis_copier() {
        // Isometry-style Kraus {|00><0|, |11><1|} assemble the classical
        // z copier.
        let mut k0 = ComplexMatrix::zeros(4, 2);
        k0.set(0, 0, Complex64::new(1.0, 0.0));
        let mut k1 = ComplexMatrix::zeros(4, 2);
        k1.set(3, 1, Complex64::new(1.0, 0.0));
        let from_kraus = Channel::from_kraus(&[k0, k1], 2, 4).unwrap();
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        assert!(from_kraus
            .choi()
            .matrix()
            .max_abs_diff(copier.channel().choi().matrix())
            < 1e-15);
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let k = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(matches!(
            Channel::from_kraus(&[k], 2, 2),
            Err(Error::KrausIncomplete { .. })
        ));
    }

    #[test]
    fn copier_duplicates_basis_states() {
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        let p0 = pauli::bloch_effect([0.0, 0.0, 1.0]);
        let out = copier.channel().apply(&p0).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected.set(0, 0, Complex64::new(1.0, 0.0));
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn duality_identity_on_fixed_pairs() {
        let channels = vec![
            Channel::identity(2),
            Channel::dephasing_in_basis(&z_basis()).unwrap(),
            BroadcastingChannel::copier_from_basis(&x_basis())
                .unwrap()
                .channel()
                .clone(),
        ];
        let rho = HermitianOperator::new(ComplexMatrix::from_rows(&[
            vec![(0.7, 0.0), (0.1, 0.2)],
            vec![(0.1, -0.2), (0.3, 0.0)],
        ]))
        .unwrap();
        for ch in channels {
            let effect_dim = ch.dim_out();
            let effect = HermitianOperator::symmetrize(&ComplexMatrix::from_fn(
                effect_dim,
                effect_dim,
                |i, j| Complex64::new(0.1 * (i + 1) as f64, 0.05 * (j as f64 - i as f64)),
            ));
            let lhs = ch.apply(&rho).unwrap().matrix().hs_inner(effect.matrix());
            let rhs = rho.matrix().hs_inner(ch.dual_apply(&effect).unwrap().matrix());
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn dual_is_unital() {
        let copier = BroadcastingChannel::copier_from_basis(&x_basis()).unwrap();
        let image = copier
            .channel()
            .dual_apply(&HermitianOperator::identity(4))
            .unwrap();
        assert!(image.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn composition_with_identity_and_idempotence() {
        let deph = Channel::dephasing_in_basis(&z_basis()).unwrap();
        let id = Channel::identity(2);
        let left = id.compose(&deph).unwrap();
        assert!(left.choi().matrix().max_abs_diff(deph.choi().matrix()) < 1e-14);
        let twice = deph.compose(&deph).unwrap();
        assert!(twice.choi().matrix().max_abs_diff(deph.choi().matrix()) < 1e-14);
    }

    #[test]
    fn composition_dual_reverses_order() {
        let deph = Channel::dephasing_in_basis(&z_basis()).unwrap();
        let rot = Channel::unitary(&x_basis()).unwrap();
        let composed = deph.compose(&rot).unwrap();
        let effect = pauli::bloch_effect([0.3, 0.2, 0.8]);
        let lhs = composed.dual_apply(&effect).unwrap();
        let rhs = rot
            .dual_apply(&deph.dual_apply(&effect).unwrap())
            .unwrap();
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-13);
    }

    #[test]
    fn tensor_channels_factorized_action() {
        let deph = Channel::dephasing_in_basis(&z_basis()).unwrap();
        let id = Channel::identity(2);
        let product = deph.tensor(&id);
        let p0 = pauli::bloch_effect([0.0, 0.0, 1.0]);
        let input = HermitianOperator::symmetrize(&plus_state().matrix().tensor(p0.matrix()));
        let out = product.apply(&input).unwrap();
        let expected = HermitianOperator::identity(2)
            .scale(0.5)
            .matrix()
            .tensor(p0.matrix());
        assert!(out.matrix().max_abs_diff(&expected) < 1e-14);

        // Dual of Θ⊗Σ on A ⊗ I factorizes as Θ*(A) ⊗ Σ*(I) = Θ*(A) ⊗ I.
        let a = pauli::bloch_effect([0.4, 0.1, 0.6]);
        let big = HermitianOperator::symmetrize(
            &a.matrix().tensor(&ComplexMatrix::identity(2)),
        );
        let image = product.dual_apply(&big).unwrap();
        let expected_dual = deph
            .dual_apply(&a)
            .unwrap()
            .matrix()
            .tensor(&ComplexMatrix::identity(2));
        assert!(image.matrix().max_abs_diff(&expected_dual) < 1e-13);
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let id2 = Channel::identity(2);
        let prod = id2.tensor(&id2);
        let id4 = Channel::identity(4);
        assert!(prod.choi().matrix().max_abs_diff(id4.choi().matrix()) < 1e-14);
    }

    #[test]
    fn copier_broadcasts_its_own_basis_only() {
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        assert!(copier.broadcasts(&sharp_z(), 1e-10).unwrap());
        assert!(!copier.broadcasts(&sharp_x(), 1e-10).unwrap());

        let x_copier = BroadcastingChannel::copier_from_basis(&x_basis()).unwrap();
        assert!(x_copier.broadcasts(&sharp_x(), 1e-10).unwrap());
        assert!(!x_copier.broadcasts(&sharp_z(), 1e-10).unwrap());
    }

    #[test]
    fn every_broadcaster_broadcasts_trivial_observables() {
        let trivial = Observable::trivial(2, &[0.25, 0.75]).unwrap();
        for l in [
            BroadcastingChannel::copier_from_basis(&z_basis()).unwrap(),
            BroadcastingChannel::isometric_cloner(&x_basis()).unwrap(),
            BroadcastingChannel::fixed_left(&HermitianOperator::identity(2).scale(0.5)).unwrap(),
        ] {
            assert!(l.broadcasts(&trivial, 1e-10).unwrap());
        }
    }

    #[test]
    fn one_side_requires_matching_sides() {
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        assert!(copier
            .one_side_broadcasts(&sharp_z(), &sharp_z(), 1e-10)
            .unwrap());
        // A-side fails when A is the x observable.
        assert!(!copier
            .one_side_broadcasts(&sharp_x(), &sharp_z(), 1e-10)
            .unwrap());
    }

    #[test]
    fn fixed_left_recovers_only_the_right_side() {
        let xi = HermitianOperator::identity(2).scale(0.5);
        let l = BroadcastingChannel::fixed_left(&xi).unwrap();
        let trivial = Observable::trivial(2, &[0.5, 0.5]).unwrap();
        assert!(l.one_side_broadcasts(&trivial, &sharp_x(), 1e-10).unwrap());
        assert!(!l.broadcasts(&sharp_x(), 1e-10).unwrap());

        let r = BroadcastingChannel::fixed_right(&xi).unwrap();
        assert!(r.one_side_broadcasts(&sharp_x(), &trivial, 1e-10).unwrap());
    }

    #[test]
    fn isometric_cloner_broadcasts_basis_observables() {
        let cloner = BroadcastingChannel::isometric_cloner(&z_basis()).unwrap();
        assert!(cloner.broadcasts(&sharp_z(), 1e-10).unwrap());
        assert!(cloner
            .broadcasts(&sharp_z().unsharp(0.3).unwrap(), 1e-10)
            .unwrap());
        // Distinct from the classical copier as a channel.
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        assert!(
            cloner
                .channel()
                .choi()
                .matrix()
                .max_abs_diff(copier.channel().choi().matrix())
                > 0.5
        );
    }

    #[test]
    fn nondisturbing_channel_cases() {
        let id = Channel::identity(2);
        assert!(id.is_nondisturbing_for(&sharp_x(), 1e-10).unwrap());
        let deph = Channel::dephasing_in_basis(&z_basis()).unwrap();
        assert!(deph.is_nondisturbing_for(&sharp_z(), 1e-10).unwrap());
        assert!(!deph.is_nondisturbing_for(&sharp_x(), 1e-10).unwrap());
    }

    #[test]
    fn local_change_verification() {
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        let id = Channel::identity(2);
        assert!(verify_local_change(&copier, &copier, &id, &id, 1e-12).unwrap());

        let deph = Channel::dephasing_in_basis(&z_basis()).unwrap();
        let changed = copier.locally_changed(&id, &deph).unwrap();
        assert!(verify_local_change(&changed, &copier, &id, &deph, 1e-12).unwrap());

        let x_copier = BroadcastingChannel::copier_from_basis(&x_basis()).unwrap();
        assert!(!verify_local_change(&x_copier, &copier, &id, &id, 1e-9).unwrap());
    }

    #[test]
    fn mixing_channels() {
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        let x_copier = BroadcastingChannel::copier_from_basis(&x_basis()).unwrap();
        let same = copier.mix(&x_copier, 1.0).unwrap();
        assert!(same
            .channel()
            .choi()
            .matrix()
            .max_abs_diff(copier.channel().choi().matrix())
            < 1e-15);

        // A half-half mix of the z and x copiers no longer broadcasts the
        // sharp z observable.
        let mixed = copier.mix(&x_copier, 0.5).unwrap();
        assert!(!mixed.broadcasts(&sharp_z(), 1e-9).unwrap());
        let trivial = Observable::trivial(2, &[0.5, 0.5]).unwrap();
        assert!(mixed.broadcasts(&trivial, 1e-10).unwrap());
        assert!(Channel::identity(2)
            .mix(&Channel::identity(2), 1.5)
            .is_err());
    }

    #[test]
    fn smearing_commutes_with_broadcasting() {
        // A channel broadcasts A_p iff it broadcasts A: the dual
        // conditions are affine in the smearing because duals are unital.
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        for p in [0.2, 0.5, 0.9, 1.0] {
            assert!(copier
                .broadcasts(&sharp_z().unsharp(p).unwrap(), 1e-10)
                .unwrap());
            assert!(!copier
                .broadcasts(&sharp_x().unsharp(p).unwrap(), 1e-9)
                .unwrap());
        }
    }

    #[test]
    fn composing_with_nondisturbing_preserves_broadcast() {
        let copier = BroadcastingChannel::copier_from_basis(&z_basis()).unwrap();
        let deph = Channel::dephasing_in_basis(&z_basis()).unwrap();
        let a = sharp_z().unsharp(0.8).unwrap();
        assert!(deph.is_nondisturbing_for(&a, 1e-10).unwrap());
        let composed = copier.after(&deph).unwrap();
        assert!(composed.broadcasts(&a, 1e-10).unwrap());
    }
}
