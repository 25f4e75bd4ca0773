//! Joint-measurability decisions.
//!
//! Three routes, tried in order by [`are_compatible`]:
//!
//! 1. **Sharp rule** — a pair of sharp observables is compatible iff it
//!    is mutually commuting; the product family is then a joint
//!    observable. This route can certify infeasibility.
//! 2. **Qubit oracle** — for unbiased binary qubit pairs with effects
//!    `(I ± a·σ)/2`, compatibility holds iff `|a+b| + |a-b| ≤ 2`, and a
//!    joint observable exists in closed form. Also certifies
//!    infeasibility.
//! 3. **Alternating projections** — the general route. The family
//!    `{G(x,y)}` is driven back and forth between the affine set with
//!    both margins exact and the product of PSD cones. Success is
//!    constructive (the iterate is returned as a joint observable);
//!    non-convergence is *not* a certificate, so this route only ever
//!    reports `Feasible` or `Inconclusive`.
//!
//! The affine projection has a closed form. Writing `R(x)`, `C(y)` for
//! the current row and column sums and `Δ = I - Σ G(x,y)`,
//!
//! ```text
//! G(x,y) += (A(x) - R(x))/n_B + (B(y) - C(y))/n_A - Δ/(n_A n_B)
//! ```
//!
//! is the orthogonal projection onto the margin constraints (the scalar
//! row/column-sum projection applied entrywise in the Hilbert–Schmidt
//! geometry).

use crate::error::{Error, Result};
use crate::observable::{mutually_commuting, JointObservable, Observable};
use crate::operator::{jacobi_hermitian, pauli, ComplexMatrix, HermitianOperator};
use crate::DEFAULT_TOL;

/// Default iteration budget for the projection solver.
pub const DEFAULT_MAX_ITER: usize = 20_000;

/// Iterations of the degree bisection; the nominal bracket width is well
/// below any feasibility tolerance.
pub const DEGREE_BISECTION_ITERS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Projection,
    SharpRule,
    QubitOracle,
}

/// Outcome of a joint-measurability decision.
#[derive(Clone, Debug)]
pub struct FeasibilityStatus {
    pub verdict: Verdict,
    /// Present exactly when the verdict is `Feasible`; margins then match
    /// within `residual`.
    pub joint: Option<JointObservable>,
    pub residual: f64,
    pub iterations: usize,
    pub method: Method,
}

impl FeasibilityStatus {
    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }
}

fn check_dims(a: &Observable, b: &Observable, context: &'static str) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context,
            expected: format!("dim {}", a.dim()),
            found: format!("dim {}", b.dim()),
        });
    }
    Ok(())
}

/// Worst max-entry distance of the family's margins from `(a, b)`.
fn margin_residual(g: &[ComplexMatrix], a: &Observable, b: &Observable) -> f64 {
    let (n_a, n_b, d) = (a.n_outcomes(), b.n_outcomes(), a.dim());
    let mut worst = 0.0f64;
    for x in 0..n_a {
        let mut row = ComplexMatrix::zeros(d, d);
        for y in 0..n_b {
            row = &row + &g[x * n_b + y];
        }
        worst = worst.max(row.max_abs_diff(a.effect(x).matrix()));
    }
    for y in 0..n_b {
        let mut col = ComplexMatrix::zeros(d, d);
        for x in 0..n_a {
            col = &col + &g[x * n_b + y];
        }
        worst = worst.max(col.max_abs_diff(b.effect(y).matrix()));
    }
    worst
}

fn family_to_joint(g: Vec<ComplexMatrix>, n_a: usize, n_b: usize) -> JointObservable {
    let effects = g
        .into_iter()
        .map(|m| HermitianOperator::symmetrize(&m))
        .collect();
    JointObservable::new(Observable::new_unchecked(effects), n_a, n_b)
        .expect("family has n_a * n_b entries")
}

/// Searches for a joint observable of `(a, b)` by alternating
/// projections. `Feasible` is declared when, at the margin-exact point,
/// the worst eigenvalue deficit is within `tol`. The search starts from
/// the Jordan products `(A(x)B(y) + B(y)A(x))/2`, which already solve
/// every mutually commuting instance.
pub fn joint_feasibility(
    a: &Observable,
    b: &Observable,
    tol: f64,
    max_iter: usize,
) -> Result<FeasibilityStatus> {
    check_dims(a, b, "joint_feasibility")?;
    let (n_a, n_b, d) = (a.n_outcomes(), b.n_outcomes(), a.dim());
    let nb_f = n_b as f64;
    let na_f = n_a as f64;

    // Jordan-product warm start; Hermitian with exact margins.
    let mut g: Vec<ComplexMatrix> = Vec::with_capacity(n_a * n_b);
    for x in 0..n_a {
        for y in 0..n_b {
            let ab = a.effect(x).matrix().matmul(b.effect(y).matrix());
            let ba = b.effect(y).matrix().matmul(a.effect(x).matrix());
            g.push((&ab + &ba).scale_re(0.5));
        }
    }

    let project_margins = |g: &mut Vec<ComplexMatrix>| {
        let mut rows: Vec<ComplexMatrix> = Vec::with_capacity(n_a);
        for x in 0..n_a {
            let mut row = ComplexMatrix::zeros(d, d);
            for y in 0..n_b {
                row = &row + &g[x * n_b + y];
            }
            rows.push(row);
        }
        let mut cols: Vec<ComplexMatrix> = Vec::with_capacity(n_b);
        for y in 0..n_b {
            let mut col = ComplexMatrix::zeros(d, d);
            for x in 0..n_a {
                col = &col + &g[x * n_b + y];
            }
            cols.push(col);
        }
        let mut total = ComplexMatrix::zeros(d, d);
        for row in &rows {
            total = &total + row;
        }
        let delta = &ComplexMatrix::identity(d) - &total;

        for x in 0..n_a {
            let row_corr = (a.effect(x).matrix() - &rows[x]).scale_re(1.0 / nb_f);
            for y in 0..n_b {
                let col_corr = (b.effect(y).matrix() - &cols[y]).scale_re(1.0 / na_f);
                let cell = &mut g[x * n_b + y];
                *cell = &(&*cell + &row_corr) + &(&col_corr - &delta.scale_re(1.0 / (na_f * nb_f)));
            }
        }
    };

    // Stall detection: an infeasible instance drives the deficit to a
    // positive limit geometrically, so a windowed relative-improvement
    // check cuts it off long before the iteration budget.
    const STALL_WINDOW: usize = 400;
    const STALL_RELATIVE: f64 = 1e-4;
    let mut best_deficit = f64::INFINITY;
    let mut window_start_best = f64::INFINITY;

    let mut last_deficit = f64::INFINITY;
    for iter in 1..=max_iter {
        project_margins(&mut g);

        let mut deficit = 0.0f64;
        let mut eigs = Vec::with_capacity(g.len());
        for m in &g {
            let eig = jacobi_hermitian(&m.symmetrized());
            deficit = deficit.max(-eig.eigenvalues[0]);
            eigs.push(eig);
        }
        deficit = deficit.max(0.0);
        last_deficit = deficit;

        if deficit <= tol {
            let residual = margin_residual(&g, a, b).max(deficit);
            return Ok(FeasibilityStatus {
                verdict: Verdict::Feasible,
                joint: Some(family_to_joint(g, n_a, n_b)),
                residual,
                iterations: iter,
                method: Method::Projection,
            });
        }

        best_deficit = best_deficit.min(deficit);
        if iter % STALL_WINDOW == 0 {
            if window_start_best.is_finite()
                && window_start_best - best_deficit < STALL_RELATIVE * best_deficit
            {
                return Ok(FeasibilityStatus {
                    verdict: Verdict::Inconclusive,
                    joint: None,
                    residual: deficit,
                    iterations: iter,
                    method: Method::Projection,
                });
            }
            window_start_best = best_deficit;
        }

        // PSD projection, reusing the spectra computed for the deficit.
        for (m, eig) in g.iter_mut().zip(&eigs) {
            if eig.eigenvalues[0] < 0.0 {
                *m = eig.reconstruct_with(|l| l.max(0.0));
            }
        }
    }

    Ok(FeasibilityStatus {
        verdict: Verdict::Inconclusive,
        joint: None,
        residual: last_deficit,
        iterations: max_iter,
        method: Method::Projection,
    })
}

/// Bloch vector of the first effect when the observable is an unbiased
/// binary qubit observable within `tol`, else `None`.
fn unbiased_qubit_bloch(o: &Observable, tol: f64) -> Option<[f64; 3]> {
    if o.dim() != 2 || o.n_outcomes() != 2 {
        return None;
    }
    if (o.effect(0).trace() - 1.0).abs() > tol {
        return None;
    }
    let (_, n) = pauli::bloch_components(o.effect(0));
    Some(n)
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Closed-form joint observable for an unbiased binary qubit pair on or
/// inside the compatibility boundary:
/// `G(x,y) = [(1 + s_x s_y γ) I + (s_x a + s_y b)·σ] / 4` with the
/// balance `γ = (|a+b| - |a-b|)/2`.
fn oracle_joint(a_bloch: [f64; 3], b_bloch: [f64; 3]) -> JointObservable {
    let sum = [
        a_bloch[0] + b_bloch[0],
        a_bloch[1] + b_bloch[1],
        a_bloch[2] + b_bloch[2],
    ];
    let diff = [
        a_bloch[0] - b_bloch[0],
        a_bloch[1] - b_bloch[1],
        a_bloch[2] - b_bloch[2],
    ];
    let gamma = (norm3(sum) - norm3(diff)) / 2.0;
    let mut effects = Vec::with_capacity(4);
    for sx in [1.0f64, -1.0] {
        for sy in [1.0f64, -1.0] {
            let v = [
                sx * a_bloch[0] + sy * b_bloch[0],
                sx * a_bloch[1] + sy * b_bloch[1],
                sx * a_bloch[2] + sy * b_bloch[2],
            ];
            let weight = 1.0 + sx * sy * gamma;
            let effect = HermitianOperator::identity(2)
                .scale(weight / 4.0)
                .add(&pauli::bloch_dot_sigma(v).scale(0.25));
            effects.push(effect);
        }
    }
    JointObservable::new(Observable::new_unchecked(effects), 2, 2)
        .expect("four effects form a 2x2 joint family")
}

/// Decision cascade for joint measurability. Infeasibility is certified
/// only analytically (sharp rule or qubit oracle); when neither applies
/// the projection solver decides, and may come back inconclusive.
pub fn are_compatible(a: &Observable, b: &Observable, tol: f64) -> Result<FeasibilityStatus> {
    are_compatible_with(a, b, tol, DEFAULT_MAX_ITER)
}

pub fn are_compatible_with(
    a: &Observable,
    b: &Observable,
    tol: f64,
    max_iter: usize,
) -> Result<FeasibilityStatus> {
    check_dims(a, b, "are_compatible")?;

    if a.is_sharp(tol) && b.is_sharp(tol) {
        if mutually_commuting(a, b, tol)? {
            let mut g = Vec::with_capacity(a.n_outcomes() * b.n_outcomes());
            for ea in a.effects() {
                for eb in b.effects() {
                    let ab = ea.matrix().matmul(eb.matrix());
                    let ba = eb.matrix().matmul(ea.matrix());
                    g.push((&ab + &ba).scale_re(0.5));
                }
            }
            let residual = margin_residual(&g, a, b);
            return Ok(FeasibilityStatus {
                verdict: Verdict::Feasible,
                joint: Some(family_to_joint(g, a.n_outcomes(), b.n_outcomes())),
                residual,
                iterations: 0,
                method: Method::SharpRule,
            });
        }
        return Ok(FeasibilityStatus {
            verdict: Verdict::Infeasible,
            joint: None,
            residual: 0.0,
            iterations: 0,
            method: Method::SharpRule,
        });
    }

    if let (Some(a_bloch), Some(b_bloch)) =
        (unbiased_qubit_bloch(a, tol), unbiased_qubit_bloch(b, tol))
    {
        let sum = [
            a_bloch[0] + b_bloch[0],
            a_bloch[1] + b_bloch[1],
            a_bloch[2] + b_bloch[2],
        ];
        let diff = [
            a_bloch[0] - b_bloch[0],
            a_bloch[1] - b_bloch[1],
            a_bloch[2] - b_bloch[2],
        ];
        let criterion = norm3(sum) + norm3(diff);
        // The constructed joint's smallest eigenvalue is (2 - criterion)/8,
        // so accepting up to 2 + 8·tol keeps it PSD within tol.
        if criterion <= 2.0 + 8.0 * tol {
            let joint = oracle_joint(a_bloch, b_bloch);
            let g: Vec<ComplexMatrix> = joint
                .base()
                .effects()
                .iter()
                .map(|e| e.matrix().clone())
                .collect();
            let residual = margin_residual(&g, a, b).max(((criterion - 2.0) / 8.0).max(0.0));
            return Ok(FeasibilityStatus {
                verdict: Verdict::Feasible,
                joint: Some(joint),
                residual,
                iterations: 0,
                method: Method::QubitOracle,
            });
        }
        return Ok(FeasibilityStatus {
            verdict: Verdict::Infeasible,
            joint: None,
            residual: (criterion - 2.0) / 8.0,
            iterations: 0,
            method: Method::QubitOracle,
        });
    }

    joint_feasibility(a, b, tol, max_iter)
}

/// Result of the degree-of-compatibility bisection; `value` is the final
/// bracket midpoint.
#[derive(Clone, Copy, Debug)]
pub struct DegreeOfCompatibility {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// The largest unsharpness `p` at which `(A_p, B_p)` stays compatible,
/// located by bisection on `[0, 1]` to bracket width `tol`.
///
/// The `p → 0` end is compatible for every pair (a joint observable for
/// the half-smeared pair always exists), so the bracket cannot fail on
/// that side; an inconclusive solver verdict at a midpoint is treated as
/// infeasible, which can only under-report the degree.
pub fn degree_of_compatibility(
    a: &Observable,
    b: &Observable,
    tol: f64,
) -> Result<DegreeOfCompatibility> {
    check_dims(a, b, "degree_of_compatibility")?;
    if are_compatible(&a.unsharp(1.0)?, &b.unsharp(1.0)?, DEFAULT_TOL)?.is_feasible() {
        return Ok(DegreeOfCompatibility {
            value: 1.0,
            lower: 1.0,
            upper: 1.0,
        });
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..DEGREE_BISECTION_ITERS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let status = are_compatible(&a.unsharp(mid)?, &b.unsharp(mid)?, DEFAULT_TOL)?;
        if status.is_feasible() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(DegreeOfCompatibility {
        value: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
    })
}
