//! The layer taxonomy and classifiers.
//!
//! The nested families, strongest first:
//!
//! > broadcastable ⊆ one-side broadcastable ⊆ mutually nondisturbing
//! > ⊆ nondisturbing ⊆ compatible,
//!
//! with "incompatible" the bottom element meaning no layer was
//! certified. Verdicts carry lower-bound semantics: `strongest_layer` is
//! a layer the pair provably inhabits, certified by the evidence listed.
//! `Exact` verdicts — where the layer is pinned rather than bounded —
//! exist for non-trivial qubit pairs (mutual commutation decides all four
//! upper layers at once) and for sharp pairs (compatible iff mutually
//! commuting, which already implies broadcastability).

use serde::{Deserialize, Serialize};

use crate::channel::{BroadcastingChannel, Channel};
use crate::compatibility::{are_compatible, Method, Verdict};
use crate::error::{Error, Result};
use crate::instrument::{nondisturbance_by_luders, verify_ancilla_witness, Instrument};
use crate::observable::{mutually_commuting, Observable};
use crate::operator::simultaneous_eigenbasis;
use crate::DEFAULT_TOL;

/// Residual bound used when verifying constructed witnesses.
pub const WITNESS_TOL: f64 = 1e-10;

/// Layers ordered bottom (nothing certified) to top.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash,
)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Layer {
    Incompatible,
    Compatible,
    Nondisturbing,
    MutuallyNondisturbing,
    OneSideBroadcastable,
    Broadcastable,
}

impl Layer {
    /// The five proper layers, strongest first.
    pub const PROPER: [Layer; 5] = [
        Layer::Broadcastable,
        Layer::OneSideBroadcastable,
        Layer::MutuallyNondisturbing,
        Layer::Nondisturbing,
        Layer::Compatible,
    ];
}

impl std::fmt::Display for Layer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Layer::Incompatible => "INCOMPATIBLE",
            Layer::Compatible => "COMPATIBLE",
            Layer::Nondisturbing => "NONDISTURBING",
            Layer::MutuallyNondisturbing => "MUTUALLY_NONDISTURBING",
            Layer::OneSideBroadcastable => "ONE_SIDE_BROADCASTABLE",
            Layer::Broadcastable => "BROADCASTABLE",
        };
        f.write_str(s)
    }
}

/// Strips between consecutive layers: membership in one layer together
/// with certified exclusion from the next stronger one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stratum {
    WeaklyOneSideBroadcastable,
    WeaklyMutuallyNondisturbing,
    WeaklyNondisturbing,
    WeaklyCompatible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Certainty {
    Exact,
    CertifiedLowerBound,
}

/// Classification result for a pair of observables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayerVerdict {
    pub strongest_layer: Layer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_stratum: Option<Stratum>,
    pub certainty: Certainty,
    pub evidence: Vec<String>,
}

impl LayerVerdict {
    fn bottom() -> Self {
        LayerVerdict {
            strongest_layer: Layer::Incompatible,
            strict_stratum: None,
            certainty: Certainty::CertifiedLowerBound,
            evidence: Vec::new(),
        }
    }

    fn upgrade(&mut self, layer: Layer, evidence: String) {
        self.evidence.push(evidence);
        if layer > self.strongest_layer {
            self.strongest_layer = layer;
        }
    }
}

/// Externally supplied witnesses for [`classify_pair_general`].
#[derive(Clone, Debug)]
pub enum Witness {
    /// Checked for broadcasting both observables, then for the one-side
    /// conditions (first observable left, second right).
    Broadcaster(BroadcastingChannel),
    /// An instrument measuring the first observable; certifies
    /// nondisturbance of the second when its total map fixes it.
    MeasureFirst(Instrument),
    /// An instrument measuring the second observable without disturbing
    /// the first.
    MeasureSecond(Instrument),
    /// Ancilla witness for measuring the first observable without
    /// disturbing the second.
    AncillaFirst {
        channel: Channel,
        ancilla_observable: Observable,
    },
    /// Ancilla witness in the reverse order.
    AncillaSecond {
        channel: Channel,
        ancilla_observable: Observable,
    },
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

/// Builds the classical copier on a common eigenbasis of both
/// observables' effects and verifies it broadcasts both; the verification
/// makes correctness independent of the diagonalization path.
fn verified_common_copier(
    a: &Observable,
    b: &Observable,
) -> Result<Option<(BroadcastingChannel, f64)>> {
    let mut ops = Vec::with_capacity(a.n_outcomes() + b.n_outcomes());
    ops.extend(a.effects().iter().cloned());
    ops.extend(b.effects().iter().cloned());
    let basis = simultaneous_eigenbasis(&ops);
    let copier = BroadcastingChannel::copier_from_basis(&basis)?;
    let residual = copier
        .broadcast_residual(a)?
        .max(copier.broadcast_residual(b)?);
    if residual <= WITNESS_TOL {
        Ok(Some((copier, residual)))
    } else {
        Ok(None)
    }
}

/// Exact classification of a non-trivial qubit pair.
///
/// For such pairs mutual commutation, broadcastability, one-side
/// broadcastability and (mutual) nondisturbance all coincide, so the
/// verdict is exact: `BROADCASTABLE` when mutually commuting, otherwise
/// the pair sits strictly below the nondisturbance layer and only
/// compatibility remains to decide.
pub fn classify_qubit_pair(a: &Observable, b: &Observable) -> Result<LayerVerdict> {
    classify_qubit_pair_with_tol(a, b, DEFAULT_TOL)
}

pub fn classify_qubit_pair_with_tol(
    a: &Observable,
    b: &Observable,
    tol: f64,
) -> Result<LayerVerdict> {
    check_dims(a, b, "classify_qubit_pair")?;
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            context: "classify_qubit_pair",
            expected: "dim 2".into(),
            found: format!("dim {}", a.dim()),
        });
    }
    if a.is_trivial(tol) || b.is_trivial(tol) {
        return Err(Error::TrivialObservable);
    }

    if mutually_commuting(a, b, tol)? {
        // Mutual commutation of a non-trivial qubit pair forces each
        // observable to be commutative, so a copier on the common
        // eigenbasis broadcasts both.
        if let Some((_, residual)) = verified_common_copier(a, b)? {
            return Ok(LayerVerdict {
                strongest_layer: Layer::Broadcastable,
                strict_stratum: None,
                certainty: Certainty::Exact,
                evidence: vec![format!(
                    "mutually commuting non-trivial qubit pair; common-eigenbasis copier verified (dual residual {residual:.2e})"
                )],
            });
        }
        // Numerically near-commuting but the constructive check failed;
        // report honestly as a lower bound via the general path.
        let mut v = LayerVerdict::bottom();
        v.evidence.push(
            "mutual commutation within tolerance but copier verification failed".into(),
        );
        return Ok(v);
    }

    let status = are_compatible(a, b, tol)?;
    let method = match status.method {
        Method::SharpRule => "sharp rule",
        Method::QubitOracle => "qubit oracle",
        Method::Projection => "projection solver",
    };
    match status.verdict {
        Verdict::Feasible => Ok(LayerVerdict {
            strongest_layer: Layer::Compatible,
            strict_stratum: Some(Stratum::WeaklyCompatible),
            certainty: Certainty::Exact,
            evidence: vec![
                "not mutually commuting: qubit pair excluded from every layer above compatibility"
                    .into(),
                format!(
                    "compatible via {method} (residual {:.2e})",
                    status.residual
                ),
            ],
        }),
        Verdict::Infeasible => Ok(LayerVerdict {
            strongest_layer: Layer::Incompatible,
            strict_stratum: None,
            certainty: Certainty::Exact,
            evidence: vec![format!("incompatible via {method}")],
        }),
        Verdict::Inconclusive => Ok(LayerVerdict {
            strongest_layer: Layer::Incompatible,
            strict_stratum: None,
            certainty: Certainty::CertifiedLowerBound,
            evidence: vec![
                "not mutually commuting: excluded from every layer above compatibility".into(),
                format!(
                    "compatibility INCONCLUSIVE after {} projection iterations (deficit {:.2e})",
                    status.iterations, status.residual
                ),
            ],
        }),
    }
}

/// Certified-lower-bound classification for arbitrary dimension, with
/// optional externally supplied witnesses. Every rule that fires is
/// recorded in the evidence.
pub fn classify_pair_general(
    a: &Observable,
    b: &Observable,
    witnesses: &[Witness],
) -> Result<LayerVerdict> {
    classify_pair_general_with_tol(a, b, witnesses, DEFAULT_TOL)
}

pub fn classify_pair_general_with_tol(
    a: &Observable,
    b: &Observable,
    witnesses: &[Witness],
    tol: f64,
) -> Result<LayerVerdict> {
    check_dims(a, b, "classify_pair_general")?;

    let mut verdict =
        if a.dim() == 2 && !a.is_trivial(tol) && !b.is_trivial(tol) {
            classify_qubit_pair_with_tol(a, b, tol)?
        } else {
            LayerVerdict::bottom()
        };

    // An exact incompatibility verdict ends the matter; no witness can
    // overturn it.
    if verdict.certainty == Certainty::Exact
        && verdict.strongest_layer == Layer::Incompatible
    {
        apply_witnesses(&mut verdict, a, b, witnesses, true)?;
        return Ok(verdict);
    }

    let a_trivial = a.is_trivial(tol);
    let b_trivial = b.is_trivial(tol);

    // Commutative and mutually commuting: constructive copier.
    if verdict.strongest_layer < Layer::Broadcastable
        && a.is_commutative(tol)
        && b.is_commutative(tol)
        && mutually_commuting(a, b, tol)?
    {
        if let Some((_, residual)) = verified_common_copier(a, b)? {
            verdict.upgrade(
                Layer::Broadcastable,
                format!(
                    "commutative, mutually commuting pair; common-eigenbasis copier verified (dual residual {residual:.2e})"
                ),
            );
            // Sharp pairs are exactly decided: mutual commutation is also
            // necessary for their compatibility.
            if a.is_sharp(tol) && b.is_sharp(tol) {
                verdict.certainty = Certainty::Exact;
                verdict
                    .evidence
                    .push("sharp pair: mutual commutation is also necessary".into());
            }
        }
    }

    // A trivial member makes the pair one-side broadcastable via a
    // fresh-ancilla channel carrying the other observable through.
    if verdict.strongest_layer < Layer::OneSideBroadcastable && (a_trivial || b_trivial) {
        let maximally_mixed =
            crate::operator::HermitianOperator::identity(a.dim()).scale(1.0 / a.dim() as f64);
        let (witness, side) = if a_trivial {
            (BroadcastingChannel::fixed_left(&maximally_mixed)?, "left")
        } else {
            (BroadcastingChannel::fixed_right(&maximally_mixed)?, "right")
        };
        if witness.one_side_broadcasts(a, b, WITNESS_TOL)? {
            verdict.upgrade(
                Layer::OneSideBroadcastable,
                format!(
                    "trivial member: fixed-state channel (trivial side {side}) verified one-side broadcasting"
                ),
            );
        }
    }

    // Lüders sufficient tests, both orders.
    if verdict.strongest_layer < Layer::MutuallyNondisturbing {
        let first = nondisturbance_by_luders(a, b, WITNESS_TOL)?;
        let second = nondisturbance_by_luders(b, a, WITNESS_TOL)?;
        if first && second {
            verdict.upgrade(
                Layer::MutuallyNondisturbing,
                "Lüders instruments nondisturb in both orders".into(),
            );
        } else if first {
            verdict.upgrade(
                Layer::Nondisturbing,
                "Lüders instrument for the first observable nondisturbs the second".into(),
            );
        } else if second {
            verdict.upgrade(
                Layer::Nondisturbing,
                "Lüders instrument for the second observable nondisturbs the first".into(),
            );
        }
    }

    apply_witnesses(&mut verdict, a, b, witnesses, false)?;

    // Compatibility cascade, only if nothing stronger fired (every layer
    // above implies it).
    if verdict.strongest_layer == Layer::Incompatible {
        let status = are_compatible(a, b, tol)?;
        let method = match status.method {
            Method::SharpRule => "sharp rule",
            Method::QubitOracle => "qubit oracle",
            Method::Projection => "projection solver",
        };
        match status.verdict {
            Verdict::Feasible => verdict.upgrade(
                Layer::Compatible,
                format!("compatible via {method} (residual {:.2e})", status.residual),
            ),
            Verdict::Infeasible => {
                verdict
                    .evidence
                    .push(format!("incompatible via {method}"));
                verdict.certainty = Certainty::Exact;
            }
            Verdict::Inconclusive => verdict.evidence.push(format!(
                "compatibility INCONCLUSIVE after {} projection iterations (deficit {:.2e})",
                status.iterations, status.residual
            )),
        }
    }

    Ok(verdict)
}

fn apply_witnesses(
    verdict: &mut LayerVerdict,
    a: &Observable,
    b: &Observable,
    witnesses: &[Witness],
    exact_negative: bool,
) -> Result<()> {
    let mut mutually_by_witness = (false, false);
    for (k, witness) in witnesses.iter().enumerate() {
        match witness {
            Witness::Broadcaster(l) => {
                let both =
                    l.broadcasts(a, WITNESS_TOL)? && l.broadcasts(b, WITNESS_TOL)?;
                if both {
                    verdict.upgrade(
                        Layer::Broadcastable,
                        format!("witness {k}: channel broadcasts both observables"),
                    );
                } else if l.one_side_broadcasts(a, b, WITNESS_TOL)? {
                    verdict.upgrade(
                        Layer::OneSideBroadcastable,
                        format!("witness {k}: channel broadcasts one-side (first left, second right)"),
                    );
                } else {
                    verdict
                        .evidence
                        .push(format!("witness {k}: broadcast conditions failed"));
                }
            }
            Witness::MeasureFirst(inst) => {
                if inst.implements(a, WITNESS_TOL)? && inst.nondisturbs(b, WITNESS_TOL)? {
                    mutually_by_witness.0 = true;
                    verdict.upgrade(
                        Layer::Nondisturbing,
                        format!("witness {k}: instrument measures the first observable without disturbing the second"),
                    );
                } else {
                    verdict
                        .evidence
                        .push(format!("witness {k}: instrument conditions failed"));
                }
            }
            Witness::MeasureSecond(inst) => {
                if inst.implements(b, WITNESS_TOL)? && inst.nondisturbs(a, WITNESS_TOL)? {
                    mutually_by_witness.1 = true;
                    verdict.upgrade(
                        Layer::Nondisturbing,
                        format!("witness {k}: instrument measures the second observable without disturbing the first"),
                    );
                } else {
                    verdict
                        .evidence
                        .push(format!("witness {k}: instrument conditions failed"));
                }
            }
            Witness::AncillaFirst {
                channel,
                ancilla_observable,
            } => {
                if verify_ancilla_witness(channel, a, ancilla_observable, b, WITNESS_TOL)? {
                    mutually_by_witness.0 = true;
                    verdict.upgrade(
                        Layer::Nondisturbing,
                        format!("witness {k}: ancilla witness certifies first-without-disturbing-second"),
                    );
                } else {
                    verdict
                        .evidence
                        .push(format!("witness {k}: ancilla conditions failed"));
                }
            }
            Witness::AncillaSecond {
                channel,
                ancilla_observable,
            } => {
                if verify_ancilla_witness(channel, b, ancilla_observable, a, WITNESS_TOL)? {
                    mutually_by_witness.1 = true;
                    verdict.upgrade(
                        Layer::Nondisturbing,
                        format!("witness {k}: ancilla witness certifies second-without-disturbing-first"),
                    );
                } else {
                    verdict
                        .evidence
                        .push(format!("witness {k}: ancilla conditions failed"));
                }
            }
        }
    }
    if mutually_by_witness.0 && mutually_by_witness.1 {
        verdict.upgrade(
            Layer::MutuallyNondisturbing,
            "witnesses certify nondisturbance in both orders".into(),
        );
    }
    if exact_negative && verdict.strongest_layer > Layer::Incompatible {
        // A witness appearing to certify a layer for an exactly
        // incompatible pair is numerically inconsistent; keep the
        // negative verdict but flag it.
        verdict.strongest_layer = Layer::Incompatible;
        verdict
            .evidence
            .push("witness contradicted exact incompatibility; negative verdict kept".into());
    }
    Ok(())
}

/// Effect-wise convex mixture of two pairs.
pub fn mixture_pair(
    pair1: (&Observable, &Observable),
    pair2: (&Observable, &Observable),
    lambda: f64,
) -> Result<(Observable, Observable)> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "mixture weight must lie in [0, 1], got {lambda}"
        )));
    }
    let mix_one = |o1: &Observable, o2: &Observable, what: &str| -> Result<Observable> {
        if o1.dim() != o2.dim() {
            return Err(Error::DimensionMismatch {
                context: "mixture_pair",
                expected: format!("dim {}", o1.dim()),
                found: format!("dim {}", o2.dim()),
            });
        }
        if o1.n_outcomes() != o2.n_outcomes() {
            return Err(Error::OutcomeMismatch(format!(
                "{what}: {} vs {} outcomes",
                o1.n_outcomes(),
                o2.n_outcomes()
            )));
        }
        let effects = o1
            .effects()
            .iter()
            .zip(o2.effects())
            .map(|(e, f)| e.mix(f, lambda))
            .collect();
        Observable::new(effects)
    };
    Ok((
        mix_one(pair1.0, pair2.0, "first members")?,
        mix_one(pair1.1, pair2.1, "second members")?,
    ))
}

/// Per-layer bookkeeping for a transitivity check of `(a,b)`, `(b,c)`,
/// `(a,c)`.
#[derive(Clone, Debug, Serialize)]
pub struct TransitivityReport {
    pub verdict_ab: LayerVerdict,
    pub verdict_bc: LayerVerdict,
    pub verdict_ac: LayerVerdict,
    /// Layers `(a,c)` certifiably does not inhabit.
    pub excluded_ac: Vec<Layer>,
    /// Layers where `(a,b)` and `(b,c)` are certified members while
    /// `(a,c)` is certified out.
    pub violations: Vec<Layer>,
}

/// Classifies the three pairs and flags the layers where transitivity
/// fails. Exclusions for `(a,c)` come only from exact verdicts: exact
/// incompatibility excludes every layer, and an exact verdict generally
/// excludes everything strictly above it.
pub fn check_transitivity_triple(
    a: &Observable,
    b: &Observable,
    c: &Observable,
) -> Result<TransitivityReport> {
    let verdict_ab = classify_pair_general(a, b, &[])?;
    let verdict_bc = classify_pair_general(b, c, &[])?;
    let verdict_ac = classify_pair_general(a, c, &[])?;

    let mut excluded_ac = Vec::new();
    if verdict_ac.certainty == Certainty::Exact {
        for layer in Layer::PROPER {
            if layer > verdict_ac.strongest_layer {
                excluded_ac.push(layer);
            }
        }
    }

    let violations = excluded_ac
        .iter()
        .copied()
        .filter(|&layer| {
            verdict_ab.strongest_layer >= layer && verdict_bc.strongest_layer >= layer
        })
        .collect();

    Ok(TransitivityReport {
        verdict_ab,
        verdict_bc,
        verdict_ac,
        excluded_ac,
        violations,
    })
}
