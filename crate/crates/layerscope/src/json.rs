//! JSON interchange formats.
//!
//! Matrices serialize as nested arrays of `[re, im]` pairs, row-major:
//!
//! ```json
//! { "dim": 2, "effects": [[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]], ...] }
//! ```
//!
//! Documents:
//! * observable — `{ "dim", "effects" }`, joint observables add
//!   `"x_size"` and `"y_size"`;
//! * channel — `{ "dim_in", "dim_out", "choi" }` or
//!   `{ "dim_in", "dim_out", "kraus": [matrix, ...] }`;
//! * instrument — `{ "dim", "outcome_maps": [choi, ...] }`;
//! * witness — tagged by `"kind"`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{BroadcastingChannel, Channel};
use crate::error::{Error, Result};
use crate::instrument::Instrument;
use crate::layers::Witness;
use crate::observable::{JointObservable, Observable};
use crate::operator::{ComplexMatrix, HermitianOperator};

pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.at(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

pub fn doc_to_matrix(doc: &MatrixDoc) -> Result<ComplexMatrix> {
    if doc.is_empty() || doc[0].is_empty() {
        return Err(Error::InvalidParameter("empty matrix document".into()));
    }
    let rows = doc.len();
    let cols = doc[0].len();
    if doc.iter().any(|row| row.len() != cols) {
        return Err(Error::InvalidParameter(
            "ragged rows in matrix document".into(),
        ));
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (i, row) in doc.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m.set(i, j, Complex64::new(re, im));
        }
    }
    Ok(m)
}

#[derive(Serialize, Deserialize)]
pub struct ObservableDoc {
    pub dim: usize,
    pub effects: Vec<MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_size: Option<usize>,
}

impl ObservableDoc {
    pub fn from_observable(o: &Observable) -> Self {
        ObservableDoc {
            dim: o.dim(),
            effects: o.effects().iter().map(|e| matrix_to_doc(e.matrix())).collect(),
            x_size: None,
            y_size: None,
        }
    }

    pub fn from_joint(j: &JointObservable) -> Self {
        let mut doc = Self::from_observable(j.base());
        doc.x_size = Some(j.x_size());
        doc.y_size = Some(j.y_size());
        doc
    }

    /// Builds and validates the observable at `tol`.
    pub fn into_observable(&self, tol: f64) -> Result<Observable> {
        let mut effects = Vec::with_capacity(self.effects.len());
        for (k, doc) in self.effects.iter().enumerate() {
            let m = doc_to_matrix(doc)?;
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(Error::DimensionMismatch {
                    context: "ObservableDoc",
                    expected: format!("{0}x{0}", self.dim),
                    found: format!("{}x{} at effect {}", m.rows(), m.cols(), k + 1),
                });
            }
            effects.push(HermitianOperator::with_tolerance(m, tol.max(1e-12))?);
        }
        Observable::with_tolerance(effects, tol)
    }

    /// Interprets the document as a joint observable when the outcome
    /// grid is present.
    pub fn into_joint(&self, tol: f64) -> Result<Option<JointObservable>> {
        match (self.x_size, self.y_size) {
            (Some(x), Some(y)) => {
                let base = self.into_observable(tol)?;
                Ok(Some(JointObservable::new(base, x, y)?))
            }
            (None, None) => Ok(None),
            _ => Err(Error::InvalidParameter(
                "joint observable documents need both x_size and y_size".into(),
            )),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct ChannelDoc {
    pub dim_in: usize,
    pub dim_out: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choi: Option<MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixDoc>>,
}

impl ChannelDoc {
    pub fn from_channel(c: &Channel) -> Self {
        ChannelDoc {
            dim_in: c.dim_in(),
            dim_out: c.dim_out(),
            choi: Some(matrix_to_doc(c.choi().matrix())),
            kraus: None,
        }
    }

    pub fn into_channel(&self) -> Result<Channel> {
        match (&self.choi, &self.kraus) {
            (Some(choi), None) => {
                let m = doc_to_matrix(choi)?;
                Channel::from_choi(
                    HermitianOperator::with_tolerance(m, 1e-9)?,
                    self.dim_in,
                    self.dim_out,
                )
            }
            (None, Some(kraus)) => {
                let ops: Vec<ComplexMatrix> =
                    kraus.iter().map(doc_to_matrix).collect::<Result<_>>()?;
                Channel::from_kraus(&ops, self.dim_in, self.dim_out)
            }
            _ => Err(Error::InvalidParameter(
                "channel documents need exactly one of 'choi' or 'kraus'".into(),
            )),
        }
    }

    pub fn into_broadcasting_channel(&self) -> Result<BroadcastingChannel> {
        BroadcastingChannel::new(self.into_channel()?)
    }
}

#[derive(Serialize, Deserialize)]
pub struct InstrumentDoc {
    pub dim: usize,
    pub outcome_maps: Vec<MatrixDoc>,
}

impl InstrumentDoc {
    pub fn from_instrument(inst: &Instrument) -> Self {
        InstrumentDoc {
            dim: inst.dim(),
            outcome_maps: inst
                .outcome_maps()
                .iter()
                .map(|c| matrix_to_doc(c.matrix()))
                .collect(),
        }
    }

    pub fn into_instrument(&self) -> Result<Instrument> {
        let chois = self
            .outcome_maps
            .iter()
            .map(|doc| Ok(HermitianOperator::with_tolerance(doc_to_matrix(doc)?, 1e-9)?))
            .collect::<Result<Vec<_>>>()?;
        Instrument::from_chois(self.dim, chois)
    }
}

/// Witness document: `kind` selects the check, the matching payload
/// fields must be present.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessDoc {
    Broadcaster {
        channel: ChannelDoc,
    },
    MeasureFirst {
        instrument: InstrumentDoc,
    },
    MeasureSecond {
        instrument: InstrumentDoc,
    },
    AncillaFirst {
        channel: ChannelDoc,
        ancilla_observable: ObservableDoc,
    },
    AncillaSecond {
        channel: ChannelDoc,
        ancilla_observable: ObservableDoc,
    },
}

impl WitnessDoc {
    pub fn into_witness(&self, tol: f64) -> Result<Witness> {
        Ok(match self {
            WitnessDoc::Broadcaster { channel } => {
                Witness::Broadcaster(channel.into_broadcasting_channel()?)
            }
            WitnessDoc::MeasureFirst { instrument } => {
                Witness::MeasureFirst(instrument.into_instrument()?)
            }
            WitnessDoc::MeasureSecond { instrument } => {
                Witness::MeasureSecond(instrument.into_instrument()?)
            }
            WitnessDoc::AncillaFirst {
                channel,
                ancilla_observable,
            } => Witness::AncillaFirst {
                channel: channel.into_channel()?,
                ancilla_observable: ancilla_observable.into_observable(tol)?,
            },
            WitnessDoc::AncillaSecond {
                channel,
                ancilla_observable,
            } => Witness::AncillaSecond {
                channel: channel.into_channel()?,
                ancilla_observable: ancilla_observable.into_observable(tol)?,
            },
        })
    }
}

/// Parses an observable document from JSON text.
pub fn observable_from_json(text: &str, tol: f64) -> Result<Observable> {
    let doc: ObservableDoc = serde_json::from_str(text)?;
    doc.into_observable(tol)
}

pub fn observable_doc_from_json(text: &str) -> Result<ObservableDoc> {
    Ok(serde_json::from_str(text)?)
}

pub fn channel_from_json(text: &str) -> Result<Channel> {
    let doc: ChannelDoc = serde_json::from_str(text)?;
    doc.into_channel()
}

pub fn broadcasting_channel_from_json(text: &str) -> Result<BroadcastingChannel> {
    let doc: ChannelDoc = serde_json::from_str(text)?;
    doc.into_broadcasting_channel()
}

pub fn instrument_from_json(text: &str) -> Result<Instrument> {
    let doc: InstrumentDoc = serde_json::from_str(text)?;
    doc.into_instrument()
}

pub fn witness_from_json(text: &str, tol: f64) -> Result<Witness> {
    let doc: WitnessDoc = serde_json::from_str(text)?;
    doc.into_witness(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observable_round_trip() {
        let o = Observable::qubit_binary([0.6, 0.0, 0.8]).unwrap();
        let doc = ObservableDoc::from_observable(&o);
        let text = serde_json::to_string(&doc).unwrap();
        let back = observable_from_json(&text, 1e-9).unwrap();
        for (e, f) in o.effects().iter().zip(back.effects()) {
            assert!(e.matrix().max_abs_diff(f.matrix()) < 1e-15);
        }
    }

    #[test]
    fn channel_round_trip_choi_and_kraus() {
        let deph = Channel::dephasing_in_basis(&ComplexMatrix::identity(2)).unwrap();
        let doc = ChannelDoc::from_channel(&deph);
        let text = serde_json::to_string(&doc).unwrap();
        let back = channel_from_json(&text).unwrap();
        assert!(back.choi().matrix().max_abs_diff(deph.choi().matrix()) < 1e-15);

        let kraus_doc = ChannelDoc {
            dim_in: 2,
            dim_out: 2,
            choi: None,
            kraus: Some(vec![matrix_to_doc(&ComplexMatrix::identity(2))]),
        };
        let id = kraus_doc.into_channel().unwrap();
        assert!(id
            .choi()
            .matrix()
            .max_abs_diff(Channel::identity(2).choi().matrix())
            < 1e-15);
    }

    #[test]
    fn invalid_documents_are_rejected() {
        // Effects summing to 2I.
        let i2 = matrix_to_doc(&ComplexMatrix::identity(2));
        let doc = ObservableDoc {
            dim: 2,
            effects: vec![i2.clone(), i2],
            x_size: None,
            y_size: None,
        };
        let text = serde_json::to_string(&doc).unwrap();
        let err = observable_from_json(&text, 1e-9).unwrap_err();
        assert!(err.to_string().contains("identity"));

        // Channel with both representations.
        let bad = r#"{"dim_in":2,"dim_out":2}"#;
        assert!(channel_from_json(bad).is_err());

        // Malformed JSON reports a location.
        let err = observable_from_json("{ not json", 1e-9).unwrap_err();
        assert!(err.to_string().contains("line"));
    }

    #[test]
    fn joint_documents_carry_the_outcome_grid() {
        let g = crate::scenario::fixtures::xy_joint();
        let doc = ObservableDoc::from_joint(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let parsed: ObservableDoc = serde_json::from_str(&text).unwrap();
        let joint = parsed.into_joint(1e-9).unwrap().unwrap();
        assert_eq!(joint.x_size(), 2);
        assert_eq!(joint.y_size(), 2);
    }

    #[test]
    fn witness_documents_decode() {
        let copier =
            BroadcastingChannel::copier_from_basis(&ComplexMatrix::identity(2)).unwrap();
        let doc = WitnessDoc::Broadcaster {
            channel: ChannelDoc::from_channel(copier.channel()),
        };
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"kind\":\"broadcaster\""));
        let witness = witness_from_json(&text, 1e-9).unwrap();
        let z = Observable::qubit_binary([0.0, 0.0, 1.0]).unwrap();
        match witness {
            Witness::Broadcaster(l) => assert!(l.broadcasts(&z, 1e-10).unwrap()),
            _ => panic!("wrong witness kind"),
        }
    }
}
