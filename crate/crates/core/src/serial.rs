//! JSON forms of models, monads, nets and sample documents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::{Geometry, Parity};
use crate::matrix::Matrix;
use crate::models::{self, Model, QuadricModel, V22Model, V5Model, XPoint};
use crate::monads::MonadData;
use crate::tensor::{Duality, Net, Tensor3};

/// Version written into every document.
pub const FORMAT: u32 = 1;

fn check_reduced(p: u64, xs: impl IntoIterator<Item = u64>) -> Result<()> {
    if xs.into_iter().any(|x| x >= p) {
        return Err(Error::InvalidField(format!("entry not reduced modulo {p}")));
    }
    Ok(())
}

fn matrix_rows(m: &Matrix<u64>) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn matrix_from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Matrix<u64>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("ragged matrix".into()));
    }
    check_reduced(p, rows.iter().flatten().copied())?;
    Ok(Matrix::from_rows(rows))
}

/// A point of a threefold. `V22` points are stored by `g`; the ideal is
/// recomputed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "lowercase")]
pub enum PointJson {
    Quadric { p: [Vec<u64>; 2] },
    V5 { lambda: [Vec<u64>; 2] },
    V22 { g: Vec<Vec<u64>> },
}

impl PointJson {
    pub fn from_point(x: &XPoint) -> Self {
        match x {
            XPoint::Quadric { p } => PointJson::Quadric { p: p.clone() },
            XPoint::V5 { lambda } => PointJson::V5 { lambda: lambda.clone() },
            XPoint::V22 { g, .. } => PointJson::V22 { g: matrix_rows(g) },
        }
    }

    pub fn to_point(&self, f: &PrimeField) -> Result<XPoint> {
        let p = f.modulus();
        match self {
            PointJson::Quadric { p: v } => {
                check_reduced(p, v.iter().flatten().copied())?;
                Ok(XPoint::Quadric { p: v.clone() })
            }
            PointJson::V5 { lambda } => {
                check_reduced(p, lambda.iter().flatten().copied())?;
                Ok(XPoint::V5 { lambda: lambda.clone() })
            }
            PointJson::V22 { g } => models::twisted_cubic(f, matrix_from_rows(p, g)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub geometry: Geometry,
    pub prime: u64,
    pub seed: Option<u64>,
    #[serde(rename = "B_gram_matrices")]
    pub b_gram_matrices: Vec<Vec<Vec<u64>>>,
    pub seeded_points: Vec<PointJson>,
}

impl ModelJson {
    pub fn from_model(model: &Model, seed: Option<u64>) -> Self {
        let seeded = match model {
            Model::V22(m) => m.seeded.iter().map(PointJson::from_point).collect(),
            _ => Vec::new(),
        };
        ModelJson {
            geometry: model.geometry(),
            prime: model.field().modulus(),
            seed,
            b_gram_matrices: model.grams().iter().map(matrix_rows).collect(),
            seeded_points: seeded,
        }
    }

    pub fn to_model(&self) -> Result<Model> {
        let f = PrimeField::new(self.prime)?;
        let grams = self
            .b_gram_matrices
            .iter()
            .map(|g| matrix_from_rows(self.prime, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(match self.geometry {
            Geometry::Quadric => Model::Quadric(QuadricModel::new(f)?),
            Geometry::V5 => Model::V5(V5Model::new(f, grams)?),
            Geometry::V22 => {
                let seeded = self
                    .seeded_points
                    .iter()
                    .map(|x| x.to_point(&f))
                    .collect::<Result<Vec<_>>>()?;
                Model::V22(V22Model::new(f, grams, seeded)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadJson {
    pub geometry: Geometry,
    pub k: usize,
    pub prime: u64,
    #[serde(rename = "dimI")]
    pub dim_i: usize,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    pub parity: Parity,
    /// Row-major `dim W × dim W`.
    #[serde(rename = "D")]
    pub d: Vec<u64>,
    /// `dim I × dim W × dim U`.
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<u64>>>,
}

impl MonadJson {
    pub fn from_monad(m: &MonadData) -> Self {
        MonadJson {
            geometry: m.geometry,
            k: m.k,
            prime: m.field.modulus(),
            dim_i: m.a.dim_i(),
            dim_w: m.a.dim_w(),
            parity: m.d.parity(),
            d: m.d.matrix().data().to_vec(),
            a: m.a.to_nested(),
        }
    }

    pub fn to_monad(&self) -> Result<MonadData> {
        let f = PrimeField::new(self.prime)?;
        check_reduced(self.prime, self.d.iter().copied())?;
        check_reduced(self.prime, self.a.iter().flatten().flatten().copied())?;
        if self.d.len() != self.dim_w * self.dim_w {
            return Err(Error::Dimension("D must be dimW x dimW".into()));
        }
        let a = Tensor3::from_nested(&self.a)?;
        if (a.dim_i(), a.dim_w()) != (self.dim_i, self.dim_w) {
            return Err(Error::Dimension("A does not match dimI, dimW".into()));
        }
        let d = Duality::new(&f, Matrix::new(self.dim_w, self.dim_w, self.d.clone()), self.parity)?;
        MonadData::new(self.geometry, self.k, f, a, d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetJson {
    pub geometry: Geometry,
    pub k: usize,
    pub prime: u64,
    #[serde(rename = "B_gram")]
    pub b_gram: Vec<Vec<Vec<u64>>>,
    /// `c[i][j][b]`.
    pub coefficients: Vec<Vec<Vec<u64>>>,
}

impl NetJson {
    pub fn from_net(net: &Net<u64>, f: &PrimeField) -> Self {
        NetJson {
            geometry: net.geometry(),
            k: net.k(),
            prime: f.modulus(),
            b_gram: net.grams().iter().map(matrix_rows).collect(),
            coefficients: net.coeffs().to_vec(),
        }
    }

    pub fn to_net(&self) -> Result<(Net<u64>, PrimeField)> {
        let f = PrimeField::new(self.prime)?;
        let grams = self
            .b_gram
            .iter()
            .map(|g| matrix_from_rows(self.prime, g))
            .collect::<Result<Vec<_>>>()?;
        check_reduced(self.prime, self.coefficients.iter().flatten().flatten().copied())?;
        let net = Net::new(&f, self.geometry, grams, self.coefficients.clone())?;
        if net.k() != self.k {
            return Err(Error::Dimension("coefficient array does not match k".into()));
        }
        Ok((net, f))
    }
}

/// Output of `sample`, input of `validate` and the other monad commands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDocument {
    pub format: u32,
    pub geometry: Geometry,
    pub k: usize,
    pub prime: u64,
    pub seed: u64,
    pub model: ModelJson,
    pub monad: MonadJson,
    /// Present when the monad was derived from a net.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub net: Option<NetJson>,
    /// Root counts of pencils rejected while sampling the net.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected_pencils: Vec<usize>,
}

impl SampleDocument {
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SampleDocument = serde_json::from_str(s)?;
        if doc.format != FORMAT {
            return Err(Error::Unsupported(format!("document format {} (expected {FORMAT})", doc.format)));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Model, monad and net, with the net (if any) checked against the monad.
    pub fn load(&self) -> Result<(Model, MonadData, Option<Net<u64>>)> {
        let model = self.model.to_model()?;
        let monad = self.monad.to_monad()?;
        if monad.geometry != model.geometry() || monad.field != model.field() {
            return Err(Error::Dimension("monad and model disagree on geometry or prime".into()));
        }
        let net = match &self.net {
            Some(nj) => {
                let (net, f) = nj.to_net()?;
                if net.grams() != model.grams() {
                    return Err(Error::Dimension("net and model carry different B".into()));
                }
                if monad.reassemble() != net.ambient(&f) {
                    return Err(Error::Degenerate("monad does not reassemble the net".into()));
                }
                Some(net)
            }
            None => None,
        };
        Ok((model, monad, net))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monads;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn monad_round_trip() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = monads::sample_quadric_monad(4, f, &mut rng).unwrap();
        let j = MonadJson::from_monad(&m);
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains("\"dimI\":3") && s.contains("\"D\":"));
        let back: MonadJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_monad().unwrap(), m);
    }

    #[test]
    fn v22_model_round_trip_is_exact() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let model = Model::build(Geometry::V22, f, &mut rng).unwrap();
        let j = ModelJson::from_model(&model, Some(2));
        let s = serde_json::to_string(&j).unwrap();
        let back: ModelJson = serde_json::from_str(&s).unwrap();
        let again = ModelJson::from_model(&back.to_model().unwrap(), Some(2));
        assert_eq!(serde_json::to_string(&again).unwrap(), s);
    }

    #[test]
    fn net_document_round_trip() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let model = Model::build(Geometry::V5, f, &mut rng).unwrap();
        let Model::V5(v5) = &model else { unreachable!() };
        let s = monads::sample_v5_net(3, v5, &mut rng).unwrap();
        let m = monads::net_to_monad(&f, &s.net).unwrap();
        let doc = SampleDocument {
            format: FORMAT,
            geometry: Geometry::V5,
            k: 3,
            prime: 32003,
            seed: 3,
            model: ModelJson::from_model(&model, Some(3)),
            monad: MonadJson::from_monad(&m),
            net: Some(NetJson::from_net(&s.net, &f)),
            rejected_pencils: s.rejected_pencils,
        };
        let text = doc.to_json().unwrap();
        let back = SampleDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        let (_, m2, n2) = back.load().unwrap();
        assert_eq!(m2, m);
        assert_eq!(n2.unwrap(), s.net);
    }

    #[test]
    fn rejects_unreduced_and_wrong_format() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = monads::sample_quadric_monad(2, f, &mut rng).unwrap();
        let mut j = MonadJson::from_monad(&m);
        j.a[0][0][0] = 32003;
        assert!(matches!(j.to_monad(), Err(Error::InvalidField(_))));
        let mut j = MonadJson::from_monad(&m);
        j.dim_w = 3;
        assert!(j.to_monad().is_err());
        assert!(SampleDocument::from_json("{\"format\": 2}").is_err());
    }
}
