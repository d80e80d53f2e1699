//! JSON interchange for pairs: every field element is its integer coefficient
//! vector in base-p digits (constant term first), so files stay diffable and
//! state the field explicitly.

use serde::{Deserialize, Serialize};

use crate::constructions::NilpPair;
use crate::error::{Error, Result};
use crate::field::{Field, FieldCtx};
use crate::linalg::MatrixF;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    /// Monic modulus, constant term first.
    pub modulus: Vec<u32>,
}

impl FieldJson {
    pub fn of(field: &FieldCtx) -> Self {
        FieldJson {
            p: field.characteristic(),
            m: field.degree(),
            q: field.order(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn context(&self) -> Result<Field> {
        let field = FieldCtx::with_explicit_modulus(self.p, self.modulus.clone())?;
        if field.degree() != self.m || field.order() != self.q {
            return Err(Error::UnsupportedField(format!(
                "header p={} m={} q={} disagrees with modulus {:?}",
                self.p, self.m, self.q, self.modulus
            )));
        }
        Ok(field)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub field: FieldJson,
    pub n: usize,
    pub lambda: Vec<u32>,
    pub a: Vec<Vec<Vec<u32>>>,
    pub b: Vec<Vec<Vec<u32>>>,
}

impl PairJson {
    pub fn from_matrices(a: &MatrixF, b: &MatrixF, lambda: crate::Scalar) -> Self {
        PairJson {
            field: FieldJson::of(a.field()),
            n: a.rows(),
            lambda: a.field().coeffs(lambda),
            a: a.to_coeff_grid(),
            b: b.to_coeff_grid(),
        }
    }

    /// Decodes the matrices without checking any pair invariant.
    pub fn decode(&self) -> Result<(MatrixF, MatrixF, crate::Scalar)> {
        let field = self.field.context()?;
        let a = MatrixF::from_coeff_grid(&field, &self.a)?;
        let b = MatrixF::from_coeff_grid(&field, &self.b)?;
        for (name, m) in [("a", &a), ("b", &b)] {
            if m.rows() != self.n || m.cols() != self.n {
                return Err(Error::Shape(format!("{name} is {}x{}, header says n = {}", m.rows(), m.cols(), self.n)));
            }
        }
        let lambda = field.from_coeffs(&self.lambda)?;
        Ok((a, b, lambda))
    }
}

impl From<NilpPair> for PairJson {
    fn from(pair: NilpPair) -> Self {
        PairJson::from_matrices(&pair.a, &pair.b, pair.lambda)
    }
}

impl TryFrom<PairJson> for NilpPair {
    type Error = Error;
    fn try_from(json: PairJson) -> Result<Self> {
        let (a, b, lambda) = json.decode()?;
        NilpPair::new(a, b, lambda)
    }
}

pub fn pair_to_json(pair: &NilpPair) -> String {
    serde_json::to_string_pretty(&PairJson::from(pair.clone())).expect("pair serializes")
}

/// Parses and validates a pair.
pub fn pair_from_json(text: &str) -> Result<NilpPair> {
    let json: PairJson = serde_json::from_str(text).map_err(|e| Error::Precondition(format!("malformed pair JSON: {e}")))?;
    NilpPair::try_from(json)
}
