//! JSON file formats: flip files and the reports written by the command-line tool.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{ClassifiedFlip, FlipClass};
use crate::error::{Error, Result};
use crate::field::{FieldParams, Fq2};
use crate::geometry::{Geometry, Variant};
use crate::linalg::{Matrix, Vector};
use crate::semilinear::SemilinearMap;
use crate::space::{HermitianSpace, Twist};
use crate::stabilizer::{predicted_group, GroupDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauName {
    Id,
    Frobenius,
}

impl From<Twist> for TauName {
    fn from(t: Twist) -> Self {
        match t {
            Twist::Identity => TauName::Id,
            Twist::Frobenius => TauName::Frobenius,
        }
    }
}

impl From<TauName> for Twist {
    fn from(t: TauName) -> Self {
        match t {
            TauName::Id => Twist::Identity,
            TauName::Frobenius => Twist::Frobenius,
        }
    }
}

/// `{"q", "n", "tau", "matrix"}` with entries `[a0, a1]` meaning `a0 + a1·ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipFile {
    pub q: u32,
    pub n: usize,
    pub tau: TauName,
    pub matrix: Vec<Vec<[u32; 2]>>,
}

pub fn encode_vector(v: &[Fq2]) -> Vec<[u32; 2]> {
    v.iter().map(|a| a.components()).collect()
}

pub fn decode_vector(field: FieldParams, row: &[[u32; 2]]) -> Result<Vector> {
    row.iter()
        .map(|&[a0, a1]| {
            field.elem_checked(a0, a1).map_err(|_| {
                Error::Malformed(format!("entry [{a0}, {a1}] is not reduced mod {}", field.q()))
            })
        })
        .collect()
}

impl FlipFile {
    pub fn from_map(space: &HermitianSpace, map: &SemilinearMap) -> Self {
        Self {
            q: space.field().q(),
            n: space.n(),
            tau: map.tau().into(),
            matrix: map.matrix().to_rows().iter().map(|r| encode_vector(r)).collect(),
        }
    }

    /// The space and map described by the file. Invalid `q` or `n` give
    /// `NotOddPrime`/`InvalidParams`; a badly shaped or singular matrix gives `Malformed`.
    pub fn to_map(&self) -> Result<(HermitianSpace, SemilinearMap)> {
        let field = FieldParams::new(self.q)?;
        let space = HermitianSpace::standard(self.n, field)?;
        let dim = space.dim();
        if self.matrix.len() != dim || self.matrix.iter().any(|r| r.len() != dim) {
            return Err(Error::Malformed(format!("matrix must be {dim} x {dim}")));
        }
        let rows = self
            .matrix
            .iter()
            .map(|r| decode_vector(field, r))
            .collect::<Result<Vec<_>>>()?;
        let mat = Matrix::from_rows(field, &rows, dim)?;
        let map = SemilinearMap::new(mat, self.tau.into())
            .map_err(|e| Error::Malformed(format!("matrix: {e}")))?;
        Ok((space, map))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    fs::write(path, to_json(value))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub q: u32,
    pub n: usize,
    pub class: FlipClass,
    /// `1` in class I, `α` in class II, `1` in class III, `λ` in class IV.
    pub scalar: [u32; 2],
    /// Matrix and twist of the normalised flip.
    pub normalized: FlipFile,
    /// Rows `e_1, …, e_n, f_1, …, f_n`.
    pub basis: Vec<Vec<[u32; 2]>>,
    pub group: GroupDescriptor,
}

impl ClassifyReport {
    pub fn new(flip: &ClassifiedFlip) -> Self {
        let space = flip.space();
        Self {
            q: space.field().q(),
            n: space.n(),
            class: flip.class,
            scalar: flip.scalar.components(),
            normalized: FlipFile::from_map(space, &flip.map),
            basis: flip.basis.iter().map(|b| encode_vector(b)).collect(),
            group: predicted_group(flip),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscCount {
    pub dim: usize,
    pub square: usize,
    pub non_square: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub q: u32,
    pub n: usize,
    pub class: FlipClass,
    pub variant: Variant,
    /// Object counts for dimensions `1..=n`.
    pub counts_by_dim: Vec<usize>,
    /// Empty for linear flips.
    pub disc_histogram: Vec<DiscCount>,
    /// `null` when the geometry is too large for incidence computations.
    pub transversal: Option<bool>,
    /// Distinct dimension sequences of maximal flags.
    pub maximal_flag_types: Option<Vec<Vec<usize>>>,
}

impl GeometryReport {
    pub fn new(flip: &ClassifiedFlip, geom: &Geometry) -> Self {
        let disc_histogram = if flip.is_linear() {
            Vec::new()
        } else {
            geom.disc_histogram_by_dim()
                .into_iter()
                .enumerate()
                .map(|(i, (square, non_square))| DiscCount { dim: i + 1, square, non_square })
                .collect()
        };
        let types = geom.incidence_feasible().then(|| {
            let mut t = geom.maximal_flag_types();
            t.sort();
            t.dedup();
            t
        });
        let want: Vec<usize> = (1..=geom.n).collect();
        Self {
            q: flip.space().field().q(),
            n: flip.n(),
            class: flip.class,
            variant: geom.variant,
            counts_by_dim: geom.counts_by_dim(),
            disc_histogram,
            transversal: types.as_ref().map(|t| !t.is_empty() && t.iter().all(|f| *f == want)),
            maximal_flag_types: types,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{canonical_flip, classify};

    #[test]
    fn canonical_class_one_file() {
        let s = HermitianSpace::standard(1, FieldParams::new(3).unwrap()).unwrap();
        let file = FlipFile::from_map(&s, &canonical_flip(&s, FlipClass::I));
        let json = serde_json::to_string(&file).unwrap();
        assert_eq!(json, r#"{"q":3,"n":1,"tau":"id","matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}"#);
    }

    #[test]
    fn flip_files_round_trip() {
        for class in FlipClass::ALL {
            let s = HermitianSpace::standard(2, FieldParams::new(5).unwrap()).unwrap();
            let f = canonical_flip(&s, class);
            let text = to_json(&FlipFile::from_map(&s, &f));
            let (s2, f2) = FlipFile::parse(&text).unwrap().to_map().unwrap();
            assert_eq!((s2, f2.clone()), (s.clone(), f));
            assert_eq!(classify(&s, &f2).unwrap().class, class);
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        let bad = [
            r#"{"q":3,"n":1,"tau":"id","matrix":[[[0,0],[1,0]]]}"#,
            r#"{"q":3,"n":1,"tau":"id","matrix":[[[0,0],[3,0]],[[1,0],[0,0]]]}"#,
            r#"{"q":3,"n":1,"tau":"sigma","matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}"#,
            r#"{"q":3,"n":1,"tau":"id","matrix":[[[0,0],[0,0]],[[1,0],[0,0]]]}"#,
            r#"{"q":3,"n":1,"tau":"id","matr"#,
        ];
        for text in bad {
            let r = FlipFile::parse(text).and_then(|f| f.to_map());
            assert!(matches!(r, Err(Error::Malformed(_))), "{text}");
        }
        let q4 = r#"{"q":4,"n":1,"tau":"id","matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}"#;
        assert!(matches!(FlipFile::parse(q4).unwrap().to_map(), Err(Error::NotOddPrime(4))));
    }
}
