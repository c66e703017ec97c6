//! Text matrix documents.
//!
//! A dense matrix is a JSON object `{"rows": r, "cols": c, "data": [[re, im], …]}`
//! with `data` in row-major order. A block-diagonal matrix is
//! `{"blocks": [doc, doc, …]}`, optionally also carrying the total `rows` and
//! `cols`. Values are parsed as IEEE doubles.

use serde::{Deserialize, Serialize};

use super::{BlockMat, CMat, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MatrixDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<MatrixDoc>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Dense(CMat),
    Blocks(BlockMat),
}

impl MatrixFile {
    /// Dense view; block matrices become their block-diagonal embedding.
    pub fn into_dense(self) -> CMat {
        match self {
            MatrixFile::Dense(m) => m,
            MatrixFile::Blocks(b) => b.to_dense(),
        }
    }
}

impl From<&CMat> for MatrixDoc {
    fn from(m: &CMat) -> Self {
        MatrixDoc {
            rows: Some(m.rows()),
            cols: Some(m.cols()),
            data: Some(m.as_slice().iter().map(|z| [z.re, z.im]).collect()),
            blocks: None,
        }
    }
}

impl From<&BlockMat> for MatrixDoc {
    fn from(b: &BlockMat) -> Self {
        MatrixDoc {
            rows: Some(b.dim()),
            cols: Some(b.dim()),
            data: None,
            blocks: Some(b.blocks().iter().map(MatrixDoc::from).collect()),
        }
    }
}

impl MatrixDoc {
    pub fn to_dense(&self) -> Result<CMat> {
        match self.to_file()? {
            MatrixFile::Dense(m) => Ok(m),
            MatrixFile::Blocks(_) => Err(Error::Format(
                "expected a dense matrix, found blocks".into(),
            )),
        }
    }

    pub fn to_file(&self) -> Result<MatrixFile> {
        if let Some(blocks) = &self.blocks {
            if self.data.is_some() {
                return Err(Error::Format("document has both data and blocks".into()));
            }
            let dense = blocks
                .iter()
                .map(MatrixDoc::to_dense)
                .collect::<Result<Vec<_>>>()?;
            let b = BlockMat::new(dense)?;
            for (field, v) in [("rows", self.rows), ("cols", self.cols)] {
                if let Some(v) = v {
                    if v != b.dim() {
                        return Err(Error::Format(format!(
                            "{field} = {v} but blocks sum to {}",
                            b.dim()
                        )));
                    }
                }
            }
            return Ok(MatrixFile::Blocks(b));
        }
        let rows = self
            .rows
            .ok_or_else(|| Error::Format("missing field `rows`".into()))?;
        let cols = self
            .cols
            .ok_or_else(|| Error::Format("missing field `cols`".into()))?;
        let data = self
            .data
            .as_ref()
            .ok_or_else(|| Error::Format("missing field `data`".into()))?;
        let entries = data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(MatrixFile::Dense(CMat::new(rows, cols, entries)?))
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    doc.to_file()
}

pub fn matrix_to_string(m: &CMat) -> String {
    serde_json::to_string_pretty(&MatrixDoc::from(m)).expect("matrix serializes")
}

pub fn blocks_to_string(b: &BlockMat) -> String {
    serde_json::to_string_pretty(&MatrixDoc::from(b)).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sample::{sample, SampleKind};

    #[test]
    fn dense_round_trip() {
        let a = sample(SampleKind::Ginibre, 3, 1).unwrap();
        let back = parse_matrix(&matrix_to_string(&a)).unwrap();
        assert_eq!(back, MatrixFile::Dense(a));
    }

    #[test]
    fn parses_literal_document() {
        let text = r#"{"rows": 2, "cols": 2,
            "data": [[1, 0], [0, 0], [0, 0.5], [0, 0]]}"#;
        let m = parse_matrix(text).unwrap().into_dense();
        assert_eq!(m[(1, 0)], C64::new(0.0, 0.5));
    }

    #[test]
    fn block_documents() {
        let b = BlockMat::new(vec![CMat::identity(2), CMat::unit(1, 0, 0)]).unwrap();
        let back = parse_matrix(&blocks_to_string(&b)).unwrap();
        assert_eq!(back, MatrixFile::Blocks(b));
        let bad = r#"{"rows": 5, "blocks": [{"rows":1,"cols":1,"data":[[1,0]]}]}"#;
        assert!(matches!(parse_matrix(bad), Err(Error::Format(_))));
    }

    #[test]
    fn malformed_documents() {
        assert!(parse_matrix("{\"rows\": 2}").is_err());
        assert!(matches!(
            parse_matrix(r#"{"rows":1,"cols":2,"data":[[1,0]]}"#),
            Err(Error::EntryCount { .. })
        ));
        assert!(parse_matrix("not json").is_err());
    }
}
