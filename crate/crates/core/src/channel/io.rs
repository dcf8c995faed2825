//! JSON channel document.
//!
//! ```json
//! { "dim_in": 2, "dim_out": 2,
//!   "kraus": [ [[[1,0],[0,0]], [[0,0],[1,0]]] ],
//!   "partition": [1, 1] }
//! ```
//!
//! Matrices are row-major nested arrays; each scalar is a `[re, im]` pair.
//! `partition` is optional.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
}

impl ChannelDocument {
    pub fn from_channel(ch: &KrausChannel<f64>, partition: Option<Vec<usize>>) -> Self {
        let kraus = ch
            .kraus()
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Self {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus,
            partition,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel document serializes")
    }

    /// Builds the channel, checking every operator against the declared shape.
    pub fn to_channel(&self) -> Result<KrausChannel<f64>> {
        if self.kraus.is_empty() {
            return Err(Error::Parse("kraus: empty list".into()));
        }
        let mut mats = Vec::with_capacity(self.kraus.len());
        for (k, m) in self.kraus.iter().enumerate() {
            if m.len() != self.dim_out {
                return Err(Error::Parse(format!(
                    "kraus[{k}]: {} rows, expected dim_out = {}",
                    m.len(),
                    self.dim_out
                )));
            }
            let mut data = Vec::with_capacity(self.dim_out * self.dim_in);
            for (i, row) in m.iter().enumerate() {
                if row.len() != self.dim_in {
                    return Err(Error::Parse(format!(
                        "kraus[{k}][{i}]: {} columns, expected dim_in = {}",
                        row.len(),
                        self.dim_in
                    )));
                }
                for (j, z) in row.iter().enumerate() {
                    if !(z[0].is_finite() && z[1].is_finite()) {
                        return Err(Error::Parse(format!("kraus[{k}][{i}][{j}]: non-finite entry")));
                    }
                    data.push(Complex::new(z[0], z[1]));
                }
            }
            mats.push(ComplexMatrix::from_row_major(self.dim_out, self.dim_in, data)?);
        }
        KrausChannel::new(mats)
    }
}

/// Parses a channel document, reporting the JSON path of the first bad field.
pub fn parse_channel_document(text: &str) -> Result<ChannelDocument> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be an object".into()))?;
    let dim = |key: &str| -> Result<usize> {
        obj.get(key)
            .and_then(Value::as_u64)
            .filter(|&n| n > 0)
            .map(|n| n as usize)
            .ok_or_else(|| Error::Parse(format!("{key}: expected a positive integer")))
    };
    let dim_in = dim("dim_in")?;
    let dim_out = dim("dim_out")?;
    let kraus_v = obj
        .get("kraus")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("kraus: expected an array of matrices".into()))?;

    let mut kraus = Vec::with_capacity(kraus_v.len());
    for (k, m) in kraus_v.iter().enumerate() {
        let rows = m
            .as_array()
            .ok_or_else(|| Error::Parse(format!("kraus[{k}]: expected an array of rows")))?;
        let mut mat = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let entries = row
                .as_array()
                .ok_or_else(|| Error::Parse(format!("kraus[{k}][{i}]: expected an array of entries")))?;
            let mut r = Vec::with_capacity(entries.len());
            for (j, z) in entries.iter().enumerate() {
                r.push(parse_scalar(z).ok_or_else(|| {
                    Error::Parse(format!("kraus[{k}][{i}][{j}]: expected a [re, im] pair of numbers"))
                })?);
            }
            mat.push(r);
        }
        kraus.push(mat);
    }

    let partition = match obj.get("partition") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) => {
            let mut dims = Vec::with_capacity(a.len());
            for (l, x) in a.iter().enumerate() {
                let d = x
                    .as_u64()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::Parse(format!("partition[{l}]: expected a positive integer")))?;
                dims.push(d as usize);
            }
            Some(dims)
        }
        Some(_) => return Err(Error::Parse("partition: expected an array of integers".into())),
    };

    let doc = ChannelDocument {
        dim_in,
        dim_out,
        kraus,
        partition,
    };
    doc.to_channel()?;
    Ok(doc)
}

fn parse_scalar(z: &Value) -> Option<[f64; 2]> {
    match z.as_array()?.as_slice() {
        [re, im] => Some([re.as_f64()?, im.as_f64()?]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = ComplexMatrix::from_rows(vec![
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.5)],
            vec![Complex::new(0.0, 0.0), Complex::new(-0.25, 0.0)],
        ])
        .unwrap();
        let ch = KrausChannel::new(vec![m]).unwrap();
        let doc = ChannelDocument::from_channel(&ch, Some(vec![1, 1]));
        let back = parse_channel_document(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_channel().unwrap(), ch);
    }

    #[test]
    fn partition_is_optional() {
        let doc = parse_channel_document(r#"{"dim_in":1,"dim_out":1,"kraus":[[[[1,0]]]]}"#).unwrap();
        assert_eq!(doc.partition, None);
        assert!(!doc.to_json().contains("partition"));
    }

    #[test]
    fn diagnostics_name_the_offending_index() {
        let bad = r#"{"dim_in":2,"dim_out":2,"kraus":[
            [[[1,0],[0,0]],[[0,0],[1,0]]],
            [[[0,0],[0,0]],[[0,0],"x"]]]}"#;
        let e = parse_channel_document(bad).unwrap_err().to_string();
        assert!(e.contains("kraus[1][1][1]"), "{e}");

        let short = r#"{"dim_in":2,"dim_out":2,"kraus":[[[[1,0],[0,0]],[[0,0]]]]}"#;
        let e = parse_channel_document(short).unwrap_err().to_string();
        assert!(e.contains("kraus[0][1]"), "{e}");

        let e = parse_channel_document("{\"dim_in\": 2,").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");

        let e = parse_channel_document(r#"{"dim_in":0,"dim_out":1,"kraus":[]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("dim_in"), "{e}");
    }
}
