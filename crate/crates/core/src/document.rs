//! The JSON interchange format for rings.
//!
//! A document is a single object
//! `{"name": string?, "rank": int, "duality": [int], "table": [[[int]]]}`
//! with `table[i][j][k]` the coefficient of `b_k` in `b_i·b_j`. An optional
//! `labels` array of strings is also accepted.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Coeff, FusionRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub duality: Vec<usize>,
    pub table: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl RingDocument {
    pub fn from_ring(ring: &FusionRing) -> Self {
        Self {
            name: ring.name().map(str::to_string),
            rank: ring.rank(),
            duality: ring.duality().to_vec(),
            table: ring
                .nested_table()
                .into_iter()
                .map(|p| {
                    p.into_iter()
                        .map(|r| r.into_iter().map(i64::from).collect())
                        .collect()
                })
                .collect(),
            labels: ring.labels().map(<[String]>::to_vec),
        }
    }

    /// Converts to a ring, checking shape, entry ranges, the duality and the
    /// unit row. Axioms beyond that are left to `validate`.
    pub fn into_ring(self) -> Result<FusionRing> {
        let r = self.rank;
        if r == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        if self.table.len() != r {
            return Err(Error::Shape(format!(
                "table has {} planes, rank is {r}",
                self.table.len()
            )));
        }
        let mut table: Vec<Vec<Vec<Coeff>>> = Vec::with_capacity(r);
        for (i, plane) in self.table.iter().enumerate() {
            let mut p = Vec::with_capacity(r);
            for (j, row) in plane.iter().enumerate() {
                let mut out = Vec::with_capacity(row.len());
                for (k, &v) in row.iter().enumerate() {
                    if v < 0 {
                        return Err(Error::Document(format!(
                            "negative entry {v} at table[{i}][{j}][{k}]"
                        )));
                    }
                    let v = Coeff::try_from(v).map_err(|_| {
                        Error::Document(format!(
                            "entry {v} at table[{i}][{j}][{k}] does not fit in 32 bits"
                        ))
                    })?;
                    out.push(v);
                }
                p.push(out);
            }
            table.push(p);
        }
        let dual = &self.duality;
        if dual.len() == r && dual.iter().all(|&d| d < r) {
            if dual[0] != 0 {
                return Err(Error::Document("duality must fix the unit".into()));
            }
            if let Some(i) = (0..r).find(|&i| dual[dual[i]] != i) {
                return Err(Error::Document(format!(
                    "duality is not an involution at index {i}"
                )));
            }
        }
        let mut ring = FusionRing::new(table, self.duality)?;
        for j in 0..r {
            for k in 0..r {
                if ring.c(0, j, k) != Coeff::from(j == k) {
                    return Err(Error::Document(format!(
                        "basis element 0 is not the unit (table[0][{j}][{k}])"
                    )));
                }
            }
        }
        if let Some(name) = self.name {
            ring = ring.with_name(name);
        }
        if let Some(labels) = self.labels {
            ring = ring.with_labels(labels)?;
        }
        Ok(ring)
    }

    /// Compact, stable rendering: one line per table plane.
    pub fn to_json_string(&self) -> String {
        let mut s = String::from("{\n");
        if let Some(name) = &self.name {
            let _ = writeln!(s, "  \"name\": {},", serde_json::Value::from(name.as_str()));
        }
        let _ = writeln!(s, "  \"rank\": {},", self.rank);
        let _ = writeln!(s, "  \"duality\": {},", compact(&self.duality));
        if let Some(labels) = &self.labels {
            let _ = writeln!(s, "  \"labels\": {},", compact(labels));
        }
        s.push_str("  \"table\": [\n");
        for (i, plane) in self.table.iter().enumerate() {
            let sep = if i + 1 < self.table.len() { "," } else { "" };
            let _ = writeln!(s, "    {}{sep}", compact(plane));
        }
        s.push_str("  ]\n}\n");
        s
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn parse(text: &str) -> Result<FusionRing> {
    let doc: RingDocument = serde_json::from_str(text)?;
    doc.into_ring()
}

pub fn emit(ring: &FusionRing) -> String {
    RingDocument::from_ring(ring).to_json_string()
}
