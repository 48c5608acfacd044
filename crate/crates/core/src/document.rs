//! On-disk labeling formats.
//!
//! The canonical format is a JSON document holding two `n x m` matrices
//! with 1-based semantics: row `i`, column `j` of `horizontal` is the label
//! of `H(i, j)` (edge `x(i,j) - x(i,j+1)`), and of `vertical` the label of
//! `V(i, j)` (edge `x(i,j) - x(i+1,j)`).
//!
//! ```text
//! {
//!   "n": 3,
//!   "m": 3,
//!   "horizontal": [
//!     [1, 4, 9],
//!     [8, 2, 5],
//!     [6, 7, 3]
//!   ],
//!   "vertical": [
//!     [12, 18, 14],
//!     [13, 10, 17],
//!     [16, 15, 11]
//!   ],
//!   "metadata": {"generator":"construct","plan":{...},"constant":38}
//! }
//! ```
//!
//! Hand-written files may instead use the edge-list form: a header line
//! `N M` followed by one `H i j label` or `V i j label` line per edge.
//! Blank lines and `#` comments are ignored.

use serde::{Deserialize, Serialize};

use crate::construct::ConstructionPlan;
use crate::error::{Error, Result};
use crate::labeling::Labeling;
use crate::torus::{EdgeRef, GridDims, Orientation};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<ConstructionPlan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<u64>,
}

/// The JSON document as parsed, before shape and value checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDocument {
    pub n: usize,
    pub m: usize,
    pub horizontal: Vec<Vec<i64>>,
    pub vertical: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A decoded file: the labeling plus whatever metadata came with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub labeling: Labeling,
    pub metadata: Option<Metadata>,
}

pub fn encode(lab: &Labeling) -> String {
    encode_with(lab, None)
}

/// Serializes with a fixed layout: one matrix row per line, fields in the
/// order `n, m, horizontal, vertical, metadata`, trailing newline.
pub fn encode_with(lab: &Labeling, metadata: Option<&Metadata>) -> String {
    let g = lab.dims();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"n\": {},\n  \"m\": {},\n", g.n, g.m));
    let matrix = |name: &str, orient: Orientation, out: &mut String| {
        out.push_str(&format!("  \"{name}\": [\n"));
        let rows = lab.matrix(orient);
        for (idx, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str("    [");
            out.push_str(&cells.join(", "));
            out.push(']');
            if idx + 1 < rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
    };
    matrix("horizontal", Orientation::H, &mut out);
    out.push_str(",\n");
    matrix("vertical", Orientation::V, &mut out);
    if let Some(meta) = metadata {
        out.push_str(",\n  \"metadata\": ");
        out.push_str(&serde_json::to_string(meta).expect("metadata serializes"));
    }
    out.push_str("\n}\n");
    out
}

/// One `H i j label` / `V i j label` line per edge, in edge-index order.
pub fn encode_edge_list(lab: &Labeling) -> String {
    let g = lab.dims();
    let mut out = format!("{} {}\n", g.n, g.m);
    for (e, x) in lab.iter() {
        out.push_str(&format!("{} {} {} {}\n", e.orient, e.i, e.j, x));
    }
    out
}

fn check_label(value: i64, what: impl FnOnce() -> String) -> Result<u32> {
    if value <= 0 {
        return Err(Error::Value(format!("{} is {value}; labels must be positive", what())));
    }
    u32::try_from(value).map_err(|_| Error::Value(format!("{} is {value}, larger than supported", what())))
}

impl LabelingDocument {
    pub fn into_decoded(self) -> Result<Decoded> {
        let g = GridDims::new(self.n, self.m)?;
        for (name, mat) in [("horizontal", &self.horizontal), ("vertical", &self.vertical)] {
            if mat.len() != g.n {
                return Err(Error::Shape(format!("{name} has {} rows, expected n = {}", mat.len(), g.n)));
            }
            if let Some((i, row)) = mat.iter().enumerate().find(|(_, row)| row.len() != g.m) {
                return Err(Error::Shape(format!(
                    "{name} row {} has {} entries, expected m = {}",
                    i + 1,
                    row.len(),
                    g.m
                )));
            }
        }
        let mut labels = Vec::with_capacity(g.q);
        for (name, mat) in [("horizontal", &self.horizontal), ("vertical", &self.vertical)] {
            for (i, row) in mat.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    labels.push(check_label(x, || format!("{name}[{}][{}]", i + 1, j + 1))?);
                }
            }
        }
        Ok(Decoded { labeling: Labeling::from_vec(g, labels)?, metadata: self.metadata })
    }
}

/// Parses either format; JSON is recognized by a leading `{`.
pub fn decode(text: &str) -> Result<Decoded> {
    if text.trim_start().starts_with('{') {
        let doc: LabelingDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_decoded()
    } else {
        decode_edge_list(text)
    }
}

pub fn decode_edge_list(text: &str) -> Result<Decoded> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`, expected `N M`"))))
        .collect::<Result<_>>()?;
    let [n, m] = dims[..] else {
        return Err(Error::Parse(format!("bad header `{header}`, expected `N M`")));
    };
    let g = GridDims::new(n, m)?;
    let mut entries = Vec::with_capacity(g.q);
    for (lineno, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("line {lineno}: expected `H|V i j label`, got `{line}`"));
        let [kind, i, j, x] = tokens[..] else {
            return Err(bad());
        };
        let orient = match kind {
            "H" | "h" => Orientation::H,
            "V" | "v" => Orientation::V,
            _ => return Err(bad()),
        };
        let i: usize = i.parse().map_err(|_| bad())?;
        let j: usize = j.parse().map_err(|_| bad())?;
        let x: i64 = x.parse().map_err(|_| bad())?;
        let e = EdgeRef { orient, i, j };
        if !g.contains_edge(e) {
            return Err(Error::Shape(format!("line {lineno}: {e} is outside a {n}x{m} grid")));
        }
        entries.push((e, check_label(x, || format!("line {lineno}: label of {e}"))?));
    }
    Ok(Decoded { labeling: Labeling::from_entries(g, entries)?, metadata: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::construct;
    use crate::torus::dims;
    use proptest::prelude::*;

    const GOLDEN: &str = "{
  \"n\": 3,
  \"m\": 3,
  \"horizontal\": [
    [1, 4, 9],
    [8, 2, 5],
    [6, 7, 3]
  ],
  \"vertical\": [
    [12, 18, 14],
    [13, 10, 17],
    [16, 15, 11]
  ]
}
";

    #[test]
    fn golden_encoding_is_bit_exact() {
        let lab = construct(3, 3).unwrap().labeling;
        assert_eq!(encode(&lab), GOLDEN);
        assert_eq!(encode(&lab), encode(&lab.clone()));
    }

    #[test]
    fn metadata_roundtrip() {
        let c = construct(9, 3).unwrap();
        let meta = Metadata { generator: Some("construct".into()), plan: Some(c.plan.clone()), constant: Some(110) };
        let text = encode_with(&c.labeling, Some(&meta));
        assert!(text.ends_with("}\n"));
        let back = decode(&text).unwrap();
        assert_eq!(back.labeling, c.labeling);
        assert_eq!(back.metadata, Some(meta));
    }

    #[test]
    fn shape_errors() {
        let text = GOLDEN.replace("    [6, 7, 3]\n", "").replace("[8, 2, 5],", "[8, 2, 5]");
        assert!(matches!(decode(&text), Err(Error::Shape(_))), "{:?}", decode(&text));
        let text = GOLDEN.replace("[8, 2, 5]", "[8, 2]");
        assert!(matches!(decode(&text), Err(Error::Shape(_))));
    }

    #[test]
    fn value_errors() {
        assert!(matches!(decode(&GOLDEN.replace("[8, 2, 5]", "[8, 0, 5]")), Err(Error::Value(_))));
        assert!(matches!(decode(&GOLDEN.replace("[8, 2, 5]", "[8, -2, 5]")), Err(Error::Value(_))));
        assert!(matches!(decode(&GOLDEN.replace("[8, 2, 5]", "[8, 99999999999, 5]")), Err(Error::Value(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(decode("{\"n\": 3"), Err(Error::Parse(_))));
        assert!(matches!(decode(&GOLDEN.replace("[8, 2, 5]", "[8, \"x\", 5]")), Err(Error::Parse(_))));
        assert!(matches!(decode(""), Err(Error::Parse(_))));
        assert!(matches!(decode("3 3\nQ 1 1 1\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn edge_list_roundtrip_and_errors() {
        let lab = construct(4, 6).unwrap().labeling;
        let text = encode_edge_list(&lab);
        assert_eq!(decode(&text).unwrap().labeling, lab);

        let with_comments = format!("# hand written\n{}", text.replacen('\n', "  # dims\n", 1));
        assert_eq!(decode(&with_comments).unwrap().labeling, lab);

        let missing: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(decode(&missing), Err(Error::DomainMismatch { .. })));
        assert!(matches!(decode("3 3\nH 4 1 1\n"), Err(Error::Shape(_))));
        assert!(matches!(decode("3 3\nH 1 1 0\n"), Err(Error::Value(_))));
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(n in 3usize..9, m in 3usize..9, seed in any::<u64>()) {
            let g = dims(n, m).unwrap();
            let lab = Labeling::from_fn(g, |e| {
                let x = seed ^ (g.edge_index(e) as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                (x % 1000) as u32 + 1
            });
            prop_assert_eq!(&decode(&encode(&lab)).unwrap().labeling, &lab);
            prop_assert_eq!(&decode(&encode_edge_list(&lab)).unwrap().labeling, &lab);
        }
    }
}
