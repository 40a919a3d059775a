//! Report emission: JSON envelopes carrying the input hash, TSV page tables.

use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::linalg::Coefficients;
use crate::spectral::{Page, SpectralSequence};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of several inputs, each framed by its length.
pub fn sha256_of_all<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

pub fn envelope(command: &str, input_sha256: &str, coeffs: Coefficients, pass: Option<bool>, result: Value) -> Value {
    let mut v = json!({
        "tool": "decalage",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input_sha256": input_sha256,
        "coefficients": coeffs,
    });
    if let Some(p) = pass {
        v["pass"] = Value::Bool(p);
    }
    v["result"] = result;
    v
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `text` to `dir/name` when a directory is given.
pub fn write_into(dir: Option<&Path>, name: &str, text: &str) -> Result<()> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

/// One row per cell: `r, p, q, free rank, torsion, group`.
pub fn page_tsv(pg: &Page, coeffs: Coefficients) -> String {
    let mut out = String::from("r\tp\tq\tfree_rank\ttorsion\tgroup\n");
    for (&(p, q), cell) in &pg.cells {
        let g = coeffs.group(cell.group());
        let torsion = g.torsion.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let (r, rank) = (pg.r, g.free_rank);
        out.push_str(&format!("{r}\t{p}\t{q}\t{rank}\t{torsion}\t{}\n", coeffs.describe(g)));
    }
    out
}

/// Grid of free ranks for page `r`: rows `q` descending, columns `p`.
pub fn page_grid(ss: &SpectralSequence, r: usize, coeffs: Coefficients) -> String {
    let pg = ss.page(r);
    let (Some(pmin), Some(pmax)) = (pg.cells.keys().map(|c| c.0).min(), pg.cells.keys().map(|c| c.0).max()) else {
        return String::new();
    };
    let qmin = pg.cells.keys().map(|c| c.1).min().unwrap();
    let qmax = pg.cells.keys().map(|c| c.1).max().unwrap();
    let mut out = String::from("q\\p");
    for p in pmin..=pmax {
        out.push_str(&format!("\t{p}"));
    }
    out.push('\n');
    for q in (qmin..=qmax).rev() {
        out.push_str(&q.to_string());
        for p in pmin..=pmax {
            out.push_str(&format!("\t{}", coeffs.describe(pg.group(p, q))));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CochainComplex;
    use crate::filtration::FilteredComplex;
    use crate::linalg::IntMatrix;
    use std::sync::Arc;

    #[test]
    fn hashes_are_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_ne!(sha256_of_all([&b"ab"[..], b"c"]), sha256_of_all([&b"a"[..], b"bc"]));
    }

    #[test]
    fn page_tables() {
        let c = Arc::new(CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap());
        let f = FilteredComplex::bete(c).unwrap();
        let ss = SpectralSequence::compute(&f, 2).unwrap();
        let tsv = page_tsv(ss.page(2), Coefficients::Int);
        assert!(tsv.contains("2\t1\t0\t0\t2\tZ/2"));
        let grid = page_grid(&ss, 1, Coefficients::Int);
        assert!(grid.starts_with("q\\p\t0\t1\n"));
        let v = envelope("ss", "00", Coefficients::Rat, Some(true), json!({}));
        assert_eq!(v["coefficients"], "rat");
    }
}
