use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{GeometricRealization, Trajectory};
use crate::error::{Error, Result};

/// OFF text for the facets of a realization; uses the `nOFF` header when the
/// ambient dimension is not 3.
pub fn to_off(r: &GeometricRealization) -> String {
    let facets = r.complex().facets();
    let index: BTreeMap<_, usize> = r.coordinates().keys().enumerate().map(|(i, v)| (v, i)).collect();
    let mut out = String::new();
    if r.ambient() == 3 {
        out.push_str("OFF\n");
    } else {
        let _ = writeln!(out, "nOFF\n{}", r.ambient());
    }
    let _ = writeln!(out, "{} {} 0", index.len(), facets.len());
    for p in r.coordinates().values() {
        let row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    for f in facets {
        let ids: Vec<String> = f.vertices().iter().map(|v| index[v].to_string()).collect();
        let _ = writeln!(out, "{} {}", ids.len(), ids.join(" "));
    }
    out
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Malformed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn epsilons_csv(eps: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(["level", "epsilon"]).map_err(io)?;
    for (i, e) in eps.iter().enumerate() {
        w.write_record([i.to_string(), e.to_string()]).map_err(io)?;
    }
    finish(w)
}

pub fn trajectory_csv(t: &Trajectory) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Malformed(e.to_string());
    let dim = t.points.first().map_or(0, |p| p.len());
    let mut header = vec!["level".to_string(), "epsilon".to_string()];
    header.extend((0..dim).map(|i| format!("x{i}")));
    w.write_record(&header).map_err(io)?;
    for (i, p) in t.points.iter().enumerate() {
        let mut row = vec![i.to_string(), t.epsilons[i].to_string()];
        row.extend(p.iter().map(|x| x.to_string()));
        w.write_record(&row).map_err(io)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Complex;
    use crate::geometry::{epsilon_sequence, realize};

    #[test]
    fn off_for_subdivided_triangle() {
        let off = to_off(&realize(&Complex::standard_simplex(2), 1).unwrap());
        let mut lines = off.lines();
        assert_eq!(lines.next(), Some("OFF"));
        assert_eq!(lines.next(), Some("7 6 0"));
        assert_eq!(off.lines().filter(|l| l.starts_with("3 ")).count(), 6);
    }

    #[test]
    fn off_for_edge_uses_dimension_header() {
        let off = to_off(&realize(&Complex::standard_simplex(1), 0).unwrap());
        assert!(off.starts_with("nOFF\n2\n2 1 0\n"));
    }

    #[test]
    fn epsilon_table() {
        let csv = epsilons_csv(&epsilon_sequence(&Complex::standard_simplex(1), 2).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("level,epsilon\n0,1.41421356"));
    }
}
