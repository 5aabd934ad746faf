//! Reading inputs: files, `deltaN` shorthands and face lists.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gensimplex::cellular::StellarSimplex;
use gensimplex::io::{from_json, read_stellar_simplex};
use gensimplex::subdivision::barycentric_complex;
use gensimplex::{Complex, Face, VertexName};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn delta_dim(input: &str) -> Option<usize> {
    input.strip_prefix("delta").and_then(|n| n.parse().ok())
}

/// A complex file, `deltaN` for the standard n-simplex, or `beta-deltaN`.
pub fn complex(input: &str) -> Result<Complex> {
    if let Some(n) = delta_dim(input) {
        return Ok(Complex::standard_simplex(n));
    }
    if let Some(n) = input.strip_prefix("beta-").and_then(delta_dim) {
        return Ok(barycentric_complex(&Complex::standard_simplex(n)));
    }
    let text = read_text(Path::new(input))?;
    from_json(&text).with_context(|| format!("parsing {input}"))
}

/// A stellar simplex file, `deltaN`, or `beta-deltaN`.
pub fn stellar_simplex(input: &str) -> Result<StellarSimplex> {
    if let Some(n) = delta_dim(input) {
        return Ok(StellarSimplex::standard(n));
    }
    if let Some(n) = input.strip_prefix("beta-").and_then(delta_dim) {
        return Ok(StellarSimplex::standard(n).beta());
    }
    let text = read_text(Path::new(input))?;
    read_stellar_simplex(&text).with_context(|| format!("parsing {input}"))
}

/// Splits on commas outside parentheses.
fn split_names(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0usize, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

pub fn vertex(s: &str) -> Result<VertexName> {
    s.trim().parse().with_context(|| format!("vertex name {s:?}"))
}

/// `0,1,2`, `b(0,1),2`, or a JSON list of names.
pub fn face(s: &str) -> Result<Face> {
    if s.trim_start().starts_with('[') {
        return serde_json::from_str(s).with_context(|| format!("face {s:?}"));
    }
    let names = split_names(s).into_iter().filter(|n| !n.is_empty()).map(vertex).collect::<Result<Vec<_>>>()?;
    if names.is_empty() {
        bail!("empty face");
    }
    Ok(Face::new(names)?)
}
