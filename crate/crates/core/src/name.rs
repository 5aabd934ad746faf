//! Structured vertex names.
//!
//! Text grammar: `Atom` prints as a decimal integer, a face label prints as
//! `b(x,y,...)` and a generated name prints as `w:<16 hex digits>:<nonce>`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexName {
    Atom(i64),
    /// Barycenter of the face listed (sorted, duplicate free).
    Face(Arc<[VertexName]>),
    /// Generated vertex: digest of the creating context plus a nonce.
    Fresh(u64, u32),
}

impl VertexName {
    pub fn atom(i: i64) -> Self {
        VertexName::Atom(i)
    }

    pub fn face_label<I: IntoIterator<Item = VertexName>>(members: I) -> Self {
        let mut v: Vec<VertexName> = members.into_iter().collect();
        v.sort();
        v.dedup();
        VertexName::Face(v.into())
    }

    pub fn fresh(digest: u64, nonce: u32) -> Self {
        VertexName::Fresh(digest, nonce)
    }

    /// First `Fresh(digest, k)` for which `taken` is false.
    pub fn fresh_avoiding(digest: u64, mut taken: impl FnMut(&VertexName) -> bool) -> Self {
        let mut nonce = 0u32;
        loop {
            let v = VertexName::Fresh(digest, nonce);
            if !taken(&v) {
                return v;
            }
            nonce += 1;
        }
    }

    pub fn as_atom(&self) -> Option<i64> {
        match self {
            VertexName::Atom(i) => Some(*i),
            _ => None,
        }
    }

    pub fn label_members(&self) -> Option<&[VertexName]> {
        match self {
            VertexName::Face(m) => Some(m),
            _ => None,
        }
    }
}

/// Stable 64-bit digest of a sequence of text parts.
pub fn digest(parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0x1f]);
    }
    let out = h.finalize();
    let mut b = [0u8; 8];
    b.copy_from_slice(&out[..8]);
    u64::from_be_bytes(b)
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexName::Atom(i) => write!(f, "{i}"),
            VertexName::Face(m) => {
                f.write_str("b(")?;
                for (k, v) in m.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
            VertexName::Fresh(d, n) => write!(f, "w:{d:016x}:{n}"),
        }
    }
}

impl fmt::Debug for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn name(&mut self) -> Option<VertexName> {
        match self.s.get(self.pos)? {
            b'b' => {
                self.expect(b"b(")?;
                let mut members = Vec::new();
                if self.s.get(self.pos) == Some(&b')') {
                    return None;
                }
                loop {
                    members.push(self.name()?);
                    match self.s.get(self.pos)? {
                        b',' => self.pos += 1,
                        b')' => {
                            self.pos += 1;
                            break;
                        }
                        _ => return None,
                    }
                }
                let mut sorted = members.clone();
                sorted.sort();
                sorted.dedup();
                if sorted != members {
                    return None;
                }
                Some(VertexName::Face(members.into()))
            }
            b'w' => {
                self.expect(b"w:")?;
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_hexdigit() {
                    self.pos += 1;
                }
                let d = u64::from_str_radix(std::str::from_utf8(&self.s[start..self.pos]).ok()?, 16).ok()?;
                self.expect(b":")?;
                let n = self.integer()?;
                Some(VertexName::Fresh(d, u32::try_from(n).ok()?))
            }
            _ => Some(VertexName::Atom(self.integer()?)),
        }
    }

    fn integer(&mut self) -> Option<i64> {
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn expect(&mut self, lit: &[u8]) -> Option<()> {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            Some(())
        } else {
            None
        }
    }
}

impl FromStr for VertexName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        match p.name() {
            Some(v) if p.pos == s.len() => Ok(v),
            _ => Err(Error::ParseName(s.to_string())),
        }
    }
}

impl Serialize for VertexName {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexName {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
