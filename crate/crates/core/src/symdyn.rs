//! Finite prefixes of points in `{0,1}^{ℤ₊}` under the left shift.
//!
//! Words are indexed from 0. Window sets stay 1-based; the conversion
//! happens in [`indicator_word`], where position `n` of the word is the
//! membership bit of `n` and position 0 is always 0.
//!
//! Reads past the end of a prefix are errors. Every operation that returns
//! a set of times returns it with the window of times it could actually
//! inspect.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::windowsets::WindowSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolicWord {
    bits: Vec<u8>,
}

impl fmt::Debug for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolicWord({self})")
    }
}

impl fmt::Display for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl SymbolicWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::arg(format!("symbol {b} is not 0 or 1")));
        }
        Ok(SymbolicWord { bits })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::parse(format!("char {i}"), format!("expected 0 or 1, found {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(SymbolicWord { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, n: usize) -> Result<u8> {
        self.bits
            .get(n)
            .copied()
            .ok_or_else(|| Error::arg(format!("read at {n} past prefix of length {}", self.len())))
    }

    /// `σⁿx`, consuming `n` positions. Valid for `n < len`.
    pub fn shift(&self, n: usize) -> Result<Self> {
        if n >= self.len() {
            return Err(Error::arg(format!("shift by {n} leaves nothing of a prefix of length {}", self.len())));
        }
        Ok(SymbolicWord { bits: self.bits[n..].to_vec() })
    }

    /// Same word with position 0 set to `bit`.
    pub fn with_origin(&self, bit: u8) -> Result<Self> {
        let mut bits = self.bits.clone();
        *bits.first_mut().ok_or_else(|| Error::arg("empty word has no origin"))? = bit;
        SymbolicWord::new(bits)
    }

    /// The cylinder `[x(0) … x(depth−1)]` around this word.
    pub fn initial_cylinder(&self, depth: usize) -> Result<Cylinder> {
        if depth == 0 || depth > self.len() {
            return Err(Error::arg(format!("cylinder depth {depth} not in [1, {}]", self.len())));
        }
        Cylinder::new(self.bits[..depth].to_vec())
    }

    fn matches_at(&self, n: usize, pattern: &[u8]) -> bool {
        self.bits[n..n + pattern.len()] == *pattern
    }
}

/// `[i_0 i_1 … i_d]`: points whose first `d+1` symbols are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cylinder {
    pattern: Vec<u8>,
}

impl Cylinder {
    pub fn new(pattern: Vec<u8>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::arg("cylinder needs at least one symbol"));
        }
        if pattern.iter().any(|&b| b > 1) {
            return Err(Error::arg("cylinder symbols must be 0 or 1"));
        }
        Ok(Cylinder { pattern })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(SymbolicWord::parse(text)?.bits)
    }

    pub fn depth(&self) -> usize {
        self.pattern.len()
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }
}

/// `1_F` on positions `0..=N`, with position 0 outside every window set.
pub fn indicator_word(set: &WindowSet) -> SymbolicWord {
    let mut bits = vec![0u8; set.window() + 1];
    for m in set.iter() {
        bits[m] = 1;
    }
    SymbolicWord { bits }
}

/// `N(x, U) = {n ≥ 1 : σⁿx ∈ U}` on the checkable range `[1, L − depth]`.
pub fn entering_times(x: &SymbolicWord, u: &Cylinder) -> Result<WindowSet> {
    let d = u.depth();
    if d > x.len() {
        return Err(Error::arg(format!("cylinder depth {d} exceeds word length {}", x.len())));
    }
    let window = x.len() - d;
    let mut out = WindowSet::empty(window);
    for n in 1..=window {
        if x.matches_at(n, &u.pattern) {
            out.insert(n);
        }
    }
    Ok(out)
}

/// `N((x, y), U × U)` for `U = [y(0) … y(d)]`: the times at which both
/// orbits sit in the depth-`(d+1)` cylinder around `y`.
pub fn strong_prox_times(x: &SymbolicWord, y: &SymbolicWord, d: usize) -> Result<WindowSet> {
    let depth = d + 1;
    if x.len() < depth || y.len() < depth {
        return Err(Error::arg(format!(
            "depth {d} needs words of length {depth}, have {} and {}",
            x.len(),
            y.len()
        )));
    }
    let pattern = &y.bits[..depth];
    let window = x.len().min(y.len()) - depth;
    let mut out = WindowSet::empty(window);
    for n in 1..=window {
        if x.matches_at(n, pattern) && y.matches_at(n, pattern) {
            out.insert(n);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainViolation {
    /// `C_{n+1} ⊄ C_n`; `element` is in the former but not the latter.
    NotDecreasing { n: usize, element: usize },
    Empty { n: usize },
    /// A link pointing outside `1..=k`.
    BadLink { n: usize, r: usize, m: usize },
    /// `r + c ∉ C_n` for some `c ∈ C_m`.
    Shift { n: usize, r: usize, m: usize, missing: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarginTruncation {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    /// Elements `c ∈ C_m` with `r + c` past the window, left unchecked.
    pub unchecked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainVerdict {
    pub ok: bool,
    pub violations: Vec<ChainViolation>,
    pub truncations: Vec<MarginTruncation>,
}

/// Check a finite decreasing chain `C_1 ⊇ … ⊇ C_k` with links `(n, r) ↦ m`
/// claiming `r + C_m ⊆ C_n` for each `r ∈ C_n`. Indices `n`, `m` are 1-based.
pub fn essential_chain_check(chain: &[WindowSet], links: &BTreeMap<(usize, usize), usize>) -> Result<ChainVerdict> {
    let Some(first) = chain.first() else {
        return Err(Error::arg("chain is empty"));
    };
    let window = first.window();
    if chain.iter().any(|c| c.window() != window) {
        return Err(Error::arg("chain sets must share one window"));
    }
    let gaps: Vec<(usize, usize)> = chain
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |r| (i + 1, r)))
        .filter(|key| !links.contains_key(key))
        .collect();
    if !gaps.is_empty() {
        return Err(Error::IncompleteCertificate { gaps });
    }

    let mut violations = Vec::new();
    let mut truncations = Vec::new();
    for (i, c) in chain.iter().enumerate() {
        if c.is_empty() {
            violations.push(ChainViolation::Empty { n: i + 1 });
        }
        if let Some(prev) = i.checked_sub(1).map(|p| &chain[p]) {
            if let Some(element) = c.iter().find(|&e| !prev.contains(e)) {
                violations.push(ChainViolation::NotDecreasing { n: i, element });
            }
        }
    }
    for (i, c) in chain.iter().enumerate() {
        let n = i + 1;
        for r in c.iter() {
            let m = links[&(n, r)];
            if m == 0 || m > chain.len() {
                violations.push(ChainViolation::BadLink { n, r, m });
                continue;
            }
            let mut unchecked = 0;
            let mut missing = None;
            for e in chain[m - 1].iter() {
                if r + e > window {
                    unchecked += 1;
                } else if missing.is_none() && !c.contains(r + e) {
                    missing = Some(r + e);
                }
            }
            if let Some(missing) = missing {
                violations.push(ChainViolation::Shift { n, r, m, missing });
            }
            if unchecked > 0 {
                truncations.push(MarginTruncation { n, r, m, unchecked });
            }
        }
    }
    Ok(ChainVerdict { ok: violations.is_empty(), violations, truncations })
}
