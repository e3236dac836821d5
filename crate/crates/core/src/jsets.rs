//! IP-systems in `ℤ^m`, J-set witnesses, Hales–Jewett variable words and
//! the two-cell partition reduction for J-sets.
//!
//! An IP-system is given by `k` generators; `s_α` is the sum of the
//! generators indexed by a nonempty `α ⊆ {1..k}`. A J-witness for a window
//! set `F` is a pair `(r, α)` with `r ≥ 1` and `r + s_α^{(i)} ∈ F` for every
//! coordinate `i`.
//!
//! Witness order is fixed: `α` in lexicographic order of its sorted index
//! list (`{1} < {1,2} < {1,2,3} < {1,3} < {2} < …`), then smallest `r`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::windowsets::WindowSet;

/// Subset scans cover `2^k − 1` index sets.
pub const MAX_GENERATORS: usize = 20;
/// Word spaces for variable-word search.
pub const MAX_WORDS: usize = 1 << 20;
/// Colorings enumerated by [`hj_check`].
pub const MAX_COLORINGS: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IPGenerators {
    dim: usize,
    gens: Vec<Vec<BigInt>>,
}

impl Serialize for IPGenerators {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let gens: Vec<Vec<String>> = self.gens.iter().map(|g| g.iter().map(|v| v.to_string()).collect()).collect();
        let mut st = serializer.serialize_struct("IPGenerators", 2)?;
        st.serialize_field("m", &self.dim)?;
        st.serialize_field("gens", &gens)?;
        st.end()
    }
}

impl IPGenerators {
    pub fn new(dim: usize, gens: Vec<Vec<BigInt>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("dimension must be >= 1"));
        }
        if gens.is_empty() {
            return Err(Error::arg("need at least one generator"));
        }
        if let Some((i, g)) = gens.iter().enumerate().find(|(_, g)| g.len() != dim) {
            return Err(Error::arg(format!("generator {} has {} coordinates, expected {dim}", i + 1, g.len())));
        }
        Ok(IPGenerators { dim, gens })
    }

    pub fn from_i64(gens: &[&[i64]]) -> Result<Self> {
        let dim = gens.first().map_or(0, |g| g.len());
        Self::new(dim, gens.iter().map(|g| g.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators `k`.
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generator(&self, t: usize) -> &[BigInt] {
        &self.gens[t - 1]
    }

    fn check_alpha(&self, alpha: &[usize]) -> Result<()> {
        if alpha.is_empty() {
            return Err(Error::arg("index set must be nonempty"));
        }
        let mut seen = vec![false; self.len() + 1];
        for &t in alpha {
            if t == 0 || t > self.len() {
                return Err(Error::arg(format!("index {t} outside 1..={}", self.len())));
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::arg(format!("index {t} repeated")));
            }
        }
        Ok(())
    }

    /// `s_α = Σ_{t∈α} gens[t]`.
    pub fn value(&self, alpha: &[usize]) -> Result<Vec<BigInt>> {
        self.check_alpha(alpha)?;
        let mut acc = vec![BigInt::zero(); self.dim];
        for &t in alpha {
            for (a, g) in acc.iter_mut().zip(&self.gens[t - 1]) {
                *a += g;
            }
        }
        Ok(acc)
    }

    /// The IP-subsystem `s'_i = s_{φ({i})}` for pairwise disjoint blocks.
    pub fn subsystem(&self, phi: &[Vec<usize>]) -> Result<IPGenerators> {
        if phi.is_empty() {
            return Err(Error::Homomorphism("no blocks".into()));
        }
        let mut owner = vec![None; self.len() + 1];
        for (b, block) in phi.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Homomorphism(format!("block {} is empty", b + 1)));
            }
            for &t in block {
                if t == 0 || t > self.len() {
                    return Err(Error::Homomorphism(format!("index {t} outside 1..={}", self.len())));
                }
                if let Some(prev) = owner[t].replace(b) {
                    return Err(Error::Homomorphism(format!(
                        "blocks {} and {} share index {t}",
                        prev + 1,
                        b + 1
                    )));
                }
            }
        }
        let gens = phi.iter().map(|block| self.value(block)).collect::<Result<Vec<_>>>()?;
        IPGenerators::new(self.dim, gens)
    }

    /// Prepends a coordinate equal to `−1` on every generator, so that
    /// coordinate 0 of `s_α` is `−|α|`.
    pub fn append_counter(&self) -> IPGenerators {
        let gens = self
            .gens
            .iter()
            .map(|g| std::iter::once(-BigInt::one()).chain(g.iter().cloned()).collect())
            .collect();
        IPGenerators { dim: self.dim + 1, gens }
    }

    pub fn scaled(&self, n: i64) -> IPGenerators {
        let n = BigInt::from(n);
        let gens = self.gens.iter().map(|g| g.iter().map(|v| v * &n).collect()).collect();
        IPGenerators { dim: self.dim, gens }
    }

    /// `s / n`, when every entry is divisible by `n`.
    pub fn divided(&self, n: i64) -> Option<IPGenerators> {
        let n = BigInt::from(n);
        if n.is_zero() || self.gens.iter().flatten().any(|v| !(v % &n).is_zero()) {
            return None;
        }
        let gens = self.gens.iter().map(|g| g.iter().map(|v| v / &n).collect()).collect();
        Some(IPGenerators { dim: self.dim, gens })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct JWitness {
    pub r: usize,
    pub alpha: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCheck {
    pub coordinate: usize,
    #[serde(serialize_with = "as_string")]
    pub value: BigInt,
    pub member: bool,
}

fn as_string<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub ok: bool,
    pub components: Vec<ComponentCheck>,
}

impl JWitness {
    /// Direct membership check of every coordinate of `r̄ + s_α`.
    pub fn verify(&self, set: &WindowSet, gens: &IPGenerators) -> Result<WitnessCheck> {
        let s = gens.value(&self.alpha)?;
        let r = BigInt::from(self.r);
        let components: Vec<ComponentCheck> = s
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let value = &r + v;
                let member = value.to_i64().is_some_and(|x| set.contains_i64(x));
                ComponentCheck { coordinate: i + 1, value, member }
            })
            .collect();
        Ok(WitnessCheck { ok: self.r >= 1 && components.iter().all(|c| c.member), components })
    }
}

/// Generators converted to `i128` when they fit; subset sums that leave
/// `i128` are treated as outside every window.
struct SmallGens {
    rows: Vec<Vec<Option<i128>>>,
}

impl SmallGens {
    fn new(g: &IPGenerators) -> Self {
        SmallGens { rows: g.gens.iter().map(|v| v.iter().map(|x| x.to_i128()).collect()).collect() }
    }

    fn add(acc: &[Option<i128>], row: &[Option<i128>]) -> Vec<Option<i128>> {
        acc.iter().zip(row).map(|(a, b)| a.zip(*b).and_then(|(a, b)| a.checked_add(b))).collect()
    }
}

/// Smallest `r` with `r + s_i ∈ F` for all `i`, given the subset sum `s`.
fn first_shift(set: &WindowSet, s: &[Option<i128>], min_r: usize) -> Option<usize> {
    let n = set.window() as i128;
    let mut lo = min_r.max(1) as i128;
    let mut hi = i128::MAX;
    for v in s {
        let v = (*v)?;
        lo = lo.max(1 - v);
        hi = hi.min(n - v);
    }
    if lo > hi {
        return None;
    }
    let s0 = s[0].unwrap();
    let mut t = set.next_member((lo + s0) as usize);
    while let Some(tm) = t {
        let r = tm as i128 - s0;
        if r > hi {
            return None;
        }
        if s[1..].iter().all(|v| set.contains((r + v.unwrap()) as usize)) {
            return Some(r as usize);
        }
        t = set.next_member(tm + 1);
    }
    None
}

fn check_capacity(g: &IPGenerators) -> Result<()> {
    if g.len() > MAX_GENERATORS {
        return Err(Error::Capacity {
            what: "generator count".into(),
            got: g.len() as u128,
            limit: MAX_GENERATORS as u128,
        });
    }
    Ok(())
}

fn dfs_first(
    set: &WindowSet,
    gens: &SmallGens,
    start: usize,
    sums: &[Option<i128>],
    alpha: &mut Vec<usize>,
) -> Option<JWitness> {
    for t in start..gens.rows.len() {
        let next = SmallGens::add(sums, &gens.rows[t]);
        alpha.push(t + 1);
        if let Some(r) = first_shift(set, &next, 1) {
            return Some(JWitness { r, alpha: alpha.clone() });
        }
        if let Some(w) = dfs_first(set, gens, t + 1, &next, alpha) {
            return Some(w);
        }
        alpha.pop();
    }
    None
}

/// First J-witness whose index set lies in `{after+1 .. k}`.
pub fn j_witness_after(set: &WindowSet, g: &IPGenerators, after: usize) -> Result<Option<JWitness>> {
    check_capacity(g)?;
    let gens = SmallGens::new(g);
    let zero = vec![Some(0i128); g.dim()];
    Ok((after..g.len()).into_par_iter().find_map_first(|first| {
        let sums = SmallGens::add(&zero, &gens.rows[first]);
        let mut alpha = vec![first + 1];
        if let Some(r) = first_shift(set, &sums, 1) {
            return Some(JWitness { r, alpha });
        }
        dfs_first(set, &gens, first + 1, &sums, &mut alpha)
    }))
}

/// `(r, α)` with `r̄ + s_α ∈ F^m`, first in witness order.
pub fn j_witness(set: &WindowSet, g: &IPGenerators) -> Result<Option<JWitness>> {
    j_witness_after(set, g, 0)
}

/// Every J-witness with index set in `{after+1 .. k}`, in witness order.
pub struct JWitnesses<'a> {
    set: &'a WindowSet,
    gens: SmallGens,
    // (next child index to try, subset sums) per DFS level
    stack: Vec<(usize, Vec<Option<i128>>)>,
    alpha: Vec<usize>,
    pending_r: Option<usize>,
}

impl<'a> JWitnesses<'a> {
    pub fn new(set: &'a WindowSet, g: &IPGenerators, after: usize) -> Result<Self> {
        check_capacity(g)?;
        let zero = vec![Some(0i128); g.dim()];
        Ok(JWitnesses {
            set,
            gens: SmallGens::new(g),
            stack: vec![(after, zero)],
            alpha: Vec::new(),
            pending_r: None,
        })
    }

    fn current_sums(&self) -> &[Option<i128>] {
        &self.stack.last().unwrap().1
    }
}

impl Iterator for JWitnesses<'_> {
    type Item = JWitness;

    fn next(&mut self) -> Option<JWitness> {
        loop {
            // more shifts for the current α
            if let Some(prev) = self.pending_r.take() {
                let sums = self.current_sums().to_vec();
                if let Some(r) = first_shift(self.set, &sums, prev + 1) {
                    self.pending_r = Some(r);
                    return Some(JWitness { r, alpha: self.alpha.clone() });
                }
            }
            // descend to the next α in preorder
            loop {
                let (child, sums) = self.stack.last_mut()?;
                if *child < self.gens.rows.len() {
                    let t = *child;
                    *child += 1;
                    let next = SmallGens::add(sums, &self.gens.rows[t]);
                    self.alpha.push(t + 1);
                    self.stack.push((t + 1, next));
                    break;
                }
                self.stack.pop();
                if self.stack.is_empty() {
                    return None;
                }
                self.alpha.pop();
            }
            let sums = self.current_sums().to_vec();
            if let Some(r) = first_shift(self.set, &sums, 1) {
                self.pending_r = Some(r);
                return Some(JWitness { r, alpha: self.alpha.clone() });
            }
        }
    }
}

/// A word over `{1..a} ∪ {v}` with at least one `v`; `None` marks `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableWord {
    letters: Vec<Option<u32>>,
}

impl fmt::Display for VariableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.letters.iter().any(|l| l.is_some_and(|x| x >= 9));
        for (i, l) in self.letters.iter().enumerate() {
            if wide && i > 0 {
                f.write_str(",")?;
            }
            match l {
                None => f.write_str("v")?,
                Some(x) => write!(f, "{}", x + 1)?,
            }
        }
        Ok(())
    }
}

impl Serialize for VariableWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl VariableWord {
    pub fn new(letters: Vec<Option<u32>>) -> Result<Self> {
        if !letters.iter().any(Option::is_none) {
            return Err(Error::arg("variable word needs at least one v"));
        }
        Ok(VariableWord { letters })
    }

    /// 0-based letters, `None` for the variable.
    pub fn letters(&self) -> &[Option<u32>] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Positions (1-based) holding `v`.
    pub fn variable_positions(&self) -> Vec<usize> {
        self.letters.iter().enumerate().filter(|(_, l)| l.is_none()).map(|(i, _)| i + 1).collect()
    }

    /// Index of `w(j)` (0-based letter `j`) in the base-`a` word order.
    pub fn instance_index(&self, a: usize, j: u32) -> usize {
        self.letters.iter().fold(0, |acc, l| acc * a + l.unwrap_or(j) as usize)
    }
}

/// Letters of the word with the given index, most significant first.
pub fn word_letters(a: usize, n: usize, mut index: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for slot in out.iter_mut().rev() {
        *slot = (index % a) as u32;
        index /= a;
    }
    out
}

fn word_count(a: usize, n: usize) -> Result<usize> {
    let count = (a as u128).checked_pow(n as u32).filter(|&c| c <= MAX_WORDS as u128);
    count.map(|c| c as usize).ok_or(Error::Capacity {
        what: format!("word space {a}^{n}"),
        got: (a as f64).powi(n as i32) as u128,
        limit: MAX_WORDS as u128,
    })
}

/// All variable words of length `n` over `a` letters, `v` ordered first.
fn variable_words(a: usize, n: usize) -> impl Iterator<Item = VariableWord> {
    let total = (a + 1).pow(n as u32);
    (0..total).filter_map(move |code| {
        let digits = word_letters(a + 1, n, code);
        let letters: Vec<Option<u32>> = digits.into_iter().map(|d| d.checked_sub(1)).collect();
        letters.iter().any(Option::is_none).then_some(VariableWord { letters })
    })
}

/// A variable word whose instances `w(1..a)` share a color.
///
/// `coloring[i]` is the color of the `i`-th word of `{1..a}^n` in base-`a`
/// order with the first letter most significant.
pub fn hj_variable_word(a: usize, n: usize, coloring: &[u32]) -> Result<Option<(VariableWord, u32)>> {
    if a == 0 || n == 0 {
        return Err(Error::arg("alphabet and length must be >= 1"));
    }
    let total = word_count(a, n)?;
    if coloring.len() != total {
        return Err(Error::arg(format!("coloring has {} entries, expected {total}", coloring.len())));
    }
    Ok(variable_words(a, n).find_map(|w| {
        let c = coloring[w.instance_index(a, 0)];
        (1..a as u32).all(|j| coloring[w.instance_index(a, j)] == c).then_some((w, c))
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HjCheck {
    pub holds: bool,
    pub colorings_checked: u64,
    /// A coloring with no monochromatic line, when one exists.
    pub counterexample: Option<Vec<u32>>,
}

/// Whether every `r`-coloring of `{1..a}^n` has a monochromatic variable-word line.
pub fn hj_check(a: usize, r: u32, n: usize) -> Result<HjCheck> {
    if a == 0 || n == 0 || r == 0 {
        return Err(Error::arg("alphabet, colors and length must be >= 1"));
    }
    let words = word_count(a, n)?;
    let total = (r as u128).checked_pow(words as u32).filter(|&t| t <= MAX_COLORINGS).ok_or(Error::Capacity {
        what: format!("colorings {r}^({a}^{n})"),
        got: (r as f64).powf(words as f64) as u128,
        limit: MAX_COLORINGS,
    })?;
    let lines: Vec<Vec<usize>> = variable_words(a, n)
        .map(|w| (0..a as u32).map(|j| w.instance_index(a, j)).collect())
        .collect();
    let color_of = |code: u64, word: usize| ((code / (r as u64).pow(word as u32)) % r as u64) as u32;
    let bad = (0..total as u64).into_par_iter().find_first(|&code| {
        !lines.iter().any(|line| {
            let c = color_of(code, line[0]);
            line[1..].iter().all(|&w| color_of(code, w) == c)
        })
    });
    Ok(HjCheck {
        holds: bad.is_none(),
        colorings_checked: total as u64,
        counterexample: bad.map(|code| (0..words).map(|w| color_of(code, w)).collect()),
    })
}

/// Audit trail of the blown-up system used by [`partition_reduction`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlownUpTranscript {
    pub word_length: usize,
    /// Alphabet of the blown-up words: the counter coordinate plus the `m` coordinates.
    pub alphabet: usize,
    /// Letter (1-based) standing for the counter coordinate `−|α|`.
    pub counter_letter: usize,
    pub words: usize,
    /// `block_map[l]` lists the original generator indices of block `l`.
    pub block_map: Vec<Vec<usize>>,
    /// Blocks chosen by the witness on `F1 ∪ F2`, as 0-based block indices.
    pub alpha_blocks: Vec<usize>,
    /// Shift found on `F1 ∪ F2` before reconstruction.
    pub r: usize,
    /// Colors of `r + h^{(w)}_α` (1 = in `F1`), word order.
    pub coloring: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    /// 1 or 2: the cell that received the witness.
    pub index: u8,
    pub witness: JWitness,
    pub variable_word: VariableWord,
    pub blown_up: BlownUpTranscript,
}

/// Two-cell reduction for `F1 ∪ F2`.
///
/// A counter coordinate is prepended to `g`, so words run over the
/// alphabet `{counter, 1..m}` of size `m + 1`. Generators are grouped in
/// blocks of `n`; block `l` contributes `Σ_{i≤n} f_{b_i}(ln + i)` to word
/// `b`. A witness for the union on that system is colored by cell
/// membership, a monochromatic variable word is taken, and the word's
/// fixed letters are folded into `r`. The counter instance lands in the
/// chosen cell, so the returned shift exceeds `|α|`.
///
/// Only as many blocks are used as keep every blown-up sum inside
/// `(−N, N)`. `Ok(None)` means the union has no witness on that system in
/// the window. If the coloring has no monochromatic line (possible when
/// `n` is below the Hales–Jewett bound for `m + 1` letters), a domain error
/// is returned rather than a witness.
pub fn partition_reduction(f1: &WindowSet, f2: &WindowSet, g: &IPGenerators, n: usize) -> Result<Option<Reduction>> {
    let window = f1.window();
    if f2.window() != window {
        return Err(Error::arg("cells must share one window"));
    }
    if n == 0 {
        return Err(Error::arg("word length must be >= 1"));
    }
    let block_total = g.len() / n;
    if block_total == 0 {
        return Err(Error::arg(format!("{} generators cannot fill one block of length {n}", g.len())));
    }
    let aug = g.append_counter();
    let a = aug.dim();
    let words = word_count(a, n)?;

    // f_j(t) = coordinate j of generator t (coordinate 0 is the counter)
    let f = |j: u32, t: usize| -> &BigInt { &aug.generator(t)[j as usize] };
    let block_value = |l: usize, word: &[u32]| -> BigInt { (1..=n).map(|i| f(word[i - 1], l * n + i)).sum() };

    let word_table: Vec<Vec<u32>> = (0..words).map(|w| word_letters(a, n, w)).collect();
    let mut blocks: Vec<Vec<BigInt>> = Vec::new();
    let mut budget = BigInt::from(window) - 1;
    for l in 0..block_total.min(MAX_GENERATORS) {
        let vec: Vec<BigInt> = word_table.iter().map(|w| block_value(l, w)).collect();
        let spread = vec.iter().map(|v| v.abs()).max().unwrap();
        if spread > budget {
            if l == 0 {
                let needed = (spread + 1u32).to_u128().unwrap_or(u128::MAX);
                return Err(Error::Overflow { what: "blown-up block sums".into(), needed, window });
            }
            break;
        }
        budget -= spread;
        blocks.push(vec);
    }
    let blown = IPGenerators::new(words, blocks)?;
    let union = f1.union(f2)?;
    let Some(found) = j_witness(&union, &blown)? else {
        return Ok(None);
    };

    let h = blown.value(&found.alpha)?;
    let r = BigInt::from(found.r);
    let coloring: Vec<u32> = h
        .iter()
        .map(|v| {
            let x = (&r + v).to_i64().expect("inside the window");
            f1.contains_i64(x) as u32
        })
        .collect();
    let Some((word, color)) = hj_variable_word(a, n, &coloring)? else {
        return Err(Error::Domain(format!(
            "no monochromatic variable word of length {n} over {a} letters for this coloring"
        )));
    };
    let cell = if color == 1 { f1 } else { f2 };

    let alpha_blocks: Vec<usize> = found.alpha.iter().map(|b| b - 1).collect();
    let var_pos = word.variable_positions();
    let mut fixed_sum = BigInt::zero();
    let mut alpha_prime = Vec::new();
    for &l in &alpha_blocks {
        for (i, letter) in word.letters().iter().enumerate() {
            match letter {
                Some(c) => fixed_sum += f(*c, l * n + i + 1),
                None => alpha_prime.push(l * n + i + 1),
            }
        }
    }
    debug_assert_eq!(alpha_prime.len(), alpha_blocks.len() * var_pos.len());
    let r_prime = (&r + &fixed_sum)
        .to_usize()
        .filter(|&v| v >= 1)
        .ok_or_else(|| Error::Domain("reconstructed shift is not positive".into()))?;
    let witness = JWitness { r: r_prime, alpha: alpha_prime };
    if !witness.verify(cell, &aug)?.ok {
        return Err(Error::Domain("reconstructed witness failed re-verification".into()));
    }

    Ok(Some(Reduction {
        index: if color == 1 { 1 } else { 2 },
        witness,
        variable_word: word,
        blown_up: BlownUpTranscript {
            word_length: n,
            alphabet: a,
            counter_letter: 1,
            words,
            block_map: (0..blown.len()).map(|l| (l * n + 1..=l * n + n).collect()).collect(),
            alpha_blocks,
            r: found.r,
            coloring,
        },
    }))
}
