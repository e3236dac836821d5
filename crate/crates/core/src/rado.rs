//! Homogeneous rational systems `A x = 0`: the columns condition, positive
//! solution enumeration, and monochromatic or in-set solution search.
//! Also the classical desk-scale witnesses for van der Waerden progressions
//! and Schur/finite-sums colorings.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{nullspace_param, solve_columns, NullspaceParam, Q};
use crate::windowsets::WindowSet;

/// Exhaustive first-block search is over `2^q` subsets.
pub const MAX_COLUMNS: usize = 10;

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<Vec<Q>>,
    cols: usize,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || cols == 0 {
            return Err(Error::arg("matrix needs at least one row and one column"));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::arg("matrix rows have different lengths"));
        }
        Ok(RationalMatrix { rows, cols })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.rows[i][j]
    }

    pub fn row_slices(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    fn column_sum(&self, mask: u32) -> Vec<Q> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).filter(|j| mask >> j & 1 == 1).map(|j| &r[j]).sum())
            .collect()
    }

    /// Exact evaluation of `A x`.
    pub fn apply(&self, x: &[usize]) -> Vec<Q> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, &v)| a * Q::from_integer(BigInt::from(v))).sum())
            .collect()
    }

    pub fn is_solution(&self, x: &[usize]) -> bool {
        x.len() == self.cols && self.apply(x).iter().all(Zero::is_zero)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows(), self.cols)?;
        for r in &self.rows {
            let toks: Vec<String> = r.iter().map(format_rational).collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

/// Ordered partition `I_1, …, I_l` of the column indices together with
/// coefficients expressing each later block sum through earlier columns.
///
/// Indices are 1-based. `coeffs[r]` belongs to block `r + 2` (the
/// second block onward) and lists `(j, c_j)` for every `j` in the union of
/// the earlier blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnsCertificate {
    pub blocks: Vec<Vec<usize>>,
    pub coeffs: Vec<Vec<(usize, Q)>>,
}

impl Serialize for ColumnsCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<Vec<(usize, String)>> = self
            .coeffs
            .iter()
            .map(|stage| stage.iter().map(|(j, c)| (*j, format_rational(c))).collect())
            .collect();
        let mut st = serializer.serialize_struct("ColumnsCertificate", 2)?;
        st.serialize_field("blocks", &self.blocks)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

fn mask_indices(mask: u32, q: usize) -> Vec<usize> {
    (0..q).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect()
}

/// Decide the columns condition exactly.
///
/// The first block is the first zero-sum column subset in mask order; each
/// later block is the first subset of the remaining columns whose sum lies
/// in the span of the columns used so far. Neither choice can block a
/// completion: with `S` the used columns, any block valid from a smaller
/// state restricted to the unused columns is still valid from `S`, because
/// the part already used lies in `span(S)` and spans only grow. So the
/// greedy run finds a certificate whenever one exists.
pub fn columns_condition(a: &RationalMatrix) -> Result<Option<ColumnsCertificate>> {
    let q = a.cols();
    if q > MAX_COLUMNS {
        return Err(Error::Capacity { what: "column count".into(), got: q as u128, limit: MAX_COLUMNS as u128 });
    }
    let all: u32 = (1u32 << q) - 1;
    let Some(first) = (1..=all).find(|&m| a.column_sum(m).iter().all(Zero::is_zero)) else {
        return Ok(None);
    };
    let mut blocks = vec![mask_indices(first, q)];
    let mut coeffs = Vec::new();
    let mut used = first;
    while used != all {
        let rest = all & !used;
        let basis_idx: Vec<usize> = (0..q).filter(|j| used >> j & 1 == 1).collect();
        let basis: Vec<Vec<Q>> = basis_idx.iter().map(|&j| a.column(j)).collect();
        let mut found = None;
        // submasks of `rest` in increasing order
        let mut sub = rest & rest.wrapping_neg();
        loop {
            if sub & !rest == 0 && sub != 0 {
                if let Some(c) = solve_columns(&basis, &a.column_sum(sub)) {
                    found = Some((sub, c));
                    break;
                }
            }
            if sub == rest {
                break;
            }
            sub = ((sub | !rest).wrapping_add(1)) & rest;
        }
        let Some((block, c)) = found else {
            return Ok(None);
        };
        blocks.push(mask_indices(block, q));
        coeffs.push(basis_idx.iter().map(|&j| j + 1).zip(c).collect());
        used |= block;
    }
    Ok(Some(ColumnsCertificate { blocks, coeffs }))
}

/// Re-evaluate every relation of a certificate in exact arithmetic.
///
/// Index or stage counts that do not fit the matrix are argument errors; a
/// well-shaped certificate whose blocks do not partition the columns, or
/// whose equations fail, yields `false`.
pub fn verify_certificate(a: &RationalMatrix, cert: &ColumnsCertificate) -> Result<bool> {
    let q = a.cols();
    if cert.blocks.is_empty() || cert.coeffs.len() + 1 != cert.blocks.len() {
        return Err(Error::arg("certificate needs one coefficient stage per block after the first"));
    }
    for b in &cert.blocks {
        if let Some(&j) = b.iter().find(|&&j| j == 0 || j > q) {
            return Err(Error::arg(format!("block index {j} outside 1..={q}")));
        }
    }
    let mut seen = vec![false; q + 1];
    for b in &cert.blocks {
        if b.is_empty() {
            return Ok(false);
        }
        for &j in b {
            if seen[j] {
                return Ok(false);
            }
            seen[j] = true;
        }
    }
    if !seen[1..].iter().all(|&s| s) {
        return Ok(false);
    }
    let block_sum = |b: &[usize], i: usize| -> Q { b.iter().map(|&j| a.entry(i, j - 1)).sum() };
    for i in 0..a.rows() {
        if !block_sum(&cert.blocks[0], i).is_zero() {
            return Ok(false);
        }
    }
    let mut earlier: Vec<usize> = cert.blocks[0].clone();
    for (stage, block) in cert.coeffs.iter().zip(&cert.blocks[1..]) {
        let mut idx: Vec<usize> = stage.iter().map(|(j, _)| *j).collect();
        idx.sort_unstable();
        let mut want = earlier.clone();
        want.sort_unstable();
        if idx != want {
            return Err(Error::arg(format!("coefficient indices {idx:?} do not match earlier columns {want:?}")));
        }
        for i in 0..a.rows() {
            let rhs: Q = stage.iter().map(|(j, c)| c * a.entry(i, j - 1)).sum();
            if block_sum(block, i) != rhs {
                return Ok(false);
            }
        }
        earlier.extend_from_slice(block);
    }
    Ok(true)
}

enum Relations {
    Small { den: Vec<i128>, num: Vec<Vec<i128>> },
    Big,
}

/// Positive solutions of `A x = 0` with every component in a domain set.
///
/// Free variables (in column order) run over the domain odometer-style,
/// first free variable most significant; pivot variables are recovered
/// from the integer relations and kept only when integral and in the domain.
pub struct Solutions<'a> {
    domain: &'a WindowSet,
    values: Vec<usize>,
    param: NullspaceParam,
    relations: Relations,
    q: usize,
    nontrivial: bool,
    cursor: Vec<usize>,
    done: bool,
}

impl<'a> Solutions<'a> {
    fn new(a: &RationalMatrix, domain: &'a WindowSet, nontrivial: bool) -> Self {
        let param = nullspace_param(a.row_slices(), a.cols());
        let values = domain.to_vec();
        let fits = |v: &BigInt| v.to_i64().is_some();
        // |numerator| < 2^63 and values <= 2^32 over fewer than 2^20 terms stays inside i128
        let small = domain.window() as u64 <= u32::MAX as u64
            && param.free.len() < (1 << 20)
            && param.relations.iter().all(|r| fits(&r.denominator) && r.numerators.iter().all(fits));
        let relations = if small {
            Relations::Small {
                den: param.relations.iter().map(|r| r.denominator.to_i128().unwrap()).collect(),
                num: param
                    .relations
                    .iter()
                    .map(|r| r.numerators.iter().map(|n| n.to_i128().unwrap()).collect())
                    .collect(),
            }
        } else {
            Relations::Big
        };
        let done = param.free.is_empty() || values.is_empty();
        let cursor = vec![0; param.free.len()];
        Solutions { domain, values, param, relations, q: a.cols(), nontrivial, cursor, done }
    }

    fn advance(&mut self) {
        for slot in self.cursor.iter_mut().rev() {
            *slot += 1;
            if *slot < self.values.len() {
                return;
            }
            *slot = 0;
        }
        self.done = true;
    }

    fn candidate(&self) -> Option<Vec<usize>> {
        let mut x = vec![0usize; self.q];
        let free_vals: Vec<usize> = self.cursor.iter().map(|&c| self.values[c]).collect();
        for (&f, &v) in self.param.free.iter().zip(&free_vals) {
            x[f] = v;
        }
        for (ri, rel) in self.param.relations.iter().enumerate() {
            let value = match &self.relations {
                Relations::Small { den, num } => {
                    let s: i128 = num[ri].iter().zip(&free_vals).map(|(&n, &v)| n * v as i128).sum();
                    if s % den[ri] != 0 {
                        return None;
                    }
                    let v = s / den[ri];
                    if v < 1 || v > self.domain.window() as i128 {
                        return None;
                    }
                    v as usize
                }
                Relations::Big => {
                    let s: BigInt =
                        rel.numerators.iter().zip(&free_vals).map(|(n, &v)| n * BigInt::from(v)).sum();
                    if !(&s % &rel.denominator).is_zero() {
                        return None;
                    }
                    (s / &rel.denominator).to_usize().filter(|&v| v >= 1 && v <= self.domain.window())?
                }
            };
            if !self.domain.contains(value) {
                return None;
            }
            x[rel.pivot] = value;
        }
        if self.nontrivial && x.iter().all(|&v| v == x[0]) {
            return None;
        }
        Some(x)
    }
}

impl Iterator for Solutions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        while !self.done {
            let c = self.candidate();
            self.advance();
            if c.is_some() {
                return c;
            }
        }
        None
    }
}

/// All `x ∈ domain^q` with `A x = 0`. Use `WindowSet::full(N)` for `[1..N]^q`.
pub fn solutions_in<'a>(a: &RationalMatrix, domain: &'a WindowSet, nontrivial: bool) -> Solutions<'a> {
    Solutions::new(a, domain, nontrivial)
}

/// Collects every solution in `[1..bound]^q`.
pub fn enumerate_solutions(a: &RationalMatrix, bound: usize, nontrivial: bool) -> Result<Vec<Vec<usize>>> {
    if bound == 0 {
        return Err(Error::arg("bound must be >= 1"));
    }
    let full = WindowSet::full(bound);
    Ok(solutions_in(a, &full, nontrivial).collect())
}

/// A partition of `[1..N]` into color classes `0..r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    colors: Vec<u32>,
    palette: u32,
}

impl Coloring {
    /// `colors[i]` is the color of position `i + 1`.
    pub fn new(colors: Vec<u32>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::arg("coloring must cover at least one position"));
        }
        let palette = colors.iter().max().unwrap() + 1;
        Ok(Coloring { colors, palette })
    }

    /// The `index`-th coloring of `[1..n]` with `r` colors, reading `index`
    /// in base `r` with position 1 as the least significant digit.
    pub fn nth(n: usize, r: u32, mut index: u64) -> Self {
        let colors = (0..n)
            .map(|_| {
                let c = (index % r as u64) as u32;
                index /= r as u64;
                c
            })
            .collect();
        Coloring { colors, palette: r }
    }

    pub fn window(&self) -> usize {
        self.colors.len()
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn color(&self, m: usize) -> u32 {
        self.colors[m - 1]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn class(&self, c: u32) -> WindowSet {
        let members = (1..=self.window()).filter(|&m| self.color(m) == c);
        WindowSet::from_members(self.window(), members).expect("positions lie in the window")
    }
}

/// First solution in `[1..N]^q` (enumeration order) lying in one color class.
pub fn monochromatic_solution(a: &RationalMatrix, coloring: &Coloring, nontrivial: bool) -> Option<(u32, Vec<usize>)> {
    let full = WindowSet::full(coloring.window());
    solutions_in(a, &full, nontrivial).find_map(|x| {
        let c = coloring.color(x[0]);
        x.iter().all(|&v| coloring.color(v) == c).then_some((c, x))
    })
}

pub fn solve_in_set(a: &RationalMatrix, set: &WindowSet, nontrivial: bool) -> Option<Vec<usize>> {
    solutions_in(a, set, nontrivial).next()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub start: usize,
    pub step: usize,
    pub color: u32,
}

/// Monochromatic `a, a+d, …, a+(k−1)d`, smallest `a` then smallest `d`.
pub fn vdw_witness(coloring: &Coloring, k: usize) -> Result<Option<Progression>> {
    if k < 2 {
        return Err(Error::arg("progression length must be >= 2"));
    }
    let n = coloring.window();
    for a in 1..=n {
        let c = coloring.color(a);
        let mut d = 1;
        while a + (k - 1) * d <= n {
            if (1..k).all(|i| coloring.color(a + i * d) == c) {
                return Ok(Some(Progression { start: a, step: d, color: c }));
            }
            d += 1;
        }
    }
    Ok(None)
}

/// Depth-`k` monochromatic finite-sums system: the lexicographically
/// smallest nondecreasing generators over all colors, ties to the smaller color.
pub fn fs_mono_witness(coloring: &Coloring, k: usize) -> Result<Option<(Vec<usize>, u32)>> {
    if k < 2 {
        return Err(Error::arg("depth must be >= 2"));
    }
    Ok((0..coloring.palette())
        .filter_map(|c| coloring.class(c).ip_witness(k).map(|xs| (xs, c)))
        .min())
}
