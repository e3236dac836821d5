//! Brute-force reference implementations. None of these call into the
//! search or elimination code of the library; they only read its inputs.
#![allow(dead_code)]

use csets_core::{BigInt, BigRational, WindowSet};

fn zero() -> BigInt {
    BigInt::from(0)
}

/// Rank of a rational matrix by division-free elimination on integer rows
/// (denominators cleared, each row reduced by the gcd of its entries).
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let mut l = BigInt::from(1);
            for v in row {
                let d = v.denom().clone();
                let g = gcd(&l, &d);
                l = &l / g * d;
            }
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] == zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            let row: Vec<BigInt> = (0..ncols).map(|j| &a * &m[i][j] - &b * &m[r][j]).collect();
            let g = row.iter().fold(zero(), |acc, v| gcd(&acc, v));
            m[i] = if g == zero() { row } else { row.into_iter().map(|v| v / &g).collect() };
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    if a < zero() {
        -a
    } else {
        a
    }
}

/// Whether `target` is a rational combination of `cols` (all column vectors of length p).
fn in_span(cols: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    let p = target.len();
    let as_rows = |extra: Option<&[BigRational]>| -> Vec<Vec<BigRational>> {
        (0..p)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
                if let Some(t) = extra {
                    row.push(t[i].clone());
                }
                row
            })
            .collect()
    };
    if cols.is_empty() {
        return target.iter().all(|v| *v.numer() == zero());
    }
    rank(&as_rows(None)) == rank(&as_rows(Some(target)))
}

/// Columns condition by trying every ordered partition of the columns.
pub fn columns_condition_oracle(rows: &[Vec<BigRational>]) -> bool {
    let q = rows.first().map_or(0, |r| r.len());
    let column = |j: usize| -> Vec<BigRational> { rows.iter().map(|r| r[j].clone()).collect() };
    let sum = |mask: u32| -> Vec<BigRational> {
        (0..rows.len())
            .map(|i| (0..q).filter(|j| mask >> j & 1 == 1).map(|j| rows[i][j].clone()).sum())
            .collect()
    };
    fn extend(q: usize, used: u32, column: &dyn Fn(usize) -> Vec<BigRational>, sum: &dyn Fn(u32) -> Vec<BigRational>) -> bool {
        let all = (1u32 << q) - 1;
        if used == all {
            return true;
        }
        let cols: Vec<Vec<BigRational>> = (0..q).filter(|j| used >> j & 1 == 1).map(column).collect();
        (1..=all).filter(|b| b & used == 0).any(|b| in_span(&cols, &sum(b)) && extend(q, used | b, column, sum))
    }
    (1..(1u32 << q)).any(|first| {
        sum(first).iter().all(|v| *v.numer() == zero()) && extend(q, first, &column, &sum)
    })
}

/// Every `x ∈ [1..n]^q` with `A x = 0`, in lexicographic order.
pub fn solutions_oracle(rows: &[Vec<BigRational>], n: usize, nontrivial: bool) -> Vec<Vec<usize>> {
    let q = rows.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let total = n.pow(q as u32);
    for code in 0..total {
        let mut x = vec![0usize; q];
        let mut c = code;
        for slot in x.iter_mut().rev() {
            *slot = c % n + 1;
            c /= n;
        }
        if nontrivial && x.iter().all(|&v| v == x[0]) {
            continue;
        }
        let ok = rows.iter().all(|row| {
            let s: BigRational = row.iter().zip(&x).map(|(a, &v)| a * BigRational::from_integer(BigInt::from(v))).sum();
            *s.numer() == zero()
        });
        if ok {
            out.push(x);
        }
    }
    out
}

/// All subset sums of `xs`, checked against `set` directly.
pub fn fs_inside(xs: &[usize], set: &WindowSet) -> bool {
    (1u32..(1 << xs.len())).all(|mask| {
        let s: usize = xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x).sum();
        set.contains(s)
    })
}

/// Lexicographically smallest nondecreasing `x_1..x_k` with `FS(x) ⊆ F`,
/// scanning every nondecreasing tuple with sum at most `N` in order.
pub fn ip_witness_oracle(set: &WindowSet, k: usize) -> Option<Vec<usize>> {
    fn walk(set: &WindowSet, k: usize, x: &mut Vec<usize>, budget: usize) -> Option<Vec<usize>> {
        if x.len() == k {
            return fs_inside(x, set).then(|| x.clone());
        }
        let lo = x.last().copied().unwrap_or(1);
        for v in lo..=budget {
            x.push(v);
            let hit = walk(set, k, x, budget - v);
            x.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
    walk(set, k, &mut Vec::new(), set.window())
}

/// First `(α, r)` in (lexicographic α, then r) order with every
/// `r + s_α^{(i)}` in `F`. `gens[t]` is generator `t+1`.
pub fn j_witness_oracle(set: &WindowSet, gens: &[Vec<i64>]) -> Option<(Vec<usize>, usize)> {
    let k = gens.len();
    let m = gens.first().map_or(0, |g| g.len());
    let n = set.window() as i64;
    let mut found: Vec<(Vec<usize>, usize)> = Vec::new();
    for mask in 1u32..(1 << k) {
        let alpha: Vec<usize> = (0..k).filter(|t| mask >> t & 1 == 1).map(|t| t + 1).collect();
        let s: Vec<i64> = (0..m).map(|i| alpha.iter().map(|&t| gens[t - 1][i]).sum()).collect();
        let hi = n - s.iter().copied().min().unwrap().min(0);
        for r in 1..=hi {
            if s.iter().all(|v| set.contains_i64(r + v)) {
                found.push((alpha.clone(), r as usize));
                break;
            }
        }
    }
    found.into_iter().min()
}

/// Members of the upward closure of `generators` as a bit table over `2^n` masks.
pub fn closure_table(n: usize, generators: &[u32]) -> Vec<bool> {
    (0u32..(1 << n)).map(|s| generators.iter().any(|&g| g & !s == 0)).collect()
}

/// Sets meeting every member.
pub fn dual_table(n: usize, table: &[bool]) -> Vec<bool> {
    (0u32..(1 << n))
        .map(|s| (0u32..(1 << n)).filter(|&f| table[f as usize]).all(|f| f & s != 0))
        .collect()
}

pub fn is_filter_oracle(n: usize, table: &[bool]) -> bool {
    let members: Vec<u32> = (0u32..(1 << n)).filter(|&s| table[s as usize]).collect();
    members.iter().all(|&a| members.iter().all(|&b| table[(a & b) as usize]))
}

pub fn is_ramsey_oracle(n: usize, table: &[bool]) -> bool {
    (0u32..(1 << n)).filter(|&s| table[s as usize]).all(|s| {
        let mut t = s;
        loop {
            if !table[t as usize] && !table[(s & !t) as usize] {
                return false;
            }
            if t == 0 {
                return true;
            }
            t = (t - 1) & s;
        }
    })
}

/// `{n ≥ 1 : x(n..n+|u|) = u}` for `n` up to `len − |u|`.
pub fn entering_oracle(x: &[u8], u: &[u8]) -> Vec<usize> {
    (1..=x.len().saturating_sub(u.len())).filter(|&n| x[n..n + u.len()] == *u).collect()
}

/// Whether a 2-coloring of `[1..n]` has a monochromatic `k`-term progression.
pub fn has_mono_ap(colors: &[u32], k: usize) -> bool {
    let n = colors.len();
    (1..=n).any(|a| {
        (1..=n).any(|d| a + (k - 1) * d <= n && (0..k).all(|i| colors[a + i * d - 1] == colors[a - 1]))
    })
}
