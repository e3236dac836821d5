//! Direct re-checks of reported witnesses. These read only the inputs and
//! the witness; none of them call the searches that produced it.

use csets_core::{Coloring, Cylinder, FiniteFamily, Mask, Progression, RationalMatrix, SymbolicWord, WindowSet};

fn mask(set: &[usize]) -> Mask {
    set.iter().fold(0, |m, e| m | 1 << (e - 1))
}

/// `dual` holds exactly the sets meeting every member of `family`.
pub fn dual(family: &FiniteFamily, dual: &FiniteFamily) -> bool {
    let members = family.minimal_members();
    (0..=family.full_mask()).all(|s| dual.contains(s) == members.iter().all(|&m| m & s != 0))
}

pub fn filter_counterexample(family: &FiniteFamily, first: &[usize], second: &[usize], meet: &[usize]) -> bool {
    let (a, b, c) = (mask(first), mask(second), mask(meet));
    family.contains(a) && family.contains(b) && a & b == c && !family.contains(c)
}

pub fn ramsey_counterexample(family: &FiniteFamily, set: &[usize], p1: &[usize], p2: &[usize]) -> bool {
    let (s, a, b) = (mask(set), mask(p1), mask(p2));
    family.contains(s) && a | b == s && a & b == 0 && !family.contains(a) && !family.contains(b)
}

fn nontrivial_ok(x: &[usize], nontrivial: bool) -> bool {
    !nontrivial || x.iter().any(|&v| v != x[0])
}

pub fn mono_solution(a: &RationalMatrix, c: &Coloring, color: u32, x: &[usize], nontrivial: bool) -> bool {
    x.len() == a.cols()
        && x.iter().all(|&v| v >= 1 && v <= c.window() && c.color(v) == color)
        && nontrivial_ok(x, nontrivial)
        && a.is_solution(x)
}

pub fn solution_in(a: &RationalMatrix, set: &WindowSet, x: &[usize], nontrivial: bool) -> bool {
    x.len() == a.cols() && x.iter().all(|&v| set.contains(v)) && nontrivial_ok(x, nontrivial) && a.is_solution(x)
}

pub fn progression(c: &Coloring, p: &Progression, k: usize) -> bool {
    p.step >= 1 && p.start + (k - 1) * p.step <= c.window() && (0..k).all(|i| c.color(p.start + i * p.step) == p.color)
}

pub fn finite_sums(c: &Coloring, xs: &[usize], color: u32) -> bool {
    (1u64..1 << xs.len()).all(|m| {
        let s: usize = xs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x).sum();
        s >= 1 && s <= c.window() && c.color(s) == color
    })
}

/// `times` is exactly the set of `n` in its window with `x(n + j) = u(j)`.
pub fn entering(x: &SymbolicWord, u: &Cylinder, times: &WindowSet) -> bool {
    let (bits, pat) = (x.bits(), u.pattern());
    (1..=times.window()).all(|n| {
        let hit = n + pat.len() <= bits.len() && bits[n..n + pat.len()] == *pat;
        hit == times.contains(n)
    })
}

pub fn prox(x: &SymbolicWord, y: &SymbolicWord, d: usize, times: &WindowSet) -> bool {
    let pat = &y.bits()[..=d];
    (1..=times.window()).all(|n| {
        let at = |w: &SymbolicWord| n + pat.len() <= w.len() && w.bits()[n..n + pat.len()] == *pat;
        (at(x) && at(y)) == times.contains(n)
    })
}

/// Every nonempty subset sum of `xs` lies in `set`.
pub fn sums_inside(set: &WindowSet, xs: &[usize]) -> bool {
    (1u64..1 << xs.len()).all(|m| {
        let s: usize = xs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x).sum();
        set.contains(s)
    })
}

/// `a_j + (base ∩ [1, j]) ⊆ set` for every `j`.
pub fn block_shifts(set: &WindowSet, base: &WindowSet, shifts: &[usize]) -> bool {
    shifts.iter().enumerate().all(|(j, a)| (1..=j + 1).filter(|&b| base.contains(b)).all(|b| set.contains(a + b)))
}

/// Every length-`g + 1` subinterval of `[start, start + run − 1]` meets `set`.
pub fn gap_bounded(set: &WindowSet, start: usize, g: usize, run: usize) -> bool {
    if start == 0 || run == 0 || start + run - 1 > set.window() {
        return false;
    }
    g + 1 > run || (start..=start + run - 1 - g).all(|a| (a..=a + g).any(|m| set.contains(m)))
}
