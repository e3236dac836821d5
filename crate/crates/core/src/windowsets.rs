//! Finite truncations `F ∩ [1, N]` of subsets of the positive integers.
//!
//! Every set-class notion used elsewhere in the crate (thick, syndetic,
//! piecewise syndetic, IP, block membership) is replaced here by an explicit
//! bounded analogue. Detectors return a certificate (an interval start, a
//! generator list, a list of shifts) rather than a bare boolean, so that a
//! caller can audit how much of the answer depends on where the window was
//! cut.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A subset of `[1, window]`, stored as a bit vector.
///
/// `natural_window` is the largest `M ≤ window` such that membership on
/// `[1, M]` is exact; transforms that pull information from beyond the
/// window (division, negative translation) shrink it. It does not take part
/// in equality.
#[derive(Clone)]
pub struct WindowSet {
    window: usize,
    natural_window: usize,
    words: Vec<u64>,
}

impl PartialEq for WindowSet {
    fn eq(&self, other: &Self) -> bool {
        self.window == other.window && self.words == other.words
    }
}

impl Eq for WindowSet {}

impl fmt::Debug for WindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WindowSet")
            .field("window", &self.window)
            .field("members", &self.to_vec())
            .finish()
    }
}

impl Serialize for WindowSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("WindowSet", 3)?;
        st.serialize_field("window", &self.window)?;
        st.serialize_field("natural_window", &self.natural_window)?;
        st.serialize_field("members", &self.to_vec())?;
        st.end()
    }
}

/// Arithmetic maps applied to a window set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// `m ↦ m + t` for `t ≥ 0`, or `m ↦ m − |t|` keeping results `≥ 1`.
    Translate(i64),
    /// `nF = {nm : m ∈ F}`.
    Scale(usize),
    /// `n⁻¹F = {m : nm ∈ F}`.
    Divide(usize),
}

/// Window ratios standing in for upper density and upper Banach density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    pub upper: Ratio<u64>,
    pub banach: Ratio<u64>,
    /// Interval length used for `banach`.
    pub width: usize,
    /// Start of the first interval attaining `banach`.
    pub banach_start: usize,
}

impl WindowSet {
    pub fn empty(window: usize) -> Self {
        WindowSet { window, natural_window: window, words: vec![0; window.div_ceil(WORD)] }
    }

    pub fn full(window: usize) -> Self {
        let mut s = Self::empty(window);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.clear_tail();
        s
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(window: usize, members: I) -> Result<Self> {
        let mut s = Self::empty(window);
        for m in members {
            if m == 0 || m > window {
                return Err(Error::arg(format!("member {m} outside [1, {window}]")));
            }
            s.insert(m);
        }
        Ok(s)
    }

    /// Union of closed intervals `[a, b]`.
    pub fn from_intervals<I: IntoIterator<Item = (usize, usize)>>(window: usize, intervals: I) -> Result<Self> {
        let mut s = Self::empty(window);
        for (a, b) in intervals {
            if a == 0 || b > window || a > b {
                return Err(Error::arg(format!("interval [{a}, {b}] not inside [1, {window}]")));
            }
            for m in a..=b {
                s.insert(m);
            }
        }
        Ok(s)
    }

    /// `{start, start + step, …} ∩ [1, window]`.
    pub fn progression(window: usize, start: usize, step: usize) -> Result<Self> {
        if start == 0 || step == 0 {
            return Err(Error::arg("progression needs start >= 1 and step >= 1"));
        }
        let mut s = Self::empty(window);
        let mut m = start;
        while m <= window {
            s.insert(m);
            m += step;
        }
        Ok(s)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn natural_window(&self) -> usize {
        self.natural_window
    }

    pub fn contains(&self, m: usize) -> bool {
        m >= 1 && m <= self.window && self.words[(m - 1) / WORD] >> ((m - 1) % WORD) & 1 == 1
    }

    /// Membership for a signed position; anything outside `[1, window]` is absent.
    pub fn contains_i64(&self, m: i64) -> bool {
        m >= 1 && (m as u64) <= self.window as u64 && self.contains(m as usize)
    }

    pub fn insert(&mut self, m: usize) {
        assert!(m >= 1 && m <= self.window, "position {m} outside [1, {}]", self.window);
        self.words[(m - 1) / WORD] |= 1 << ((m - 1) % WORD);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest member `≥ from`.
    pub fn next_member(&self, from: usize) -> Option<usize> {
        let from = from.max(1);
        if from > self.window {
            return None;
        }
        let mut idx = (from - 1) / WORD;
        let mut word = self.words[idx] & (!0u64 << ((from - 1) % WORD));
        loop {
            if word != 0 {
                return Some(idx * WORD + word.trailing_zeros() as usize + 1);
            }
            idx += 1;
            if idx >= self.words.len() {
                return None;
            }
            word = self.words[idx];
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.next_member(1);
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.next_member(cur + 1);
            Some(cur)
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.next_member(1)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD + (WORD - w.leading_zeros() as usize))
    }

    fn clear_tail(&mut self) {
        let rem = self.window % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn check_same_window(&self, other: &Self) -> Result<()> {
        if self.window != other.window {
            return Err(Error::arg(format!("window mismatch: {} vs {}", self.window, other.window)));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_same_window(other)?;
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        let mut out = WindowSet {
            window: self.window,
            natural_window: self.natural_window.min(other.natural_window),
            words,
        };
        out.clear_tail();
        Ok(out)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.clear_tail();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|m| other.contains(m))
    }

    /// The same members viewed in a different window, dropping anything past it.
    pub fn rewindow(&self, window: usize) -> Self {
        let mut out = Self::empty(window);
        for m in self.iter().take_while(|&m| m <= window) {
            out.insert(m);
        }
        out.natural_window = self.natural_window.min(window);
        out
    }

    /// `F ∩ [1, upto]`, keeping the window.
    pub fn truncate(&self, upto: usize) -> Self {
        let mut out = Self::empty(self.window);
        for m in self.iter().take_while(|&m| m <= upto) {
            out.insert(m);
        }
        out.natural_window = self.natural_window;
        out
    }

    fn prefix_counts(&self) -> Vec<u32> {
        let mut pre = vec![0u32; self.window + 1];
        for m in 1..=self.window {
            pre[m] = pre[m - 1] + self.contains(m) as u32;
        }
        pre
    }

    /// `upper = |F| / N`, and `banach` the best ratio `|F ∩ I| / w` over
    /// length-`w` intervals `I ⊆ [1, N]`.
    pub fn density_profile(&self, w: usize) -> Result<DensityProfile> {
        if w == 0 || w > self.window {
            return Err(Error::arg(format!("interval length {w} not in [1, {}]", self.window)));
        }
        let pre = self.prefix_counts();
        let (mut best, mut best_start) = (0u32, 1usize);
        for a in 1..=self.window - w + 1 {
            let c = pre[a + w - 1] - pre[a - 1];
            if c > best {
                best = c;
                best_start = a;
            }
        }
        Ok(DensityProfile {
            upper: Ratio::new(self.len() as u64, self.window as u64),
            banach: Ratio::new(best as u64, w as u64),
            width: w,
            banach_start: best_start,
        })
    }

    /// Longest block of consecutive members, as `(start, length)`.
    pub fn longest_run_at(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut cur_start = 0;
        let mut cur_len = 0;
        for m in 1..=self.window {
            if self.contains(m) {
                if cur_len == 0 {
                    cur_start = m;
                }
                cur_len += 1;
                if best.is_none_or(|(_, l)| cur_len > l) {
                    best = Some((cur_start, cur_len));
                }
            } else {
                cur_len = 0;
            }
        }
        best
    }

    pub fn longest_run(&self) -> usize {
        self.longest_run_at().map_or(0, |(_, l)| l)
    }

    /// Least `g` such that every length-`(g+1)` subinterval of `[1, max F]`
    /// meets `F`. `None` for the empty set.
    pub fn max_gap(&self) -> Option<usize> {
        let mut prev = 0usize;
        let mut gap = 0usize;
        for m in self.iter() {
            gap = gap.max(m - prev - 1);
            prev = m;
        }
        if prev == 0 {
            None
        } else {
            Some(gap)
        }
    }

    /// First `a` such that inside `[a, a+L−1] ⊆ [1, N]` every
    /// length-`(g+1)` subinterval meets `F`.
    pub fn pws_witness(&self, g: usize, run: usize) -> Result<Option<usize>> {
        if run == 0 || run > self.window {
            return Err(Error::arg(format!("run length {run} not in [1, {}]", self.window)));
        }
        let span = g + 1;
        if span > run {
            // no subinterval of that length fits; the condition is vacuous
            return Ok(Some(1));
        }
        let n = self.window;
        let pre = self.prefix_counts();
        // bad[p]: the length-`span` interval starting at p misses F
        let starts = n + 1 - span;
        let mut bad_pre = vec![0u32; starts + 1];
        for p in 1..=starts {
            let hit = pre[p + span - 1] - pre[p - 1] > 0;
            bad_pre[p] = bad_pre[p - 1] + (!hit) as u32;
        }
        let per_run = run - span + 1;
        for a in 1..=n + 1 - run {
            let last = a + per_run - 1;
            if bad_pre[last] - bad_pre[a - 1] == 0 {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    pub fn transform(&self, op: Transform) -> Result<Self> {
        let n = self.window;
        let mut out = Self::empty(n);
        match op {
            Transform::Translate(t) if t >= 0 => {
                let t = t as usize;
                for m in self.iter() {
                    if m + t <= n {
                        out.insert(m + t);
                    }
                }
                out.natural_window = self.natural_window;
            }
            Transform::Translate(t) => {
                let t = t.unsigned_abs() as usize;
                for m in self.iter().filter(|&m| m > t) {
                    out.insert(m - t);
                }
                out.natural_window = self.natural_window.saturating_sub(t);
            }
            Transform::Scale(k) => {
                if k == 0 {
                    return Err(Error::arg("scale factor must be >= 1"));
                }
                for m in self.iter() {
                    match m.checked_mul(k) {
                        Some(v) if v <= n => out.insert(v),
                        _ => break,
                    }
                }
                out.natural_window = self.natural_window;
            }
            Transform::Divide(k) => {
                if k == 0 {
                    return Err(Error::arg("divisor must be >= 1"));
                }
                for m in 1..=n / k {
                    if self.contains(m * k) {
                        out.insert(m);
                    }
                }
                out.natural_window = self.natural_window / k;
            }
        }
        Ok(out)
    }

    /// Nondecreasing `x_1 ≤ … ≤ x_k` with `FS(x) ⊆ F`, smallest in
    /// lexicographic order. Repeated generators are allowed, as for any
    /// sequence in ℕ.
    pub fn ip_witness(&self, k: usize) -> Option<Vec<usize>> {
        if k == 0 {
            return Some(Vec::new());
        }
        let mut xs = Vec::with_capacity(k);
        if self.ip_extend(k, 1, 0, &[], &mut xs) {
            Some(xs)
        } else {
            None
        }
    }

    fn ip_extend(&self, k: usize, lo: usize, total: usize, sums: &[usize], xs: &mut Vec<usize>) -> bool {
        if xs.len() == k {
            return true;
        }
        let remaining = k - xs.len();
        let mut x = match self.next_member(lo) {
            Some(x) => x,
            None => return false,
        };
        loop {
            // x and every later generator are >= x
            if total + remaining * x > self.window {
                return false;
            }
            if sums.iter().all(|&s| self.contains(s + x)) {
                let mut next: Vec<usize> = Vec::with_capacity(2 * sums.len() + 1);
                next.extend_from_slice(sums);
                next.push(x);
                next.extend(sums.iter().map(|&s| s + x));
                next.sort_unstable();
                next.dedup();
                xs.push(x);
                if self.ip_extend(k, x, total + x, &next, xs) {
                    return true;
                }
                xs.pop();
            }
            x = match self.next_member(x + 1) {
                Some(x) => x,
                None => return false,
            };
        }
    }

    /// Shifts `a_1..a_k ≥ 0` with `a_j + (base ∩ [1, j]) ⊆ F`, each the
    /// smallest possible.
    pub fn block_witness(&self, base: &WindowSet, k: usize) -> Result<Option<Vec<usize>>> {
        if k > base.window {
            return Err(Error::arg(format!("depth {k} exceeds base window {}", base.window)));
        }
        let mut shifts = Vec::with_capacity(k);
        let mut prefix: Vec<usize> = Vec::new();
        for j in 1..=k {
            if base.contains(j) {
                prefix.push(j);
            }
            let Some(&first) = prefix.first() else {
                shifts.push(0);
                continue;
            };
            let last = *prefix.last().unwrap();
            let mut found = None;
            let mut t = self.next_member(first);
            while let Some(tm) = t {
                let a = tm - first;
                if a + last > self.window {
                    break;
                }
                if prefix.iter().all(|&b| self.contains(a + b)) {
                    found = Some(a);
                    break;
                }
                t = self.next_member(tm + 1);
            }
            match found {
                Some(a) => shifts.push(a),
                None => return Ok(None),
            }
        }
        Ok(Some(shifts))
    }
}

/// `FS(x_1..x_k)`: all sums over nonempty index subsets, inside `[1, window]`.
pub fn finite_sums(xs: &[usize], window: usize) -> Result<WindowSet> {
    if xs.is_empty() {
        return Err(Error::arg("finite sums need at least one generator"));
    }
    if xs.contains(&0) {
        return Err(Error::arg("generators must be positive"));
    }
    let total: u128 = xs.iter().map(|&x| x as u128).sum();
    if total > window as u128 {
        return Err(Error::Overflow { what: "finite sums".into(), needed: total, window });
    }
    let mut out = WindowSet::empty(window);
    let mut sums: Vec<usize> = Vec::new();
    for &x in xs {
        let mut grown = sums.clone();
        grown.push(x);
        grown.extend(sums.iter().map(|&s| s + x));
        grown.sort_unstable();
        grown.dedup();
        sums = grown;
    }
    for s in sums {
        out.insert(s);
    }
    Ok(out)
}
