//! Upward-closed families of subsets of a small universe `{1..n}`.
//!
//! A family is stored as the antichain of its inclusion-minimal members;
//! subsets are bitmasks with element `i` at bit `i − 1`.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_UNIVERSE: usize = 20;

pub type Mask = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFamily {
    universe: usize,
    minimal: Vec<Mask>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FilterVerdict {
    Filter,
    /// Two members whose intersection is not a member.
    NotFilter { first: Vec<usize>, second: Vec<usize>, intersection: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RamseyVerdict {
    Ramsey,
    /// A member split into two parts, neither of which is a member.
    NotRamsey { set: Vec<usize>, part1: Vec<usize>, part2: Vec<usize> },
}

pub fn mask_to_set(mask: Mask) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn minimalize(mut masks: Vec<Mask>) -> Vec<Mask> {
    masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut kept: Vec<Mask> = Vec::new();
    for m in masks {
        if !kept.iter().any(|&k| k & !m == 0) {
            kept.push(m);
        }
    }
    kept.sort_unstable();
    kept
}

impl FiniteFamily {
    /// Family generated by `generators`: everything containing one of them.
    pub fn upward_closure(universe: usize, generators: &[Mask]) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::Capacity {
                what: "universe size".into(),
                got: universe as u128,
                limit: MAX_UNIVERSE as u128,
            });
        }
        let full = Self::full_mask_of(universe);
        if let Some(g) = generators.iter().find(|&&g| g & !full != 0) {
            return Err(Error::arg(format!("generator {:?} not inside {{1..{universe}}}", mask_to_set(*g))));
        }
        Ok(FiniteFamily { universe, minimal: minimalize(generators.to_vec()) })
    }

    pub fn from_sets(universe: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(generators.len());
        for g in generators {
            let mut m: Mask = 0;
            for &e in g {
                if e == 0 || e > universe {
                    return Err(Error::arg(format!("element {e} not in {{1..{universe}}}")));
                }
                m |= 1 << (e - 1);
            }
            masks.push(m);
        }
        Self::upward_closure(universe, &masks)
    }

    fn full_mask_of(universe: usize) -> Mask {
        if universe == 32 {
            !0
        } else {
            (1u32 << universe) - 1
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn full_mask(&self) -> Mask {
        Self::full_mask_of(self.universe)
    }

    pub fn minimal_members(&self) -> &[Mask] {
        &self.minimal
    }

    pub fn minimal_sets(&self) -> Vec<Vec<usize>> {
        self.minimal.iter().map(|&m| mask_to_set(m)).collect()
    }

    /// Nonempty and not containing the empty set.
    pub fn is_proper(&self) -> bool {
        !self.minimal.is_empty() && !self.minimal.contains(&0)
    }

    pub fn contains(&self, set: Mask) -> bool {
        self.minimal.iter().any(|&m| m & !set == 0)
    }

    /// All members, in increasing mask order.
    pub fn members(&self) -> impl Iterator<Item = Mask> + '_ {
        (0..=self.full_mask()).filter(move |&s| self.contains(s))
    }

    fn require_proper(&self) -> Result<()> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::Domain("operation needs a proper family".into()))
        }
    }

    /// The family of sets meeting every member: the minimal transversals of
    /// the antichain.
    pub fn dual(&self) -> Result<FiniteFamily> {
        self.require_proper()?;
        let mut transversals: Vec<Mask> = vec![0];
        for &m in &self.minimal {
            let mut next = Vec::new();
            for &t in &transversals {
                if t & m != 0 {
                    next.push(t);
                } else {
                    let mut bits = m;
                    while bits != 0 {
                        let e = bits & bits.wrapping_neg();
                        next.push(t | e);
                        bits &= bits - 1;
                    }
                }
            }
            transversals = minimalize(next);
        }
        Ok(FiniteFamily { universe: self.universe, minimal: transversals })
    }

    /// Closed under pairwise intersection. On an antichain with two or more
    /// minimal members, any two of them already intersect outside the family.
    pub fn is_filter(&self) -> Result<FilterVerdict> {
        self.require_proper()?;
        if self.minimal.len() == 1 {
            return Ok(FilterVerdict::Filter);
        }
        let (a, b) = (self.minimal[0], self.minimal[1]);
        debug_assert!(!self.contains(a & b));
        Ok(FilterVerdict::NotFilter {
            first: mask_to_set(a),
            second: mask_to_set(b),
            intersection: mask_to_set(a & b),
        })
    }

    /// Inclusion-maximal subsets that are not members.
    fn maximal_non_members(&self) -> Vec<Mask> {
        let full = self.full_mask();
        (0..=full)
            .filter(|&s| {
                !self.contains(s) && {
                    let mut missing = full & !s;
                    let mut maximal = true;
                    while missing != 0 {
                        let e = missing & missing.wrapping_neg();
                        if !self.contains(s | e) {
                            maximal = false;
                            break;
                        }
                        missing &= missing - 1;
                    }
                    maximal
                }
            })
            .collect()
    }

    /// Whether every split `F = F1 ⊎ F2` of a member leaves some part in
    /// the family. Non-members form a down-set, so a failing split exists
    /// iff two maximal non-members have a member as their union.
    pub fn ramsey_check(&self) -> Result<RamseyVerdict> {
        self.require_proper()?;
        let tops = self.maximal_non_members();
        for (i, &a) in tops.iter().enumerate() {
            for &b in &tops[i..] {
                if self.contains(a | b) {
                    return Ok(RamseyVerdict::NotRamsey {
                        set: mask_to_set(a | b),
                        part1: mask_to_set(a),
                        part2: mask_to_set(b & !a),
                    });
                }
            }
        }
        Ok(RamseyVerdict::Ramsey)
    }
}
