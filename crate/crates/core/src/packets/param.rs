//! Block-sequence encodings of cohomologically induced, (limit of)
//! discrete series, and tempered representations.

use std::fmt;

use crate::error::{Result, ThetaError};
use crate::scalar::{HalfInt, Signature, UnitaryCharacter};

/// One block of a normalized `A_q(λ)` parameter: the Levi factor `U(r, s)`
/// carrying the value `lambda`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Block {
    pub lambda: HalfInt,
    pub r: usize,
    pub s: usize,
}

impl Block {
    pub const fn new(lambda: HalfInt, r: usize, s: usize) -> Self {
        Self { lambda, r, s }
    }

    pub const fn size(&self) -> usize {
        self.r + self.s
    }

    pub const fn is_singleton(&self) -> bool {
        self.size() == 1
    }

    /// Singleton blocks have a definite side.
    pub fn side(&self) -> Option<Side> {
        match (self.r, self.s) {
            (1, 0) => Some(Side::P),
            (0, 1) => Some(Side::Q),
            _ => None,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},({},{}))", self.lambda, self.r, self.s)
    }
}

/// A normalized cohomologically induced representation `ⁿA_q(λ)`, encoded as
/// its blocks listed in strictly decreasing order of the eigenvalue defining
/// `q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RepParam {
    blocks: Vec<Block>,
}

impl RepParam {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let rep = Self { blocks };
        rep.validate()?;
        Ok(rep)
    }

    pub(crate) fn new_unchecked(blocks: Vec<Block>) -> Self {
        Self { blocks }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim() as i64;
        for (j, b) in self.blocks.iter().enumerate() {
            if b.size() == 0 {
                return Err(ThetaError::invalid(format!(
                    "block {j} has signature (0,0)"
                )));
            }
            if !b.lambda.in_coset(n - b.size() as i64) {
                return Err(ThetaError::invalid(format!(
                    "block {j} value {} is not in Z + ({n} - {})/2",
                    b.lambda,
                    b.size()
                )));
            }
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    pub fn signature(&self) -> Signature {
        self.blocks.iter().fold(Signature::default(), |acc, b| {
            Signature::new(acc.p + b.r, acc.q + b.s)
        })
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::size).sum()
    }

    pub fn is_all_singletons(&self) -> bool {
        self.blocks.iter().all(Block::is_singleton)
    }

    /// The infinitesimal character: every block of size `k` at `c` expands to
    /// `c + (k+1)/2 - j` for `j = 1..=k`. Returned sorted decreasingly.
    pub fn infinitesimal_character(&self) -> Vec<HalfInt> {
        let mut out: Vec<HalfInt> = self
            .blocks
            .iter()
            .flat_map(|b| block_ladder(b.lambda, b.size()))
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// `c + (k+1)/2 - j`, `j = 1..=k`.
pub(crate) fn block_ladder(center: HalfInt, k: usize) -> impl Iterator<Item = HalfInt> {
    let k = k as i64;
    (1..=k).map(move |j| center + HalfInt::from_twice(k + 1 - 2 * j))
}

impl fmt::Display for RepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

/// Which factor of the maximal compact `U(p) × U(q)` a coordinate belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    P,
    Q,
}

impl Side {
    pub const fn flip(self) -> Self {
        match self {
            Side::P => Side::Q,
            Side::Q => Side::P,
        }
    }

    pub const fn block(self, lambda: HalfInt) -> Block {
        match self {
            Side::P => Block::new(lambda, 1, 0),
            Side::Q => Block::new(lambda, 0, 1),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::P => "p",
            Side::Q => "q",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LdsEntry {
    pub lambda: HalfInt,
    pub side: Side,
}

impl LdsEntry {
    pub const fn new(lambda: HalfInt, side: Side) -> Self {
        Self { lambda, side }
    }
}

/// A (limit of) discrete series: a Harish-Chandra parameter together with a
/// compatible positive system, stored as singletons in decreasing order of a
/// regular element defining the Borel.
///
/// Valid sequences have weakly decreasing `λ`; equal-`λ` runs alternate sides.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LdsParam {
    entries: Vec<LdsEntry>,
}

/// A maximal run of equal `λ` inside an [`LdsParam`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LdsGroup<'a> {
    pub lambda: HalfInt,
    /// 0-based position of the first entry.
    pub start: usize,
    pub entries: &'a [LdsEntry],
}

impl LdsGroup<'_> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first_side(&self) -> Side {
        self.entries[0].side
    }

    pub fn counts(&self) -> (usize, usize) {
        let p = self.entries.iter().filter(|e| e.side == Side::P).count();
        (p, self.entries.len() - p)
    }
}

impl LdsParam {
    pub fn new(entries: Vec<LdsEntry>) -> Result<Self> {
        let lds = Self { entries };
        lds.validate()?;
        Ok(lds)
    }

    /// Builds from `(twice_lambda, side)` pairs; convenient in tests.
    pub fn from_pairs(pairs: &[(i64, Side)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(t, side)| LdsEntry::new(HalfInt::from_twice(t), side))
                .collect(),
        )
    }

    pub(crate) fn new_unchecked(entries: Vec<LdsEntry>) -> Self {
        Self { entries }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim() as i64;
        for (i, e) in self.entries.iter().enumerate() {
            if !e.lambda.in_coset(n - 1) {
                return Err(ThetaError::invalid(format!(
                    "entry {i} value {} is not in Z + ({n}-1)/2",
                    e.lambda
                )));
            }
        }
        for (i, w) in self.entries.windows(2).enumerate() {
            if w[0].lambda < w[1].lambda {
                return Err(ThetaError::invalid(format!(
                    "values increase at position {}: {} < {}",
                    i + 1,
                    w[0].lambda,
                    w[1].lambda
                )));
            }
            if w[0].lambda == w[1].lambda && w[0].side == w[1].side {
                return Err(ThetaError::invalid(format!(
                    "equal values {} at positions {i},{} lie on the same side",
                    w[0].lambda,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[LdsEntry] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn signature(&self) -> Signature {
        let p = self.entries.iter().filter(|e| e.side == Side::P).count();
        Signature::new(p, self.entries.len() - p)
    }

    pub fn groups(&self) -> Vec<LdsGroup<'_>> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.entries.len() {
            let lambda = self.entries[start].lambda;
            let mut end = start + 1;
            while end < self.entries.len() && self.entries[end].lambda == lambda {
                end += 1;
            }
            out.push(LdsGroup {
                lambda,
                start,
                entries: &self.entries[start..end],
            });
            start = end;
        }
        out
    }

    pub fn is_discrete_series(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].lambda != w[1].lambda)
    }

    pub fn to_rep(&self) -> RepParam {
        RepParam::new_unchecked(
            self.entries
                .iter()
                .map(|e| e.side.block(e.lambda))
                .collect(),
        )
    }

    /// Reads a singleton-only [`RepParam`] as an [`LdsParam`], validating it.
    pub fn from_rep(rep: &RepParam) -> Result<Self> {
        let entries = rep
            .blocks()
            .iter()
            .map(|b| {
                b.side()
                    .map(|side| LdsEntry::new(b.lambda, side))
                    .ok_or_else(|| ThetaError::invalid(format!("block {b} is not a singleton")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl fmt::Display for LdsParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{})", e.lambda, e.side)?;
        }
        write!(f, "] of {}", self.signature())
    }
}

/// An irreducible tempered representation `I(ξ_1, …, ξ_d, π_0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TemperedParam {
    xis: Vec<UnitaryCharacter>,
    lds: LdsParam,
}

impl TemperedParam {
    pub fn new(xis: Vec<UnitaryCharacter>, lds: LdsParam) -> Result<Self> {
        let n = lds.dim() + 2 * xis.len();
        for (i, xi) in xis.iter().enumerate() {
            if !xi.admissible_for_dim(n) {
                return Err(ThetaError::invalid(format!(
                    "inducing character {i} ({xi}) is conjugate-selfdual of sign (-1)^(n-1) for n = {n}"
                )));
            }
        }
        Ok(Self { xis, lds })
    }

    pub fn from_lds(lds: LdsParam) -> Self {
        Self {
            xis: Vec::new(),
            lds,
        }
    }

    pub fn xis(&self) -> &[UnitaryCharacter] {
        &self.xis
    }

    pub fn lds(&self) -> &LdsParam {
        &self.lds
    }

    pub fn d(&self) -> usize {
        self.xis.len()
    }

    pub fn dim(&self) -> usize {
        self.lds.dim() + 2 * self.xis.len()
    }

    pub fn signature(&self) -> Signature {
        let s = self.lds.signature();
        Signature::new(s.p + self.d(), s.q + self.d())
    }
}

impl fmt::Display for TemperedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.xis.is_empty() {
            return write!(f, "{}", self.lds);
        }
        f.write_str("I(")?;
        for xi in &self.xis {
            write!(f, "{xi}, ")?;
        }
        write!(f, "{})", self.lds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Side::{P, Q};

    #[test]
    fn lds_validation() {
        assert!(LdsParam::from_pairs(&[(1, P), (-1, Q)]).is_ok());
        assert!(LdsParam::from_pairs(&[(1, P), (1, Q)]).is_ok());
        // same side at equal values
        assert!(LdsParam::from_pairs(&[(1, P), (1, P)]).is_err());
        // increasing
        assert!(LdsParam::from_pairs(&[(-1, P), (1, Q)]).is_err());
        // wrong lattice for n = 2
        assert!(LdsParam::from_pairs(&[(2, P), (0, Q)]).is_err());
        assert!(LdsParam::from_pairs(&[]).is_ok());
    }

    #[test]
    fn rep_validation() {
        let h = HalfInt::from_twice;
        assert!(RepParam::new(vec![Block::new(h(2), 1, 0), Block::new(h(1), 1, 1)]).is_ok());
        assert!(RepParam::new(vec![Block::new(h(3), 1, 0), Block::new(h(1), 1, 1)]).is_err());
        assert!(RepParam::new(vec![Block::new(h(0), 0, 0)]).is_err());
    }

    #[test]
    fn groups_split_on_value() {
        let lds = LdsParam::from_pairs(&[(2, P), (2, Q), (2, P), (0, Q), (-2, Q)]).unwrap();
        let groups = lds.groups();
        assert_eq!(groups.len(), 3);
        assert_eq!(groups[0].counts(), (2, 1));
        assert_eq!(groups[1].start, 3);
        assert_eq!(lds.signature(), Signature::new(2, 3));
    }

    #[test]
    fn infinitesimal_character_expands_blocks() {
        let rep = RepParam::new(vec![Block::new(HalfInt::ZERO, 3, 0)]).unwrap();
        assert_eq!(
            rep.infinitesimal_character(),
            vec![HalfInt::from_int(1), HalfInt::ZERO, HalfInt::from_int(-1)]
        );
    }
}
