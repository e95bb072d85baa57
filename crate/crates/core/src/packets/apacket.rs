//! A-packets of cohomologically induced representations attached to
//! parameters `χ_{μ_1} ⊕ … ⊕ χ_{μ_n} ⊕ (χ_{μ_0} ⊠ S_{m-n})`.

use std::fmt;

use crate::error::{Result, ThetaError};
use crate::packets::param::{Block, RepParam};
use crate::scalar::{space_sign_exponent, HalfInt, Sign, Signature};

/// An A-parameter with a single `SL_2` factor of dimension `sl2 = m - n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AParamCoh {
    mus: Vec<HalfInt>,
    mu0: HalfInt,
    sl2: usize,
    i0: usize,
}

impl AParamCoh {
    /// Computes the insertion point `i0` (1-based) of `mu0` among `mus`.
    pub fn new(mus: Vec<HalfInt>, mu0: HalfInt, sl2: usize) -> Result<Self> {
        let i0 = mus.iter().take_while(|&&mu| mu > mu0).count() + 1;
        Self::with_insertion(mus, mu0, sl2, i0)
    }

    pub fn with_insertion(mus: Vec<HalfInt>, mu0: HalfInt, sl2: usize, i0: usize) -> Result<Self> {
        let phi = Self { mus, mu0, sl2, i0 };
        phi.validate()?;
        Ok(phi)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.mus.len() as i64;
        let m = self.m() as i64;
        if self.sl2 == 0 {
            return Err(ThetaError::invalid(
                "the SL2 factor must have positive dimension",
            ));
        }
        if self.mus.windows(2).any(|w| w[0] < w[1]) {
            return Err(ThetaError::invalid("mus must be weakly decreasing"));
        }
        if let Some(mu) = self.mus.iter().find(|mu| !mu.in_coset(m - 1)) {
            return Err(ThetaError::invalid(format!(
                "mu {mu} is not in Z + ({m}-1)/2"
            )));
        }
        if !self.mu0.in_coset(n) {
            return Err(ThetaError::invalid(format!(
                "mu0 {} is not in Z + {n}/2",
                self.mu0
            )));
        }
        let i0 = self.i0;
        let placed = (1..=self.mus.len() + 1).contains(&i0)
            && (i0 == 1 || self.mus[i0 - 2] > self.mu0)
            && (i0 > self.mus.len() || self.mus[i0 - 1] <= self.mu0);
        if !placed {
            return Err(ThetaError::invalid(format!(
                "i0 = {i0} is not the insertion point of mu0"
            )));
        }
        Ok(())
    }

    pub fn mus(&self) -> &[HalfInt] {
        &self.mus
    }

    pub fn mu0(&self) -> HalfInt {
        self.mu0
    }

    pub fn sl2(&self) -> usize {
        self.sl2
    }

    pub fn i0(&self) -> usize {
        self.i0
    }

    pub fn n(&self) -> usize {
        self.mus.len()
    }

    pub fn m(&self) -> usize {
        self.mus.len() + self.sl2
    }
}

impl fmt::Display for AParamCoh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for mu in &self.mus {
            write!(f, "{mu}, ")?;
        }
        write!(f, "{} x S{}]", self.mu0, self.sl2)
    }
}

/// A character of the component group, given on the generators `e'_i`
/// (`i = 1..n`) and `e'_0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EtaPrime {
    pub on_mus: Vec<Sign>,
    pub on_e0: Sign,
}

impl EtaPrime {
    pub fn new(on_mus: Vec<Sign>, on_e0: Sign) -> Self {
        Self { on_mus, on_e0 }
    }

    /// Checks that `self` descends to the component group of `phi`.
    pub fn validate_for(&self, phi: &AParamCoh) -> Result<()> {
        if self.on_mus.len() != phi.n() {
            return Err(ThetaError::invalid(format!(
                "eta' has {} values for {} mus",
                self.on_mus.len(),
                phi.n()
            )));
        }
        for i in 1..phi.n() {
            if phi.mus[i] == phi.mus[i - 1] && self.on_mus[i] != self.on_mus[i - 1] {
                return Err(ThetaError::invalid(format!(
                    "eta' differs on equal mus at indices {i} and {}",
                    i + 1
                )));
            }
        }
        if phi.sl2 == 1 {
            for (mu, &e) in phi.mus.iter().zip(&self.on_mus) {
                if *mu == phi.mu0 && e != self.on_e0 {
                    return Err(ThetaError::invalid(format!(
                        "eta' differs between e'_0 and a mu equal to mu0 = {mu}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn product(&self) -> Sign {
        self.on_mus.iter().copied().product::<Sign>() * self.on_e0
    }
}

/// The per-block signatures `(r_i, s_i)`, `i = 1..=n+1`, before the sign test;
/// the entry at `i0` is obtained by subtraction and may be negative.
pub fn apacket_block_counts(phi: &AParamCoh, eta: &EtaPrime, target: Signature) -> Vec<(i64, i64)> {
    let n = phi.n();
    let sl2 = phi.sl2 as i64;
    let i0 = phi.i0;
    let mut counts = vec![(0i64, 0i64); n + 1];
    for i in 1..=n + 1 {
        let p_side = if i < i0 {
            eta.on_mus[i - 1] == Sign::pow_neg_one(i as i64 - 1)
        } else if i > i0 {
            eta.on_mus[i - 2] == Sign::pow_neg_one(i as i64 + sl2 - 2)
        } else {
            continue;
        };
        counts[i - 1] = if p_side { (1, 0) } else { (0, 1) };
    }
    let (r_rest, s_rest) = counts.iter().fold((0, 0), |(a, b), &(r, s)| (a + r, b + s));
    counts[i0 - 1] = (target.p as i64 - r_rest, target.q as i64 - s_rest);
    counts
}

/// The representation `σ(φ', η')` of `U(target)` as a normalized `A_q(λ')`,
/// or `None` when it vanishes.
pub fn apacket_member(
    phi: &AParamCoh,
    eta: &EtaPrime,
    target: Signature,
) -> Result<Option<RepParam>> {
    phi.validate()?;
    eta.validate_for(phi)?;
    if target.dim() != phi.m() {
        return Err(ThetaError::invalid(format!(
            "target {target} does not have dimension m = {}",
            phi.m()
        )));
    }
    let counts = apacket_block_counts(phi, eta, target);
    let i0 = phi.i0;
    let (r0, s0) = counts[i0 - 1];
    if r0 < 0 || s0 < 0 {
        return Ok(None);
    }
    let sl2 = phi.sl2 as i64;
    let exponent = r0 * (i0 as i64 - 1) + s0 * i0 as i64 + space_sign_exponent(sl2);
    if eta.on_e0 != Sign::pow_neg_one(exponent) {
        return Ok(None);
    }
    let blocks = counts
        .iter()
        .enumerate()
        .map(|(j, &(r, s))| {
            let i = j + 1;
            let lambda = match i.cmp(&i0) {
                std::cmp::Ordering::Less => phi.mus[i - 1],
                std::cmp::Ordering::Equal => phi.mu0,
                std::cmp::Ordering::Greater => phi.mus[i - 2],
            };
            Block::new(lambda, r as usize, s as usize)
        })
        .collect();
    Ok(Some(RepParam::new_unchecked(blocks)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::range::{range_classify, Range};

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn example() -> AParamCoh {
        AParamCoh::new(vec![h(2)], h(1), 2).unwrap()
    }

    #[test]
    fn insertion_point() {
        let phi = example();
        assert_eq!(phi.i0(), 2);
        assert_eq!(phi.m(), 3);
        assert!(AParamCoh::with_insertion(vec![h(2)], h(1), 2, 1).is_err());
    }

    #[test]
    fn member_accepted() {
        let eta = EtaPrime::new(vec![Sign::Plus], Sign::Plus);
        let sigma = apacket_member(&example(), &eta, Signature::new(2, 1))
            .unwrap()
            .unwrap();
        assert_eq!(
            sigma.blocks(),
            &[Block::new(h(2), 1, 0), Block::new(h(1), 1, 1)]
        );
        assert_eq!(range_classify(&sigma), Range::WeaklyFairOnly);
    }

    #[test]
    fn member_rejected_by_sign() {
        let eta = EtaPrime::new(vec![Sign::Plus], Sign::Minus);
        assert_eq!(
            apacket_member(&example(), &eta, Signature::new(2, 1)).unwrap(),
            None
        );
    }

    #[test]
    fn member_rejected_by_count() {
        let eta = EtaPrime::new(vec![Sign::Plus], Sign::Plus);
        assert_eq!(
            apacket_member(&example(), &eta, Signature::new(3, 0)).unwrap(),
            None
        );
    }

    #[test]
    fn wrong_dimension_is_error() {
        let eta = EtaPrime::new(vec![Sign::Plus], Sign::Plus);
        assert!(apacket_member(&example(), &eta, Signature::new(1, 1)).is_err());
    }

    #[test]
    fn eta_must_descend() {
        let phi = AParamCoh::new(vec![h(2), h(2)], h(0), 1).unwrap();
        let eta = EtaPrime::new(vec![Sign::Plus, Sign::Minus], Sign::Plus);
        assert!(eta.validate_for(&phi).is_err());
        let phi = AParamCoh::new(vec![h(4), h(2)], h(2), 1).unwrap();
        let eta = EtaPrime::new(vec![Sign::Plus, Sign::Minus], Sign::Plus);
        assert!(eta.validate_for(&phi).is_err());
    }
}
