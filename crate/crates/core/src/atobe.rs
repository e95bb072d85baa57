//! Atobe's invariants of a tempered representation and the nonvanishing
//! criterion for its theta lifts.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Result, ThetaError};
use crate::packets::{lds_to_packet, LdsEntry, LdsParam, TemperedParam};
use crate::scalar::{Convention, HalfInt, Sign, Signature, UnitaryCharacter};

/// Elements `(ν, ±1)` of the sets `X_π`.
pub type SignedSet = BTreeSet<(HalfInt, Sign)>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtobeInvariants {
    pub k: i64,
    pub r_pi: usize,
    pub s_pi: usize,
    pub x: SignedSet,
    pub xinf: SignedSet,
    pub mus_contain_zero: bool,
    pub has_zero_pair: bool,
    /// `±(k+1)/2` both occur, one of them as a `μ`, and `ε` alternates
    /// between them. Relaxes the bound to `l ≥ -1` when `k ≥ 0`.
    pub boundary_exception: bool,
    /// Number of rounds of the reduction that removed something.
    pub reduction_steps: usize,
}

/// The odd/even split of the shifted L-parameter.
struct Decomposition {
    /// Values with odd multiplicity, strictly decreasing, with `ε`.
    kappas: Vec<(HalfInt, Sign)>,
    /// Values with even multiplicity, strictly decreasing, with `ε`.
    mus: Vec<(HalfInt, Sign)>,
    epsilon: BTreeMap<HalfInt, Sign>,
}

fn decompose(lds: &LdsParam, k0: i64, conv: Convention) -> Result<Decomposition> {
    let phi = lds_to_packet(lds);
    let shift = conv.source_shift();
    let mut kappas = Vec::new();
    let mut mus = Vec::new();
    let mut epsilon = BTreeMap::new();
    for (&(kappa, mult), &e) in phi.kappas.iter().zip(&phi.eta) {
        let v = kappa - shift;
        if !v.in_coset(k0 - 1) {
            return Err(ThetaError::invalid(format!(
                "shifted parameter {v} is not in Z + ({k0}-1)/2; m0 = {} has the wrong parity",
                conv.m0
            )));
        }
        epsilon.insert(v, e);
        if mult % 2 == 1 {
            kappas.push((v, e));
        } else {
            mus.push((v, e));
        }
    }
    Ok(Decomposition {
        kappas,
        mus,
        epsilon,
    })
}

/// `ε` alternates along `top, top-1, …, bottom` (all values must be present).
fn alternates(epsilon: &BTreeMap<HalfInt, Sign>, top: HalfInt, bottom: HalfInt) -> bool {
    let mut v = top;
    while v > bottom {
        let next = v - HalfInt::from_int(1);
        match (epsilon.get(&v), epsilon.get(&next)) {
            (Some(a), Some(b)) if a != b => {}
            _ => return false,
        }
        v = next;
    }
    true
}

fn ladder_top(k: i64) -> HalfInt {
    HalfInt::from_twice(k - 1)
}

fn find_k(dec: &Decomposition, k0: i64) -> i64 {
    let kappa_set: BTreeSet<HalfInt> = dec.kappas.iter().map(|&(v, _)| v).collect();
    let kappa_eps: BTreeMap<HalfInt, Sign> = dec.kappas.iter().copied().collect();
    let mut best = k0;
    let mut k = if k0 == 0 { 2 } else { 1 };
    while k as usize <= dec.kappas.len() {
        let top = ladder_top(k);
        let ladder_present = (0..k).all(|j| kappa_set.contains(&(top - HalfInt::from_int(j))));
        if ladder_present && alternates(&kappa_eps, top, -top) {
            best = k;
        }
        k += 2;
    }
    best
}

/// One round of the reduction; returns `None` when nothing is removable.
fn reduction_round(x: &SignedSet, k: i64) -> Option<SignedSet> {
    let values: Vec<HalfInt> = x
        .iter()
        .map(|&(v, _)| v)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .rev()
        .collect();
    let mut removed = BTreeSet::new();
    for w in values.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        if x.contains(&(hi, Sign::Plus))
            && x.contains(&(lo, Sign::Minus))
            && hi.abs().twice().min(lo.abs().twice()) > k
            && hi.signum() * lo.signum() >= 0
        {
            removed.insert((hi, Sign::Plus));
            removed.insert((lo, Sign::Minus));
        }
    }
    if removed.is_empty() {
        None
    } else {
        Some(x.difference(&removed).copied().collect())
    }
}

/// Iterates the reduction `X^(j) ⊃ X^(j+1)` to its fixed point, returning it
/// with the number of rounds that removed elements.
pub fn reduce_x(x: &SignedSet, k: i64) -> (SignedSet, usize) {
    let mut current = x.clone();
    let mut steps = 0;
    while let Some(next) = reduction_round(&current, k) {
        current = next;
        steps += 1;
    }
    (current, steps)
}

/// The invariants of `pi` relative to the parity choice `k0` and `χ_V`.
pub fn atobe_invariants(pi: &TemperedParam, k0: i64, conv: Convention) -> Result<AtobeInvariants> {
    if k0 != 0 && k0 != -1 {
        return Err(ThetaError::invalid(format!("k0 must be -1 or 0, got {k0}")));
    }
    let dec = decompose(pi.lds(), k0, conv)?;
    let n = pi.dim();
    let a = dec.kappas.len();
    let k = find_k(&dec, k0);

    let half_rest = (n - a) / 2;
    let (mut r_pi, mut s_pi) = (half_rest, half_rest);
    let mut x = SignedSet::new();
    for (i, &(kappa, e)) in dec.kappas.iter().enumerate() {
        let sign = Sign::pow_neg_one(i as i64) * e;
        x.insert((kappa, sign));
        if kappa.abs().twice() > k {
            match sign.value() * kappa.signum() {
                1 => r_pi += 1,
                -1 => s_pi += 1,
                _ => {}
            }
        }
    }
    for &(mu, e) in &dec.mus {
        let c = dec.kappas.iter().filter(|&&(kappa, _)| kappa > mu).count();
        if e != Sign::pow_neg_one(c as i64) {
            x.insert((mu, Sign::Plus));
            x.insert((mu, Sign::Minus));
        }
    }
    let (xinf, reduction_steps) = reduce_x(&x, k);

    let zero = HalfInt::ZERO;
    let mus_contain_zero = dec.mus.iter().any(|&(v, _)| v == zero);
    let has_zero_pair = x.contains(&(zero, Sign::Plus)) && x.contains(&(zero, Sign::Minus));

    let boundary_exception = k >= 0 && {
        let h = HalfInt::from_twice(k + 1);
        let present = |v: HalfInt| dec.epsilon.contains_key(&v);
        let in_mus = |v: HalfInt| dec.mus.iter().any(|&(m, _)| m == v);
        present(h) && present(-h) && (in_mus(h) || in_mus(-h)) && alternates(&dec.epsilon, h, -h)
    };

    Ok(AtobeInvariants {
        k,
        r_pi,
        s_pi,
        x,
        xinf,
        mus_contain_zero,
        has_zero_pair,
        boundary_exception,
        reduction_steps,
    })
}

/// `(#C^+(x), #C^-(x))`.
pub fn c_count(inv: &AtobeInvariants, x: i64) -> (usize, usize) {
    let mut plus = 0;
    let mut minus = 0;
    for &(nu, sign) in &inv.xinf {
        // twice of (k-1)/2 ± ν, compared against [0, 2x)
        let t = match sign {
            Sign::Plus => inv.k - 1 + nu.twice(),
            Sign::Minus => inv.k - 1 - nu.twice(),
        };
        if 0 <= t && t < 2 * x {
            match sign {
                Sign::Plus => plus += 1,
                Sign::Minus => minus += 1,
            }
        }
    }
    (plus, minus)
}

/// `π̄ ⊗ (χ_V ∘ det)`: the contragredient twisted by `χ_V`, still on `U(p,q)`.
pub fn dual_param(pi: &TemperedParam, conv: Convention) -> TemperedParam {
    let shift = HalfInt::from_int(conv.m0);
    let entries = pi
        .lds()
        .entries()
        .iter()
        .rev()
        .map(|e| LdsEntry::new(shift - e.lambda, e.side))
        .collect();
    let xis = pi
        .xis()
        .iter()
        .map(|xi| UnitaryCharacter::new(2 * conv.m0 - xi.weight, -xi.continuous))
        .collect();
    TemperedParam::new(xis, LdsParam::new_unchecked(entries))
        .expect("twisting preserves admissibility of inducing characters")
}

/// The parity choice `k0` for lifts between dimensions `n` and `m`.
pub fn k0_for(n: usize, m: usize) -> i64 {
    if (m + n).is_multiple_of(2) {
        0
    } else {
        -1
    }
}

/// Whether `θ_{r,s}(π)` is nonzero.
pub fn nonvanishing(pi: &TemperedParam, target: Signature, conv: Convention) -> Result<bool> {
    let m = target.dim();
    conv.check_target(m)?;
    let k0 = k0_for(pi.dim(), m);
    let inv = atobe_invariants(pi, k0, conv)?;
    let (r, s) = (target.p as i64, target.q as i64);
    if r - (inv.r_pi as i64) < s - (inv.s_pi as i64) {
        let dual = atobe_invariants(&dual_param(pi, conv), k0, conv)?;
        return Ok(decide(&dual, s, r));
    }
    Ok(decide(&inv, r, s))
}

/// The case table, assuming `r - r_π ≥ s - s_π`.
pub fn decide(inv: &AtobeInvariants, r: i64, s: i64) -> bool {
    let diff = (r - inv.r_pi as i64) - (s - inv.s_pi as i64);
    let l = s - inv.s_pi as i64;
    if diff < 0 {
        return false;
    }
    let counts_ok = |t: i64, bound: i64| {
        let (plus, minus) = c_count(inv, l + t);
        (plus as i64) <= bound && (minus as i64) <= bound
    };
    if inv.k == -1 {
        if diff % 2 == 0 {
            return false;
        }
        let t = (diff - 1) / 2;
        if t >= 1 {
            if inv.has_zero_pair {
                l >= 1 && counts_ok(t, l - 1)
            } else {
                l >= 0 && counts_ok(t, l)
            }
        } else if !inv.mus_contain_zero {
            l >= 0
        } else if inv.has_zero_pair {
            l >= 1
        } else {
            l >= -1
        }
    } else {
        if diff % 2 != 0 {
            return false;
        }
        let t = diff / 2;
        if t >= 1 {
            l >= inv.k && counts_ok(t, l)
        } else if inv.boundary_exception {
            l >= -1
        } else {
            l >= 0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::Side::{P, Q};

    fn temp(pairs: &[(i64, crate::packets::Side)]) -> TemperedParam {
        TemperedParam::from_lds(LdsParam::from_pairs(pairs).unwrap())
    }

    fn set(items: &[(i64, i64)]) -> SignedSet {
        items
            .iter()
            .map(|&(t, s)| (HalfInt::from_twice(t), Sign::from_value(s).unwrap()))
            .collect()
    }

    #[test]
    fn invariants_of_limit_on_u11() {
        let pi = temp(&[(1, P), (-1, Q)]);
        let inv = atobe_invariants(&pi, 0, Convention::new(0, 0)).unwrap();
        assert_eq!(inv.k, 0);
        assert_eq!((inv.r_pi, inv.s_pi), (2, 0));
        assert_eq!(inv.x, set(&[(1, 1), (-1, -1)]));
        assert_eq!(inv.xinf, inv.x);
    }

    #[test]
    fn invariants_of_u10() {
        let pi = temp(&[(0, P)]);
        let inv = atobe_invariants(&pi, -1, Convention::new(0, 0)).unwrap();
        assert_eq!(inv.k, 1);
        assert_eq!((inv.r_pi, inv.s_pi), (0, 0));
        assert_eq!(inv.x, set(&[(0, 1)]));
    }

    #[test]
    fn parity_mismatch_rejected() {
        let pi = temp(&[(0, P)]);
        assert!(atobe_invariants(&pi, 0, Convention::new(0, 0)).is_err());
        assert!(atobe_invariants(&pi, 1, Convention::new(0, 0)).is_err());
    }

    #[test]
    fn adjacent_pair_reduces() {
        let (xinf, steps) = reduce_x(&set(&[(3, 1), (1, -1)]), 0);
        assert!(xinf.is_empty());
        assert_eq!(steps, 1);
        let x = set(&[(1, 1), (-1, -1)]);
        assert_eq!(reduce_x(&x, 0).0, x);
    }

    #[test]
    fn c_counts() {
        let pi = temp(&[(1, P), (-1, Q)]);
        let inv = atobe_invariants(&pi, 0, Convention::new(0, 0)).unwrap();
        assert_eq!(c_count(&inv, 1), (1, 1));
        assert_eq!(c_count(&inv, 0), (0, 0));
        assert_eq!(c_count(&inv, 5), (1, 1));
    }

    #[test]
    fn dual_examples() {
        let conv = Convention::new(0, 0);
        let pi = temp(&[(3, P), (1, P)]);
        assert_eq!(dual_param(&pi, conv), temp(&[(-1, P), (-3, P)]));
        let pi = temp(&[(1, P), (-1, Q)]);
        let dual = dual_param(&pi, conv);
        assert_eq!(dual, temp(&[(1, Q), (-1, P)]));
        let a = atobe_invariants(&pi, 0, conv).unwrap();
        let b = atobe_invariants(&dual, 0, conv).unwrap();
        assert_eq!(b.k, a.k);
        assert_eq!((b.r_pi, b.s_pi), (a.s_pi, a.r_pi));
        assert_eq!(dual_param(&dual, conv), pi);
    }

    #[test]
    fn dual_twists_characters() {
        use num_rational::Rational64;
        let conv = Convention::new(1, 0);
        let xi = UnitaryCharacter::new(3, Rational64::new(1, 2));
        let pi = TemperedParam::new(vec![xi], LdsParam::from_pairs(&[(0, P)]).unwrap()).unwrap();
        let dual = dual_param(&pi, conv);
        assert_eq!(
            dual.xis(),
            &[UnitaryCharacter::new(-1, Rational64::new(-1, 2))]
        );
        assert_eq!(dual.lds(), &LdsParam::from_pairs(&[(2, P)]).unwrap());
        assert_eq!(dual_param(&dual, conv), pi);
    }

    #[test]
    fn nonvanishing_examples() {
        let conv = Convention::new(0, 0);
        let pi = temp(&[(0, P)]);
        assert!(nonvanishing(&pi, Signature::new(1, 1), conv).unwrap());
        assert!(!nonvanishing(&pi, Signature::new(2, 0), conv).unwrap());
        let pi = temp(&[(1, P), (-1, Q)]);
        assert!(nonvanishing(&pi, Signature::new(3, 1), conv).unwrap());
        assert!(!nonvanishing(&pi, Signature::new(4, 0), conv).unwrap());
        assert!(nonvanishing(&pi, Signature::new(2, 0), conv).unwrap());
    }

    #[test]
    fn nonvanishing_rejects_parity() {
        let pi = temp(&[(0, P)]);
        assert!(nonvanishing(&pi, Signature::new(1, 0), Convention::new(0, 0)).is_err());
    }
}
