//! Explicit theta lifts of (limits of) discrete series and tempered
//! representations, the transfer of packet characters, and the
//! correspondence of K-types in the space of joint harmonics.

use std::fmt;

use crate::atobe::nonvanishing;
use crate::error::{Result, ThetaError};
use crate::packets::{
    lds_to_packet, AParamCoh, Block, EtaPrime, LdsEntry, LdsParam, RepParam, Side, TemperedParam,
};
use crate::scalar::{space_sign_exponent, Convention, HalfInt, Sign, Signature, UnitaryCharacter};

/// The lift of a tempered representation: `I(ξ_1', …, ξ_d', inner)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TemperedLift {
    pub xis: Vec<UnitaryCharacter>,
    pub inner: RepParam,
}

impl TemperedLift {
    pub fn signature(&self) -> Signature {
        let s = self.inner.signature();
        Signature::new(s.p + self.xis.len(), s.q + self.xis.len())
    }
}

impl fmt::Display for TemperedLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.xis.is_empty() {
            return write!(f, "{}", self.inner);
        }
        f.write_str("I(")?;
        for xi in &self.xis {
            write!(f, "{xi}, ")?;
        }
        write!(f, "{})", self.inner)
    }
}

fn lift_checks(n: usize, target: Signature, conv: Convention) -> Result<()> {
    conv.check_source(n)?;
    conv.check_target(target.dim())
}

/// `θ_{r,s}(π)` for a (limit of) discrete series `π`, as a normalized
/// `A_q(λ')`; `None` when the lift vanishes.
pub fn theta_lift_lds(
    pi: &LdsParam,
    target: Signature,
    conv: Convention,
) -> Result<Option<RepParam>> {
    lift_checks(pi.dim(), target, conv)?;
    if !nonvanishing(&TemperedParam::from_lds(pi.clone()), target, conv)? {
        return Ok(None);
    }
    let rep = if target.dim() > pi.dim() {
        lift_going_up(pi, target, conv)?
    } else {
        lift_going_down(pi, target, conv)?
    };
    Ok(Some(rep))
}

fn count_sides(entries: &[LdsEntry]) -> (usize, usize) {
    let p = entries.iter().filter(|e| e.side == Side::P).count();
    (p, entries.len() - p)
}

fn lift_going_up(pi: &LdsParam, target: Signature, conv: Convention) -> Result<RepParam> {
    let from = conv.source_shift();
    let to = conv.target_shift();
    let split = pi
        .entries()
        .iter()
        .take_while(|e| e.lambda - from > HalfInt::ZERO)
        .count();
    let (positive, nonpositive) = pi.entries().split_at(split);
    let (p_plus, q_plus) = count_sides(positive);
    let (p_minus, q_minus) = count_sides(nonpositive);
    let zr = target.p as i64 - (p_plus + q_minus) as i64;
    let zs = target.q as i64 - (p_minus + q_plus) as i64;
    if zr < 0 || zs < 0 {
        return Err(ThetaError::inconsistent(format!(
            "lift of {pi} to {target} is nonzero but p+ + q- = {} and p- + q+ = {}",
            p_plus + q_minus,
            p_minus + q_plus
        )));
    }
    let mut blocks: Vec<Block> = positive
        .iter()
        .map(|e| e.side.block(e.lambda - from + to))
        .collect();
    blocks.push(Block::new(to, zr as usize, zs as usize));
    blocks.extend(
        nonpositive
            .iter()
            .map(|e| e.side.flip().block(e.lambda - from + to)),
    );
    Ok(RepParam::new_unchecked(blocks))
}

/// One value of the middle ladder in the going-down case.
struct Rung {
    value: HalfInt,
    p: usize,
    q: usize,
    first: Side,
}

impl Rung {
    fn diff(&self) -> i64 {
        self.p as i64 - self.q as i64
    }
}

/// The theorem's alternatives for `k ≥ 2`: all interior differences equal to
/// `sign`, the two ends in `{sign, 0}`, and balanced ends opening with the
/// prescribed side.
fn ladder_alternative(rungs: &[Rung], sign: i64) -> bool {
    let k = rungs.len();
    let interior = rungs[1..k - 1].iter().all(|g| g.diff() == sign);
    let ends = [&rungs[0], &rungs[k - 1]]
        .iter()
        .all(|g| g.diff() == sign || g.diff() == 0);
    let (first_open, last_open) = if sign == 1 {
        (Side::Q, Side::P)
    } else {
        (Side::P, Side::Q)
    };
    let first_word = rungs[0].diff() != 0 || rungs[0].first == first_open;
    let last_word = rungs[k - 1].diff() != 0 || rungs[k - 1].first == last_open;
    interior && ends && first_word && last_word
}

fn lift_going_down(pi: &LdsParam, target: Signature, conv: Convention) -> Result<RepParam> {
    let from = conv.source_shift();
    let to = conv.target_shift();
    let k = (pi.dim() - target.dim()) as i64;
    let top = k - 1; // twice of (k-1)/2
    let inconsistent = |what: &str| {
        ThetaError::inconsistent(format!("lift of {pi} to {target} is nonzero but {what}"))
    };

    let mut prefix = Vec::new();
    let mut suffix = Vec::new();
    let mut rungs: Vec<Rung> = (0..k)
        .map(|j| Rung {
            value: HalfInt::from_twice(top - 2 * j),
            p: 0,
            q: 0,
            first: Side::P,
        })
        .collect();
    for g in pi.groups() {
        let v = g.lambda - from;
        if v.twice() > top {
            prefix.extend_from_slice(g.entries);
        } else if v.twice() < -top {
            suffix.extend_from_slice(g.entries);
        } else {
            let j = ((top - v.twice()) / 2) as usize;
            let (p, q) = g.counts();
            rungs[j] = Rung {
                value: v,
                p,
                q,
                first: g.first_side(),
            };
        }
    }
    if rungs.iter().any(|g| g.p + g.q == 0) {
        return Err(inconsistent("a ladder value is missing"));
    }
    if k >= 2 && !ladder_alternative(&rungs, 1) && !ladder_alternative(&rungs, -1) {
        return Err(inconsistent("the ladder fits neither sign pattern"));
    }

    let (p_plus, q_plus) = count_sides(&prefix);
    let (p_minus, q_minus) = count_sides(&suffix);
    let mut r_total = p_plus + q_minus;
    let mut s_total = p_minus + q_plus;
    let mut entries: Vec<LdsEntry> = prefix
        .iter()
        .map(|e| LdsEntry::new(e.lambda - from + to, e.side))
        .collect();
    for g in &rungs {
        let drop_p = g.diff() == 1 || (g.diff() == 0 && g.first == Side::Q);
        let (r, s) = if drop_p {
            (g.p - 1, g.q)
        } else {
            (g.p, g.q - 1)
        };
        r_total += r;
        s_total += s;
        let mut side = match g.diff() {
            1 => Side::P,
            -1 => Side::Q,
            _ if r > s => Side::P,
            _ => Side::Q,
        };
        for _ in 0..r + s {
            entries.push(LdsEntry::new(g.value + to, side));
            side = side.flip();
        }
    }
    entries.extend(
        suffix
            .iter()
            .map(|e| LdsEntry::new(e.lambda - from + to, e.side.flip())),
    );
    if Signature::new(r_total, s_total) != target {
        return Err(inconsistent(&format!(
            "the block counts give U({r_total},{s_total})"
        )));
    }
    let lds = LdsParam::new(entries)
        .map_err(|e| inconsistent(&format!("the output is malformed: {e}")))?;
    Ok(lds.to_rep())
}

/// `θ_{r,s}(π)` for tempered `π = I(ξ_1, …, ξ_d, π_0)`.
pub fn theta_lift_tempered(
    pi: &TemperedParam,
    target: Signature,
    conv: Convention,
) -> Result<Option<TemperedLift>> {
    lift_checks(pi.dim(), target, conv)?;
    if !nonvanishing(pi, target, conv)? {
        return Ok(None);
    }
    let d = pi.d();
    if d > target.p.min(target.q) {
        return Err(ThetaError::inconsistent(format!(
            "lift of {pi} to {target} is nonzero with d = {d}"
        )));
    }
    let inner_target = Signature::new(target.p - d, target.q - d);
    let inner = theta_lift_lds(pi.lds(), inner_target, conv)?.ok_or_else(|| {
        ThetaError::inconsistent(format!(
            "lift of {pi} to {target} is nonzero but the inner lift to {inner_target} vanishes"
        ))
    })?;
    let xis = pi
        .xis()
        .iter()
        .map(|xi| xi.twisted(conv.n0 - conv.m0))
        .collect();
    Ok(Some(TemperedLift { xis, inner }))
}

/// `ζ_i` as a function of `m ≡ n (mod 2)`, the index `i ≥ 1` and `i0`.
pub type ZetaRule = fn(same_parity: bool, i: usize, i0: usize) -> Sign;

pub fn standard_zeta(same_parity: bool, i: usize, i0: usize) -> Sign {
    if same_parity && i >= i0 {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

/// The A-parameter `φ'` and the character `η'` attached to `π` and `U(r,s)`
/// when `m > n`.
pub fn eta_transfer(
    pi: &LdsParam,
    target: Signature,
    conv: Convention,
) -> Result<(AParamCoh, EtaPrime)> {
    eta_transfer_with(pi, target, conv, standard_zeta)
}

/// [`eta_transfer`] with a replaceable `ζ` table.
pub fn eta_transfer_with(
    pi: &LdsParam,
    target: Signature,
    conv: Convention,
    zeta: ZetaRule,
) -> Result<(AParamCoh, EtaPrime)> {
    let (n, m) = (pi.dim(), target.dim());
    if m <= n {
        return Err(ThetaError::invalid(format!(
            "transfer needs m > n, got m = {m}, n = {n}"
        )));
    }
    lift_checks(n, target, conv)?;
    if !nonvanishing(&TemperedParam::from_lds(pi.clone()), target, conv)? {
        return Err(ThetaError::invalid(format!(
            "the lift of {pi} to {target} vanishes"
        )));
    }
    let from = conv.source_shift();
    let to = conv.target_shift();
    let signs = lds_to_packet(pi).index_signs();
    let i0 = signs.iter().filter(|&&(kappa, _)| kappa > from).count() + 1;
    let same_parity = (m - n) % 2 == 0;

    let mus = signs.iter().map(|&(kappa, _)| kappa - from + to).collect();
    let zetas: Vec<Sign> = (1..=n).map(|i| zeta(same_parity, i, i0)).collect();
    let on_mus = zetas
        .iter()
        .zip(&signs)
        .map(|(&z, &(_, e))| z * e)
        .collect();
    let zeta0: Sign = zetas.iter().copied().product();
    let sig = pi.signature();
    let exponent = space_sign_exponent(sig.p as i64 - sig.q as i64)
        + space_sign_exponent(target.p as i64 - target.q as i64);
    let on_e0 = zeta0 * Sign::pow_neg_one(exponent);

    let phi = AParamCoh::with_insertion(mus, to, m - n, i0)?;
    let eta = EtaPrime::new(on_mus, on_e0);
    eta.validate_for(&phi).map_err(|e| {
        ThetaError::inconsistent(format!("transferred character does not descend: {e}"))
    })?;
    Ok((phi, eta))
}

/// Highest weight `(a_1, …, a_p; b_1, …, b_q)` of an irreducible
/// representation of `U(p) × U(q)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KType {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl KType {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        let mu = Self { a, b };
        if !mu.is_dominant() {
            return Err(ThetaError::invalid(format!(
                "{mu} is not weakly decreasing on each factor"
            )));
        }
        Ok(mu)
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.a.len(), self.b.len())
    }

    pub fn is_dominant(&self) -> bool {
        self.a.windows(2).all(|w| w[0] >= w[1]) && self.b.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({}; {})", join(&self.a), join(&self.b))
    }
}

/// Splits a weakly decreasing list into its positive head, zero count and
/// negative tail.
fn split_signs(v: &[i64]) -> (&[i64], usize, &[i64]) {
    let pos = v.iter().take_while(|&&x| x > 0).count();
    let zeros = v[pos..].iter().take_while(|&&x| x == 0).count();
    (&v[..pos], zeros, &v[pos + zeros..])
}

/// The `K'`-type of `U(target)` corresponding to `mu` in the joint harmonics,
/// if any.
pub fn ktype_correspond(mu: &KType, target: Signature, conv: Convention) -> Result<Option<KType>> {
    if !mu.is_dominant() {
        return Err(ThetaError::invalid(format!(
            "{mu} is not weakly decreasing on each factor"
        )));
    }
    let source = mu.signature();
    lift_checks(source.dim(), target, conv)?;
    let (p, q) = (source.p as i64, source.q as i64);
    let (r, s) = (target.p as i64, target.q as i64);
    let shift_a = (r - s + conv.m0) / 2;
    let shift_b = (s - r + conv.m0) / 2;
    let a: Vec<i64> = mu.a.iter().map(|x| x - shift_a).collect();
    let b: Vec<i64> = mu.b.iter().map(|x| x - shift_b).collect();
    let (a_head, _, b_tail) = split_signs(&a);
    let (c_head, _, d_tail) = split_signs(&b);
    let (p_plus, p_minus) = (a_head.len(), b_tail.len());
    let (q_plus, q_minus) = (c_head.len(), d_tail.len());
    if p_plus + q_minus > target.p || p_minus + q_plus > target.q {
        return Ok(None);
    }
    let out_a_shift = (p - q + conv.n0) / 2;
    let out_b_shift = (q - p + conv.n0) / 2;
    let mut out_a = a_head.to_vec();
    out_a.resize(target.p - q_minus, 0);
    out_a.extend_from_slice(d_tail);
    let mut out_b = c_head.to_vec();
    out_b.resize(target.q - p_minus, 0);
    out_b.extend_from_slice(b_tail);
    Ok(Some(KType {
        a: out_a.into_iter().map(|x| x + out_a_shift).collect(),
        b: out_b.into_iter().map(|x| x + out_b_shift).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::Side::{P, Q};
    use crate::packets::{apacket_member, range_classify};
    use num_rational::Rational64;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn going_up_example() {
        let pi = LdsParam::from_pairs(&[(2, P)]).unwrap();
        let conv = Convention::new(1, 1);
        let sigma = theta_lift_lds(&pi, Signature::new(2, 1), conv)
            .unwrap()
            .unwrap();
        assert_eq!(
            sigma.blocks(),
            &[Block::new(h(2), 1, 0), Block::new(h(1), 1, 1)]
        );
        assert!(range_classify(&sigma).is_weakly_fair());
    }

    #[test]
    fn equal_rank_examples() {
        let pi = LdsParam::from_pairs(&[(1, P), (-1, Q)]).unwrap();
        let conv = Convention::new(0, 0);
        let sigma = theta_lift_lds(&pi, Signature::new(2, 0), conv)
            .unwrap()
            .unwrap();
        assert_eq!(
            sigma,
            LdsParam::from_pairs(&[(1, P), (-1, P)]).unwrap().to_rep()
        );
        assert_eq!(
            theta_lift_lds(&pi, Signature::new(0, 2), conv).unwrap(),
            None
        );
    }

    #[test]
    fn parity_is_checked() {
        let pi = LdsParam::from_pairs(&[(2, P)]).unwrap();
        assert!(theta_lift_lds(&pi, Signature::new(2, 1), Convention::new(0, 1)).is_err());
        assert!(theta_lift_lds(&pi, Signature::new(2, 1), Convention::new(1, 0)).is_err());
    }

    #[test]
    fn tempered_wraps_lds_when_d_is_zero() {
        let pi = LdsParam::from_pairs(&[(2, P)]).unwrap();
        let conv = Convention::new(1, 1);
        let target = Signature::new(2, 1);
        let lift = theta_lift_tempered(&TemperedParam::from_lds(pi.clone()), target, conv)
            .unwrap()
            .unwrap();
        assert!(lift.xis.is_empty());
        assert_eq!(Some(lift.inner), theta_lift_lds(&pi, target, conv).unwrap());
    }

    #[test]
    fn tempered_with_one_character() {
        let xi = UnitaryCharacter::new(0, Rational64::from_integer(1));
        let pi0 = LdsParam::from_pairs(&[(0, P)]).unwrap();
        let pi = TemperedParam::new(vec![xi], pi0.clone()).unwrap();
        let conv = Convention::new(0, 1);
        // n = 3, m = 4: the convention needs n0 odd and m0 even
        let lift = theta_lift_tempered(&pi, Signature::new(2, 2), conv)
            .unwrap()
            .unwrap();
        assert_eq!(lift.xis, vec![xi.twisted(1)]);
        assert_eq!(
            Some(lift.inner),
            theta_lift_lds(&pi0, Signature::new(1, 1), conv).unwrap()
        );
        assert_eq!(
            theta_lift_tempered(&pi, Signature::new(1, 0), Convention::new(1, 1)).unwrap(),
            None
        );
    }

    #[test]
    fn transfer_example() {
        let pi = LdsParam::from_pairs(&[(2, P)]).unwrap();
        let conv = Convention::new(1, 1);
        let target = Signature::new(2, 1);
        let (phi, eta) = eta_transfer(&pi, target, conv).unwrap();
        assert_eq!(phi.i0(), 2);
        assert_eq!(eta, EtaPrime::new(vec![Sign::Plus], Sign::Plus));
        assert_eq!(
            apacket_member(&phi, &eta, target).unwrap(),
            theta_lift_lds(&pi, target, conv).unwrap()
        );
    }

    #[test]
    fn transfer_with_odd_difference_keeps_signs() {
        let pi = LdsParam::from_pairs(&[(1, P), (-1, Q)]).unwrap();
        let conv = Convention::new(1, 0);
        let target = Signature::new(3, 2);
        let (phi, eta) = eta_transfer(&pi, target, conv).unwrap();
        let signs = lds_to_packet(&pi).index_signs();
        for (e, (_, orig)) in eta.on_mus.iter().zip(signs) {
            assert_eq!(*e, orig);
        }
        assert_eq!(
            apacket_member(&phi, &eta, target).unwrap(),
            theta_lift_lds(&pi, target, conv).unwrap()
        );
    }

    #[test]
    fn ktype_examples() {
        let conv = Convention::new(0, 0);
        let zero = KType::new(vec![0], vec![0]).unwrap();
        assert_eq!(
            ktype_correspond(&zero, Signature::new(1, 1), conv).unwrap(),
            Some(zero.clone())
        );
        let mu = KType::new(vec![1], vec![-2]).unwrap();
        assert_eq!(
            ktype_correspond(&mu, Signature::new(2, 2), conv).unwrap(),
            Some(KType::new(vec![1, -2], vec![0, 0]).unwrap())
        );
        assert_eq!(
            ktype_correspond(&mu, Signature::new(1, 1), conv).unwrap(),
            None
        );
        assert!(KType::new(vec![0, 1], vec![]).is_err());
    }

    #[test]
    fn going_down_two_steps() {
        // U(2,1) → U(1,0): k = 2, ladder {1/2, -1/2}
        let conv = Convention::new(1, 1);
        for (_, lds) in crate::oracle::enumerate_lds(&crate::oracle::EnumerationSpec::new(3, h(5)))
        {
            if let Some(sigma) = theta_lift_lds(&lds, Signature::new(1, 0), conv).unwrap() {
                assert!(sigma.is_all_singletons());
                assert!(range_classify(&sigma).is_weakly_fair());
            }
        }
    }
}
