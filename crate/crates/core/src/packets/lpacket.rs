//! Tempered L-packets of `U(p,q)`: the dictionary between (limits of)
//! discrete series and pairs `(φ, η)`, and the parabolically induced members.

use crate::error::{Result, ThetaError};
use crate::packets::param::{LdsEntry, LdsParam, Side, TemperedParam};
use crate::scalar::{character_csd_sign, HalfInt, Selfduality, Sign, Signature, UnitaryCharacter};

/// A tempered L-parameter together with a character of its component group.
///
/// `kappas` lists the conjugate-selfdual summands `χ_κ` with multiplicity,
/// strictly decreasing in `κ`; `eta[i]` is the value on the generator attached
/// to `kappas[i]`. `pairs` holds one character from each `{ξ, ξ̌}` summand.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PacketDatum {
    pub kappas: Vec<(HalfInt, usize)>,
    pub pairs: Vec<UnitaryCharacter>,
    pub eta: Vec<Sign>,
}

impl PacketDatum {
    pub fn new(
        kappas: Vec<(HalfInt, usize)>,
        pairs: Vec<UnitaryCharacter>,
        eta: Vec<Sign>,
    ) -> Result<Self> {
        let phi = Self { kappas, pairs, eta };
        phi.validate()?;
        Ok(phi)
    }

    pub fn dim(&self) -> usize {
        self.kappas.iter().map(|&(_, m)| m).sum::<usize>() + 2 * self.pairs.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta.len() != self.kappas.len() {
            return Err(ThetaError::invalid(format!(
                "eta has {} values for {} distinct kappas",
                self.eta.len(),
                self.kappas.len()
            )));
        }
        let n = self.dim() as i64;
        for &(kappa, mult) in &self.kappas {
            if mult == 0 {
                return Err(ThetaError::invalid(format!(
                    "kappa {kappa} has multiplicity 0"
                )));
            }
            if !kappa.in_coset(n - 1) {
                return Err(ThetaError::invalid(format!(
                    "kappa {kappa} is not in Z + ({n}-1)/2"
                )));
            }
        }
        if self.kappas.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(ThetaError::invalid("kappas must be strictly decreasing"));
        }
        for xi in &self.pairs {
            if xi.is_conjugate_selfdual() {
                return Err(ThetaError::invalid(format!(
                    "paired character {xi} is conjugate-selfdual"
                )));
            }
        }
        Ok(())
    }

    /// `κ_1 ≥ … ≥ κ_b` with each value repeated by its multiplicity, paired
    /// with `η(e_i)`.
    pub fn index_signs(&self) -> Vec<(HalfInt, Sign)> {
        self.kappas
            .iter()
            .zip(&self.eta)
            .flat_map(|(&(kappa, mult), &e)| std::iter::repeat_n((kappa, e), mult))
            .collect()
    }

    pub fn eta_of(&self, kappa: HalfInt) -> Option<Sign> {
        self.kappas
            .iter()
            .position(|&(k, _)| k == kappa)
            .map(|i| self.eta[i])
    }

    /// The conjugate-selfdual part `φ_0` with the same `η`.
    pub fn selfdual_part(&self) -> PacketDatum {
        PacketDatum {
            kappas: self.kappas.clone(),
            pairs: Vec::new(),
            eta: self.eta.clone(),
        }
    }
}

/// Index rule: position `i` (1-based) goes to the `p` side iff
/// `η(e_i) = (-1)^{i-1}`. Always yields a valid sequence for a well-formed
/// index list; the signature is whatever falls out.
pub(crate) fn lds_from_signs(signs: &[(HalfInt, Sign)]) -> LdsParam {
    let entries = signs
        .iter()
        .enumerate()
        .map(|(i, &(kappa, e))| {
            let side = if e == Sign::pow_neg_one(i as i64) {
                Side::P
            } else {
                Side::Q
            };
            LdsEntry::new(kappa, side)
        })
        .collect();
    LdsParam::new_unchecked(entries)
}

/// The member of the packet of `phi` on `U(target)`, if any.
pub fn lds_from_packet(phi: &PacketDatum, target: Signature) -> Result<Option<LdsParam>> {
    phi.validate()?;
    if !phi.pairs.is_empty() {
        return Err(ThetaError::invalid(
            "packet has non-selfdual pairs; not a discrete series parameter",
        ));
    }
    let lds = lds_from_signs(&phi.index_signs());
    Ok((lds.signature() == target).then_some(lds))
}

/// Inverse dictionary: reads `(φ, η)` off a (limit of) discrete series.
pub fn lds_to_packet(pi: &LdsParam) -> PacketDatum {
    let groups = pi.groups();
    let mut kappas = Vec::with_capacity(groups.len());
    let mut eta = Vec::with_capacity(groups.len());
    for g in groups {
        kappas.push((g.lambda, g.len()));
        let exponent = match g.first_side() {
            Side::P => g.start as i64,
            Side::Q => g.start as i64 + 1,
        };
        eta.push(Sign::pow_neg_one(exponent));
    }
    PacketDatum {
        kappas,
        pairs: Vec::new(),
        eta,
    }
}

/// Every member of the packet `Π_φ` across all signatures of dimension `n`,
/// one per character of the component group of the selfdual part.
/// The `eta` stored in `phi` is ignored.
pub fn tempered_packet_members(phi: &PacketDatum) -> Result<Vec<(Signature, TemperedParam)>> {
    let n = phi.dim();
    let mut checked = phi.clone();
    checked.eta = vec![Sign::Plus; phi.kappas.len()];
    checked.validate()?;
    for xi in &phi.pairs {
        if !xi.admissible_for_dim(n) {
            return Err(ThetaError::invalid(format!(
                "paired character {xi} is not admissible"
            )));
        }
    }
    let b = phi.kappas.len();
    let mut out = Vec::with_capacity(1 << b);
    for mask in 0u64..(1u64 << b) {
        checked.eta = (0..b)
            .map(|j| {
                if mask >> (b - 1 - j) & 1 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        let lds = lds_from_signs(&checked.index_signs());
        let member = TemperedParam::new(phi.pairs.clone(), lds)?;
        out.push((member.signature(), member));
    }
    Ok(out)
}

/// Constituents of `I(χ, π_0)` for conjugate-selfdual `χ` of sign
/// `(-1)^{n-1}`: the members of the packet of `2χ ⊕ φ_0` whose character
/// restricts to that of `π_0`.
pub fn induced_limit_decompose(chi: &UnitaryCharacter, pi0: &LdsParam) -> Result<Vec<LdsParam>> {
    let n = pi0.dim() + 2;
    let wanted = Sign::pow_neg_one(n as i64 - 1);
    match character_csd_sign(chi) {
        Selfduality::ConjugateSelfdual(sign) if sign == wanted => {}
        _ => {
            return Err(ThetaError::invalid(format!(
                "{chi} is not conjugate-selfdual of sign {wanted}"
            )))
        }
    }
    let kappa = HalfInt::from_twice(chi.weight);
    let phi0 = lds_to_packet(pi0);
    let target = Signature::new(pi0.signature().p + 1, pi0.signature().q + 1);

    let extensions: Vec<PacketDatum> = match phi0.kappas.iter().position(|&(k, _)| k == kappa) {
        Some(j) => {
            let mut phi = phi0.clone();
            phi.kappas[j].1 += 2;
            vec![phi]
        }
        None => {
            let at = phi0
                .kappas
                .iter()
                .position(|&(k, _)| k < kappa)
                .unwrap_or(phi0.kappas.len());
            [Sign::Plus, Sign::Minus]
                .into_iter()
                .map(|e| {
                    let mut phi = phi0.clone();
                    phi.kappas.insert(at, (kappa, 2));
                    phi.eta.insert(at, e);
                    phi
                })
                .collect()
        }
    };
    extensions
        .iter()
        .map(|phi| {
            let lds = lds_from_signs(&phi.index_signs());
            if lds.signature() != target {
                return Err(ThetaError::inconsistent(format!(
                    "constituent {lds} of I({chi}, {pi0}) is not on {target}"
                )));
            }
            Ok(lds)
        })
        .collect()
}
