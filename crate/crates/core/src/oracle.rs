//! Exhaustive enumerators, an independent reduction, and the property
//! checks that tie the modules together.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::atobe::{
    atobe_invariants, c_count, dual_param, k0_for, nonvanishing, reduce_x, AtobeInvariants,
    SignedSet,
};
use crate::error::ThetaError;
use crate::lift::{
    eta_transfer_with, ktype_correspond, standard_zeta, theta_lift_lds, theta_lift_tempered, KType,
    ZetaRule,
};
use crate::packets::{
    apacket_member, aq_normalize, lds_from_packet, lds_to_packet, range_classify,
    tempered_packet_members, AParamCoh, EtaPrime, LdsEntry, LdsParam, PacketDatum, Side,
    TemperedParam,
};
use crate::scalar::{epsilon_of_space, Convention, HalfInt, Sign, Signature, UnitaryCharacter};
use crate::wire::{signature_json, ParamDocument};

/// Which (limits of) discrete series to list.
#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    pub n: usize,
    pub lambda_bound: HalfInt,
    pub signatures: Option<Vec<Signature>>,
    pub include_limits: bool,
}

impl EnumerationSpec {
    pub fn new(n: usize, lambda_bound: HalfInt) -> Self {
        Self {
            n,
            lambda_bound,
            signatures: None,
            include_limits: true,
        }
    }

    pub fn with_signatures(mut self, signatures: Vec<Signature>) -> Self {
        self.signatures = Some(signatures);
        self
    }

    pub fn discrete_only(mut self) -> Self {
        self.include_limits = false;
        self
    }
}

/// `Z + (n-1)/2` inside `[-bound, bound]`, decreasing.
pub fn lattice_values(n: usize, bound: HalfInt) -> Vec<HalfInt> {
    let b = bound.twice();
    (-b..=b)
        .rev()
        .map(HalfInt::from_twice)
        .filter(|v| v.in_coset(n as i64 - 1))
        .collect()
}

/// Every valid parameter of dimension `spec.n` with `|λ| ≤ bound`, grouped by
/// strictly decreasing values; each group contributes its two alternating
/// words.
pub fn enumerate_lds(spec: &EnumerationSpec) -> Vec<(Signature, LdsParam)> {
    fn go(
        values: &[HalfInt],
        remaining: usize,
        max_group: usize,
        current: &mut Vec<LdsEntry>,
        out: &mut Vec<LdsParam>,
    ) {
        if remaining == 0 {
            out.push(LdsParam::new_unchecked(current.clone()));
            return;
        }
        for (i, &v) in values.iter().enumerate() {
            for size in 1..=remaining.min(max_group) {
                for first in [Side::P, Side::Q] {
                    let mut side = first;
                    for _ in 0..size {
                        current.push(LdsEntry::new(v, side));
                        side = side.flip();
                    }
                    go(&values[i + 1..], remaining - size, max_group, current, out);
                    current.truncate(current.len() - size);
                }
            }
        }
    }
    if spec.lambda_bound <= HalfInt::ZERO && spec.n > 0 {
        return Vec::new();
    }
    let values = lattice_values(spec.n, spec.lambda_bound);
    let max_group = if spec.include_limits { spec.n } else { 1 };
    let mut out = Vec::new();
    go(&values, spec.n, max_group, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|lds| (lds.signature(), lds))
        .filter(|(sig, _)| {
            spec.signatures
                .as_ref()
                .is_none_or(|allowed| allowed.contains(sig))
        })
        .collect()
}

/// The reduction fixed point computed by a literal loop that re-sorts the
/// whole set every round.
pub fn xinf_bruteforce(x: &SignedSet, k: i64) -> SignedSet {
    let mut items: Vec<(i64, i64)> = x.iter().map(|(v, s)| (v.twice(), s.value())).collect();
    loop {
        let mut values: Vec<i64> = items.iter().map(|&(v, _)| v).collect();
        values.sort_unstable_by(|a, b| b.cmp(a));
        values.dedup();
        let mut doomed: Vec<(i64, i64)> = Vec::new();
        for i in 0..values.len().saturating_sub(1) {
            let (a, b) = (values[i], values[i + 1]);
            let has_a = items.contains(&(a, 1));
            let has_b = items.contains(&(b, -1));
            let far = a.abs().min(b.abs()) > k;
            let same_side = a * b >= 0;
            if has_a && has_b && far && same_side {
                doomed.push((a, 1));
                doomed.push((b, -1));
            }
        }
        if doomed.is_empty() {
            break;
        }
        items.retain(|it| !doomed.contains(it));
    }
    items
        .into_iter()
        .map(|(v, s)| {
            (
                HalfInt::from_twice(v),
                if s > 0 { Sign::Plus } else { Sign::Minus },
            )
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub property: String,
    pub input: Value,
    pub detail: String,
}

impl Violation {
    fn new(property: &str, input: Value, detail: impl Into<String>) -> Self {
        Self {
            property: property.to_string(),
            input,
            detail: detail.into(),
        }
    }
}

/// Cases examined and violations found by one or more checks.
#[derive(Clone, Debug, Default)]
pub struct CheckOutcome {
    pub cases: u64,
    pub violations: Vec<Violation>,
}

impl CheckOutcome {
    fn merge(mut self, other: CheckOutcome) -> Self {
        self.cases += other.cases;
        self.violations.extend(other.violations);
        self
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self, property: &str, input: Value, detail: impl Into<String>) {
        self.violations
            .push(Violation::new(property, input, detail));
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, property: &str) -> usize {
        self.violations
            .iter()
            .filter(|v| v.property == property)
            .count()
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub cases_run: u64,
    pub violations: Vec<Violation>,
    pub elapsed: Duration,
    pub seed: u64,
}

impl ConsistencyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "spec_version": crate::wire::SPEC_VERSION,
            "cases_run": self.cases_run,
            "violations": self.violations,
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "seed": self.seed,
        })
    }
}

fn par_fold<T: Sync>(items: &[T], f: impl Fn(&T) -> CheckOutcome + Sync + Send) -> CheckOutcome {
    items
        .par_iter()
        .map(f)
        .reduce(CheckOutcome::default, CheckOutcome::merge)
}

fn lds_input(lds: &LdsParam, conv: Convention) -> Value {
    serde_json::to_value(ParamDocument::lds(lds, conv)).expect("documents serialize")
}

fn case_input(lds: &LdsParam, target: Signature, conv: Convention) -> Value {
    json!({ "param": lds_input(lds, conv), "target": signature_json(target) })
}

fn err_text(e: &ThetaError) -> String {
    e.to_string()
}

/// All valid parameters with `1 ≤ n ≤ nmax`.
pub fn all_lds(nmax: usize, bound: HalfInt) -> Vec<LdsParam> {
    (1..=nmax)
        .flat_map(|n| enumerate_lds(&EnumerationSpec::new(n, bound)))
        .map(|(_, lds)| lds)
        .collect()
}

/// Target signatures with `max(0, n - below) ≤ m ≤ n + above`.
pub fn targets(n: usize, below: usize, above: usize) -> Vec<Signature> {
    (n.saturating_sub(below)..=n + above)
        .flat_map(Signature::all_of_dim)
        .collect()
}

/// Two conventions per dimension pair, differing in `m0`.
pub fn conventions(n: usize, m: usize) -> [Convention; 2] {
    let m0 = (m % 2) as i64;
    let n0 = (n % 2) as i64;
    [Convention::new(m0, n0), Convention::new(m0 - 2, n0)]
}

// ---------------------------------------------------------------- packets

/// Round trip, parity, and the partition of each packet across signatures.
pub fn check_packets(nmax: usize, bound: HalfInt) -> CheckOutcome {
    let mut total = CheckOutcome::default();
    for n in 1..=nmax {
        let all = enumerate_lds(&EnumerationSpec::new(n, bound));
        let conv = Convention::new((n % 2) as i64, (n % 2) as i64);
        total = total.merge(par_fold(&all, |(sig, lds)| {
            let mut out = CheckOutcome::default();
            out.case();
            let phi = lds_to_packet(lds);
            match lds_from_packet(&phi, *sig) {
                Ok(Some(back)) if back == *lds => {}
                other => out.fail(
                    "packet round trip",
                    lds_input(lds, conv),
                    format!("got {other:?}"),
                ),
            }
            let product: Sign = phi.index_signs().iter().map(|&(_, e)| e).product();
            if product != epsilon_of_space(sig.p, sig.q) {
                out.fail(
                    "packet parity",
                    lds_input(lds, conv),
                    format!("product {product} on {sig}"),
                );
            }
            out
        }));

        // Distinct parameters φ, each listed once.
        let mut phis: Vec<PacketDatum> = all
            .iter()
            .map(|(_, lds)| {
                let mut phi = lds_to_packet(lds);
                phi.eta = vec![Sign::Plus; phi.kappas.len()];
                phi
            })
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        phis.sort_by(|a, b| a.kappas.cmp(&b.kappas));
        let enumerated: HashSet<&LdsParam> = all.iter().map(|(_, lds)| lds).collect();
        let members_total: usize = phis.iter().map(|phi| 1usize << phi.kappas.len()).sum();
        total.case();
        if members_total != enumerated.len() {
            total.fail(
                "packet partition",
                json!({ "n": n, "bound": bound.twice() }),
                format!(
                    "{members_total} packet members but {} parameters",
                    enumerated.len()
                ),
            );
        }
        total = total.merge(par_fold(&phis, |phi| {
            check_one_packet(phi, &enumerated, conv)
        }));
    }
    total
}

fn check_one_packet(
    phi: &PacketDatum,
    enumerated: &HashSet<&LdsParam>,
    conv: Convention,
) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    out.case();
    let input =
        || serde_json::to_value(ParamDocument::packet(phi, conv)).expect("documents serialize");
    let members = match tempered_packet_members(phi) {
        Ok(m) => m,
        Err(e) => {
            out.fail("packet partition", input(), err_text(&e));
            return out;
        }
    };
    let distinct: HashSet<&TemperedParam> = members.iter().map(|(_, m)| m).collect();
    if distinct.len() != 1 << phi.kappas.len() {
        out.fail(
            "packet partition",
            input(),
            format!("{} distinct members", distinct.len()),
        );
    }
    for (sig, member) in &members {
        if !enumerated.contains(member.lds()) || member.signature() != *sig {
            out.fail(
                "packet partition",
                input(),
                format!("member {member} not enumerated"),
            );
        }
        let mut back = lds_to_packet(member.lds());
        let eta = back.eta.clone();
        back.eta = vec![Sign::Plus; back.kappas.len()];
        if back.kappas != phi.kappas {
            out.fail(
                "packet partition",
                input(),
                format!("member {member} has another parameter"),
            );
        }
        back.eta = eta;
        for other in Signature::all_of_dim(phi.dim()) {
            let got = lds_from_packet(&back, other).ok().flatten();
            if (other == *sig) != got.is_some() {
                out.fail(
                    "packet partition",
                    input(),
                    format!("member {member} realized on {other}"),
                );
            }
        }
    }
    out
}

// ---------------------------------------------------------------- lifts

struct LiftCase<'a> {
    lds: &'a LdsParam,
    target: Signature,
    conv: Convention,
}

fn for_each_case(
    nmax: usize,
    bound: HalfInt,
    below: usize,
    above: usize,
    f: impl Fn(&LiftCase<'_>, &mut CheckOutcome) + Sync + Send,
) -> CheckOutcome {
    let all = all_lds(nmax, bound);
    par_fold(&all, |lds| {
        let mut out = CheckOutcome::default();
        let n = lds.dim();
        for target in targets(n, below, above) {
            for conv in conventions(n, target.dim()) {
                out.case();
                f(&LiftCase { lds, target, conv }, &mut out);
            }
        }
        out
    })
}

/// `(2 twice-values)` multiset of a ladder `(k-1)/2, …, -(k-1)/2`.
fn ladder(k: usize) -> Vec<HalfInt> {
    let k = k as i64;
    (0..k).map(|j| HalfInt::from_twice(k - 1 - 2 * j)).collect()
}

fn expected_infinitesimal(lds: &LdsParam, m: usize, conv: Convention) -> Option<Vec<HalfInt>> {
    let n = lds.dim();
    let mut values: Vec<HalfInt> = lds
        .entries()
        .iter()
        .map(|e| e.lambda - conv.source_shift())
        .collect();
    if m > n {
        values.extend(ladder(m - n));
    } else {
        for v in ladder(n - m) {
            let pos = values.iter().position(|&x| x == v)?;
            values.remove(pos);
        }
    }
    values.sort_unstable_by(|a, b| b.cmp(a));
    Some(values)
}

/// Lift versus nonvanishing, weak fairness, the discrete-series range,
/// the transfer of infinitesimal characters, and the going-up counts.
pub fn check_lift_coherence(nmax: usize, bound: HalfInt, spread: usize) -> CheckOutcome {
    for_each_case(nmax, bound, spread, spread, |case, out| {
        let LiftCase { lds, target, conv } = *case;
        let input = || case_input(lds, target, conv);
        let n = lds.dim();
        let m = target.dim();
        let nonzero = match nonvanishing(&TemperedParam::from_lds(lds.clone()), target, conv) {
            Ok(b) => b,
            Err(e) => {
                out.fail("lift coherence", input(), err_text(&e));
                return;
            }
        };
        let lift = match theta_lift_lds(lds, target, conv) {
            Ok(l) => l,
            Err(e) => {
                out.fail("lift coherence", input(), err_text(&e));
                return;
            }
        };
        if lift.is_some() != nonzero {
            out.fail(
                "lift coherence",
                input(),
                format!("nonvanishing {nonzero}, lift {lift:?}"),
            );
        }
        let Some(sigma) = lift else { return };
        if sigma.signature() != target || sigma.validate().is_err() {
            out.fail(
                "lift coherence",
                input(),
                format!("malformed output {sigma}"),
            );
        }
        if !range_classify(&sigma).is_weakly_fair() {
            out.fail("weak fairness", input(), format!("output {sigma}"));
        }
        if m <= n + 1 {
            let lds_ok = aq_normalize(&sigma)
                .ok()
                .is_some_and(|a| LdsParam::from_rep(&a).is_ok());
            if !lds_ok {
                out.fail("discrete series range", input(), format!("output {sigma}"));
            }
        }
        let got: Vec<HalfInt> = sigma
            .infinitesimal_character()
            .into_iter()
            .map(|v| v - conv.target_shift())
            .collect();
        if expected_infinitesimal(lds, m, conv).as_ref() != Some(&got) {
            out.fail(
                "infinitesimal character",
                input(),
                format!("output {sigma}"),
            );
        }
        if m >= n {
            let (pp, pm, qp, qm) = sign_counts(lds, conv);
            if pp + qm > target.p || pm + qp > target.q {
                out.fail(
                    "going-up counts",
                    input(),
                    format!("p+={pp} p-={pm} q+={qp} q-={qm}"),
                );
            }
        }
    })
}

/// `(p+, p-, q+, q-)` after the `m0/2` shift, zero counted as nonpositive.
fn sign_counts(lds: &LdsParam, conv: Convention) -> (usize, usize, usize, usize) {
    let mut c = (0, 0, 0, 0);
    for e in lds.entries() {
        let positive = e.lambda - conv.source_shift() > HalfInt::ZERO;
        match (e.side, positive) {
            (Side::P, true) => c.0 += 1,
            (Side::P, false) => c.1 += 1,
            (Side::Q, true) => c.2 += 1,
            (Side::Q, false) => c.3 += 1,
        }
    }
    c
}

/// Lifting back from `U(r,s)` with `m ≤ n - 2` recovers the original.
pub fn check_round_trip(nmax: usize, bound: HalfInt) -> CheckOutcome {
    let all = all_lds(nmax, bound);
    par_fold(&all, |lds| {
        let mut out = CheckOutcome::default();
        let n = lds.dim();
        if n < 2 {
            return out;
        }
        let source = lds.signature();
        for target in targets(n - 2, n - 2, 0) {
            for conv in conventions(n, target.dim()) {
                let Ok(Some(sigma)) = theta_lift_lds(lds, target, conv) else {
                    continue;
                };
                out.case();
                let input = || case_input(lds, target, conv);
                let back = LdsParam::from_rep(&sigma)
                    .map_err(|e| err_text(&e))
                    .and_then(|s| {
                        theta_lift_lds(&s, source, conv.reversed()).map_err(|e| err_text(&e))
                    });
                match back {
                    Ok(Some(rep)) => match aq_normalize(&rep) {
                        Ok(norm) if norm == lds.to_rep() => {}
                        other => {
                            out.fail("round trip", input(), format!("lifted back to {other:?}"))
                        }
                    },
                    other => out.fail("round trip", input(), format!("lifted back to {other:?}")),
                }
            }
        }
        out
    })
}

/// `apacket_member ∘ eta_transfer` agrees with the explicit lift for `m > n`.
pub fn check_apacket(nmax: usize, bound: HalfInt, spread: usize, zeta: ZetaRule) -> CheckOutcome {
    for_each_case(nmax, bound, 0, spread, |case, out| {
        let LiftCase { lds, target, conv } = *case;
        if target.dim() <= lds.dim() {
            return;
        }
        let Ok(Some(sigma)) = theta_lift_lds(lds, target, conv) else {
            return;
        };
        let input = || case_input(lds, target, conv);
        let via_packet = eta_transfer_with(lds, target, conv, zeta)
            .and_then(|(phi, eta)| apacket_member(&phi, &eta, target));
        match via_packet {
            Ok(Some(rep)) if rep == sigma => {}
            other => out.fail(
                "apacket coherence",
                input(),
                format!("lift {sigma}, packet gives {other:?}"),
            ),
        }
    })
}

/// Whether `σ(φ', η')` is nonzero, decided from the raw identity
/// `η'(e'_1 + … + e'_n + e'_0) = ε(r,s)` with the sides read off index by index.
pub fn sign_law_bruteforce(
    n: usize,
    m: usize,
    i0: usize,
    on_mus: &[Sign],
    on_e0: Sign,
    target: Signature,
) -> bool {
    let sl2 = (m - n) as i64;
    let mut r_rest = 0i64;
    let mut s_rest = 0i64;
    for i in 1..=n + 1 {
        if i == i0 {
            continue;
        }
        let (eta, base) = if i < i0 {
            (on_mus[i - 1], i as i64 - 1)
        } else {
            (on_mus[i - 2], i as i64 + sl2 - 2)
        };
        // η'(e'_i) = (-1)^(base + s_i)
        let s_i = if eta.value() == if base % 2 == 0 { 1 } else { -1 } {
            0
        } else {
            1
        };
        s_rest += s_i;
        r_rest += 1 - s_i;
    }
    let r0 = target.p as i64 - r_rest;
    let s0 = target.q as i64 - s_rest;
    if r0 < 0 || s0 < 0 {
        return false;
    }
    let total = on_mus.iter().fold(on_e0.value(), |acc, e| acc * e.value());
    let d = target.p as i64 - target.q as i64;
    let expected = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
    total == expected
}

/// `apacket_member` against [`sign_law_bruteforce`] for `1 ≤ n < m ≤ mmax`,
/// every insertion point, every sign assignment and every target.
pub fn check_sign_law(mmax: usize) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    for m in 2..=mmax {
        for n in 1..m {
            // distinct values, spaced so `mu0` fits in every gap
            let base = HalfInt::from_twice(((m - 1) % 2) as i64);
            let mus: Vec<HalfInt> = (0..n)
                .map(|j| base + HalfInt::from_int(4 * (n - j) as i64))
                .collect();
            for i0 in 1..=n + 1 {
                let twice0 = 4 * (n + 1 - i0) as i64 * 2 + 2 + (n % 2) as i64;
                let mu0 = HalfInt::from_twice(twice0);
                let phi = match AParamCoh::new(mus.clone(), mu0, m - n) {
                    Ok(phi) if phi.i0() == i0 => phi,
                    other => {
                        out.fail(
                            "sign law",
                            json!({ "n": n, "m": m, "i0": i0 }),
                            format!("construction gave {other:?}"),
                        );
                        continue;
                    }
                };
                for mask in 0u32..1 << (n + 1) {
                    let sign = |b: usize| {
                        if mask >> b & 1 == 1 {
                            Sign::Minus
                        } else {
                            Sign::Plus
                        }
                    };
                    let on_mus: Vec<Sign> = (0..n).map(sign).collect();
                    let on_e0 = sign(n);
                    let eta = EtaPrime::new(on_mus.clone(), on_e0);
                    for target in Signature::all_of_dim(m) {
                        out.case();
                        let input = || json!({ "n": n, "m": m, "i0": i0, "mask": mask, "target": signature_json(target) });
                        let expected = sign_law_bruteforce(n, m, i0, &on_mus, on_e0, target);
                        match apacket_member(&phi, &eta, target) {
                            Ok(got) if got.is_some() == expected => {}
                            other => out.fail(
                                "sign law",
                                input(),
                                format!("expected {expected}, got {other:?}"),
                            ),
                        }
                    }
                }
            }
        }
    }
    out
}

/// Duality of the criterion, the swap of invariants, persistence, step
/// growth of the counts, and stabilization of the reduction.
pub fn check_duality(nmax: usize, bound: HalfInt, spread: usize) -> CheckOutcome {
    let all = all_lds(nmax, bound);
    par_fold(&all, |lds| {
        let mut out = CheckOutcome::default();
        let n = lds.dim();
        let pi = TemperedParam::from_lds(lds.clone());
        for m in n.saturating_sub(spread)..=n + spread {
            for conv in conventions(n, m) {
                let dual = dual_param(&pi, conv);
                let input = || lds_input(lds, conv);
                if dual_param(&dual, conv) != pi {
                    out.fail("duality", input(), "dual is not an involution");
                }
                let k0 = k0_for(n, m);
                match (
                    atobe_invariants(&pi, k0, conv),
                    atobe_invariants(&dual, k0, conv),
                ) {
                    (Ok(a), Ok(b)) => {
                        out.case();
                        if a.k != b.k || (a.r_pi, a.s_pi) != (b.s_pi, b.r_pi) {
                            out.fail(
                                "invariant swap",
                                input(),
                                format!(
                                    "k {} vs {}, ({},{}) vs ({},{})",
                                    a.k, b.k, a.r_pi, a.s_pi, b.r_pi, b.s_pi
                                ),
                            );
                        }
                        check_counts(&a, n, input, &mut out);
                    }
                    (a, b) => out.fail(
                        "invariant swap",
                        input(),
                        format!("{:?} / {:?}", a.err(), b.err()),
                    ),
                }
                for target in Signature::all_of_dim(m) {
                    out.case();
                    let here = nonvanishing(&pi, target, conv);
                    let there = nonvanishing(&dual, target.swapped(), conv);
                    let tinput = || case_input(lds, target, conv);
                    match (&here, &there) {
                        (Ok(a), Ok(b)) if a == b => {}
                        _ => out.fail("duality", tinput(), format!("{here:?} vs {there:?}")),
                    }
                    if let Ok(true) = here {
                        let bigger = Signature::new(target.p + 1, target.q + 1);
                        if !matches!(nonvanishing(&pi, bigger, conv), Ok(true)) {
                            out.fail("persistence", tinput(), format!("vanishes on {bigger}"));
                        }
                    }
                }
            }
        }
        out
    })
}

fn check_counts(
    inv: &AtobeInvariants,
    n: usize,
    input: impl Fn() -> Value,
    out: &mut CheckOutcome,
) {
    let bound = 2 * n as i64 + 4;
    let mut prev = c_count(inv, 0);
    if prev != (0, 0) {
        out.fail("step growth", input(), format!("C(0) = {prev:?}"));
    }
    for x in 1..=bound {
        let next = c_count(inv, x);
        if next.0 < prev.0 || next.0 > prev.0 + 1 || next.1 < prev.1 || next.1 > prev.1 + 1 {
            out.fail(
                "step growth",
                input(),
                format!("C({}) = {prev:?}, C({x}) = {next:?}", x - 1),
            );
        }
        prev = next;
    }
    if inv.reduction_steps > n {
        out.fail(
            "stabilization",
            input(),
            format!("{} reduction rounds", inv.reduction_steps),
        );
    }
}

fn sample_characters(n: usize) -> Vec<UnitaryCharacter> {
    vec![
        UnitaryCharacter::new(1, Rational64::new(1, 2)),
        UnitaryCharacter::new(0, Rational64::new(-1, 3)),
        UnitaryCharacter::of_weight((n % 2) as i64),
    ]
}

/// Tempered `I(ξ_1, …, ξ_d, π_0)` with `1 ≤ d ≤ dmax`, total dimension at
/// most `nmax`, and `ξ_i` drawn (as a multiset) from a fixed sample.
pub fn enumerate_tempered(nmax: usize, dmax: usize, bound: HalfInt) -> Vec<TemperedParam> {
    let mut out = Vec::new();
    for n in 2..=nmax {
        let chars = sample_characters(n);
        for d in 1..=dmax.min(n / 2) {
            let inner: Vec<LdsParam> = if n == 2 * d {
                vec![LdsParam::default()]
            } else {
                enumerate_lds(&EnumerationSpec::new(n - 2 * d, bound))
                    .into_iter()
                    .map(|(_, l)| l)
                    .collect()
            };
            for combo in multisets(chars.len(), d) {
                let xis: Vec<UnitaryCharacter> = combo.iter().map(|&i| chars[i]).collect();
                for lds in &inner {
                    if let Ok(pi) = TemperedParam::new(xis.clone(), lds.clone()) {
                        out.push(pi);
                    }
                }
            }
        }
    }
    out
}

fn multisets(kinds: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(kinds, size - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..kinds {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

/// Counts on going up, pinned targets on going down, and nonvanishing of the
/// inner lift of tempered representations.
pub fn check_corollaries(nmax: usize, bound: HalfInt, spread: usize, dmax: usize) -> CheckOutcome {
    let going = for_each_case(nmax, bound, spread, spread, |case, out| {
        let LiftCase { lds, target, conv } = *case;
        let (n, m) = (lds.dim(), target.dim());
        let pi = TemperedParam::from_lds(lds.clone());
        if !matches!(nonvanishing(&pi, target, conv), Ok(true)) {
            return;
        }
        let input = || case_input(lds, target, conv);
        if m >= n {
            let (pp, pm, qp, qm) = sign_counts(lds, conv);
            if pp + qm > target.p || pm + qp > target.q {
                out.fail(
                    "going-up counts",
                    input(),
                    format!("p+={pp} p-={pm} q+={qp} q-={qm}"),
                );
            }
        }
        if m + 2 <= n {
            let k = (n - m) as i64;
            let Ok(inv) = atobe_invariants(&pi, k0_for(n, m), conv) else {
                out.fail("going-down targets", input(), "invariants failed");
                return;
            };
            let (r, s) = (target.p as i64, target.q as i64);
            let (rp, sp) = (inv.r_pi as i64, inv.s_pi as i64);
            let first = inv.k >= 2
                && 2 <= k
                && k <= inv.k
                && (r, s) == (rp + (inv.k - k) / 2, sp + (inv.k - k) / 2);
            let second = inv.k >= 0
                && k == inv.k + 2
                && (r, s) == (rp - 1, sp - 1)
                && inv.boundary_exception;
            if !first && !second {
                out.fail(
                    "going-down targets",
                    input(),
                    format!("k_pi = {}, (r_pi,s_pi) = ({rp},{sp})", inv.k),
                );
            }
        }
    });
    let tempered = enumerate_tempered(nmax, dmax, bound);
    let inner = par_fold(&tempered, |pi| {
        let mut out = CheckOutcome::default();
        let n = pi.dim();
        for target in targets(n, spread, spread) {
            for conv in conventions(n, target.dim()) {
                out.case();
                let input = || {
                    json!({
                        "param": serde_json::to_value(ParamDocument::tempered(pi, conv)).expect("documents serialize"),
                        "target": signature_json(target),
                    })
                };
                let nonzero = match nonvanishing(pi, target, conv) {
                    Ok(b) => b,
                    Err(e) => {
                        out.fail("inner lift", input(), err_text(&e));
                        continue;
                    }
                };
                let d = pi.d();
                if nonzero {
                    let inner_ok = d <= target.p.min(target.q)
                        && matches!(
                            nonvanishing(
                                &TemperedParam::from_lds(pi.lds().clone()),
                                Signature::new(target.p - d, target.q - d),
                                conv
                            ),
                            Ok(true)
                        );
                    if !inner_ok {
                        out.fail("inner lift", input(), "inner lift vanishes");
                    }
                }
                match theta_lift_tempered(pi, target, conv) {
                    Ok(lift) if lift.is_some() == nonzero => {
                        if let Some(lift) = lift {
                            if lift.signature() != target {
                                out.fail(
                                    "inner lift",
                                    input(),
                                    format!("lift {lift} is not on {target}"),
                                );
                            }
                        }
                    }
                    other => out.fail(
                        "inner lift",
                        input(),
                        format!("nonvanishing {nonzero}, lift {other:?}"),
                    ),
                }
            }
        }
        out
    });
    going.merge(inner)
}

/// The reduction on enumerated parameters and on random signed sets,
/// against the brute-force loop.
pub fn check_reduction(
    nmax: usize,
    bound: HalfInt,
    random_cases: usize,
    seed: u64,
) -> CheckOutcome {
    let all = all_lds(nmax, bound);
    let enumerated = par_fold(&all, |lds| {
        let mut out = CheckOutcome::default();
        let n = lds.dim();
        let pi = TemperedParam::from_lds(lds.clone());
        for k0 in [-1i64, 0] {
            let m0 = (n as i64 + k0).rem_euclid(2);
            let conv = Convention::new(m0, (n % 2) as i64);
            out.case();
            let input = || json!({ "param": lds_input(lds, conv), "k0": k0 });
            match atobe_invariants(&pi, k0, conv) {
                Ok(inv) => {
                    if inv.reduction_steps > n {
                        out.fail(
                            "stabilization",
                            input(),
                            format!("{} rounds", inv.reduction_steps),
                        );
                    }
                    if inv.xinf != xinf_bruteforce(&inv.x, inv.k) || !inv.xinf.is_subset(&inv.x) {
                        out.fail(
                            "xinf agreement",
                            input(),
                            "reduction differs from the brute force",
                        );
                    }
                    if (inv.k - k0).rem_euclid(2) != 0 {
                        out.fail(
                            "stabilization",
                            input(),
                            format!("k = {} has the wrong parity", inv.k),
                        );
                    }
                }
                Err(e) => out.fail("xinf agreement", input(), err_text(&e)),
            }
        }
        out
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<(SignedSet, i64)> = (0..random_cases)
        .map(|_| {
            let size = rng.gen_range(0..=8);
            let set = (0..size)
                .map(|_| {
                    let v = HalfInt::from_twice(rng.gen_range(-10..=10));
                    (
                        v,
                        if rng.gen_bool(0.5) {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        },
                    )
                })
                .collect();
            (set, rng.gen_range(-1..=4))
        })
        .collect();
    let random = par_fold(&inputs, |(x, k)| {
        let mut out = CheckOutcome::default();
        out.case();
        let (fast, steps) = reduce_x(x, *k);
        let input = || {
            json!({
                "x": x.iter().map(|(v, s)| json!([v.twice(), s.value()])).collect::<Vec<_>>(),
                "k": k,
                "seed": seed,
            })
        };
        if fast != xinf_bruteforce(x, *k) {
            out.fail(
                "xinf agreement",
                input(),
                "reduction differs from the brute force",
            );
        }
        if steps > x.len() {
            out.fail("stabilization", input(), format!("{steps} rounds"));
        }
        out
    });
    enumerated.merge(random)
}

/// Weakly decreasing integer lists of length `len` with entries in `[-b, b]`.
fn dominant_weights(len: usize, b: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in dominant_weights(len - 1, b) {
        let hi = rest.last().copied().unwrap_or(b);
        for x in -b..=hi {
            let mut v = rest.clone();
            v.push(x);
            out.push(v);
        }
    }
    out
}

/// The K-type correspondence is injective and inverted by exchanging roles.
pub fn check_ktypes(nmax: usize, mmax: usize, weight_bound: i64) -> CheckOutcome {
    let sources: Vec<Signature> = (1..=nmax).flat_map(Signature::all_of_dim).collect();
    par_fold(&sources, |&source| {
        let mut out = CheckOutcome::default();
        let n = source.dim();
        let mus: Vec<KType> = dominant_weights(source.p, weight_bound)
            .into_iter()
            .flat_map(|a| {
                dominant_weights(source.q, weight_bound)
                    .into_iter()
                    .map(move |b| KType { a: a.clone(), b })
            })
            .collect();
        for target in (1..=mmax).flat_map(Signature::all_of_dim) {
            let conv = Convention::new((target.dim() % 2) as i64, (n % 2) as i64);
            let mut seen: HashMap<KType, KType> = HashMap::new();
            for mu in &mus {
                out.case();
                let input = || json!({ "a": mu.a, "b": mu.b, "source": signature_json(source), "target": signature_json(target), "m0": conv.m0, "n0": conv.n0 });
                let Ok(Some(image)) = ktype_correspond(mu, target, conv) else {
                    continue;
                };
                if image.signature() != target || !image.is_dominant() {
                    out.fail("ktype inverse", input(), format!("image {image}"));
                }
                if let Some(prev) = seen.insert(image.clone(), mu.clone()) {
                    out.fail(
                        "ktype injective",
                        input(),
                        format!("{prev} has the same image {image}"),
                    );
                }
                match ktype_correspond(&image, source, conv.reversed()) {
                    Ok(Some(back)) if back == *mu => {}
                    other => out.fail(
                        "ktype inverse",
                        input(),
                        format!("image {image} maps back to {other:?}"),
                    ),
                }
            }
        }
        out
    })
}

/// Bounds for [`consistency_suite`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteLimits {
    pub nmax: usize,
    pub lambda_bound: HalfInt,
    pub spread: usize,
    pub dmax: usize,
    pub random_cases: usize,
    pub seed: u64,
    pub zeta: ZetaRule,
}

impl Default for SuiteLimits {
    fn default() -> Self {
        Self {
            nmax: 3,
            lambda_bound: HalfInt::from_twice(7),
            spread: 4,
            dmax: 2,
            random_cases: 10_000,
            seed: 0x7e7a_5eed,
            zeta: standard_zeta,
        }
    }
}

/// Runs every property check within `limits`.
pub fn consistency_suite(limits: &SuiteLimits) -> ConsistencyReport {
    let start = Instant::now();
    let SuiteLimits {
        nmax,
        lambda_bound: bound,
        spread,
        dmax,
        random_cases,
        seed,
        zeta,
    } = *limits;
    let outcome = if nmax == 0 {
        CheckOutcome::default()
    } else {
        [
            check_packets(nmax, bound),
            check_lift_coherence(nmax, bound, spread),
            check_round_trip(nmax, bound),
            check_apacket(nmax, bound, spread, zeta),
            check_duality(nmax, bound, spread),
            check_corollaries(nmax, bound, spread, dmax),
            check_reduction(nmax, bound, random_cases, seed),
            check_ktypes(nmax, nmax + spread, 2),
        ]
        .into_iter()
        .fold(CheckOutcome::default(), CheckOutcome::merge)
    };
    ConsistencyReport {
        cases_run: outcome.cases,
        violations: outcome.violations,
        elapsed: start.elapsed(),
        seed,
    }
}

/// Keeps the distinct-κ view of a parameter for reporting.
pub fn kappa_multiset(lds: &LdsParam) -> BTreeMap<HalfInt, usize> {
    lds.entries().iter().fold(BTreeMap::new(), |mut acc, e| {
        *acc.entry(e.lambda).or_insert(0) += 1;
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_lds(&EnumerationSpec::new(1, h(2))).len(), 6);
        let only = EnumerationSpec::new(1, h(2)).with_signatures(vec![Signature::new(1, 0)]);
        assert_eq!(enumerate_lds(&only).len(), 3);
        // {1/2, -1/2}: four discrete series and two limits at each value
        assert_eq!(enumerate_lds(&EnumerationSpec::new(2, h(1))).len(), 8);
        assert_eq!(
            enumerate_lds(&EnumerationSpec::new(2, h(1)).discrete_only()).len(),
            4
        );
    }

    #[test]
    fn enumeration_is_valid_and_distinct() {
        let all = enumerate_lds(&EnumerationSpec::new(4, h(5)));
        let distinct: HashSet<_> = all.iter().map(|(_, l)| l.clone()).collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all
            .iter()
            .all(|(sig, l)| l.validate().is_ok() && l.signature() == *sig));
    }

    #[test]
    fn bruteforce_examples() {
        let set = |items: &[(i64, i64)]| -> SignedSet {
            items
                .iter()
                .map(|&(t, s)| (h(t), Sign::from_value(s).unwrap()))
                .collect()
        };
        assert!(xinf_bruteforce(&set(&[(3, 1), (1, -1)]), 0).is_empty());
        let keep = set(&[(1, 1), (-1, -1)]);
        assert_eq!(xinf_bruteforce(&keep, 0), keep);
        assert!(xinf_bruteforce(&SignedSet::new(), 0).is_empty());
    }

    #[test]
    fn empty_suite() {
        let report = consistency_suite(&SuiteLimits {
            nmax: 0,
            ..SuiteLimits::default()
        });
        assert_eq!(report.cases_run, 0);
        assert!(report.violations.is_empty());
    }
}
