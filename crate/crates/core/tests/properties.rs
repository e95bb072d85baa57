use std::sync::OnceLock;

use num_rational::Rational64;
use proptest::prelude::*;
use theta_core::atobe::{atobe_invariants, c_count, dual_param, k0_for, nonvanishing};
use theta_core::oracle::{all_lds, conventions, xinf_bruteforce};
use theta_core::wire::{Param, ParamDocument};
use theta_core::*;

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn pool() -> &'static [LdsParam] {
    static POOL: OnceLock<Vec<LdsParam>> = OnceLock::new();
    POOL.get_or_init(|| all_lds(4, h(7)))
}

fn lds() -> impl Strategy<Value = LdsParam> {
    (0..pool().len()).prop_map(|i| pool()[i].clone())
}

fn character() -> impl Strategy<Value = UnitaryCharacter> {
    (-6i64..=6, -4i64..=4, 1i64..=4)
        .prop_map(|(w, a, b)| UnitaryCharacter::new(w, Rational64::new(a, b)))
}

fn sign_value(s: Selfduality) -> Option<i64> {
    match s {
        Selfduality::ConjugateSelfdual(sign) => Some(sign.value()),
        Selfduality::NotConjugateSelfdual => None,
    }
}

proptest! {
    #[test]
    fn selfduality_sign_is_multiplicative(a in character(), b in character()) {
        let prod = sign_value(character_csd_sign(&(a * b)));
        if let (Some(x), Some(y)) = (sign_value(character_csd_sign(&a)), sign_value(character_csd_sign(&b))) { prop_assert_eq!(prod, Some(x * y)) }
    }

    #[test]
    fn space_sign_under_swap(p in 0usize..12, q in 0usize..12) {
        // ε(q,p) = ε(p,q)·(-1)^(p-q)
        let flip = Sign::pow_neg_one(p as i64 - q as i64);
        prop_assert_eq!(epsilon_of_space(q, p), epsilon_of_space(p, q) * flip);
    }

    #[test]
    fn packet_round_trip(pi in lds()) {
        let phi = lds_to_packet(&pi);
        prop_assert_eq!(lds_from_packet(&phi, pi.signature()).unwrap(), Some(pi));
    }

    #[test]
    fn rep_round_trip(pi in lds()) {
        prop_assert_eq!(LdsParam::from_rep(&pi.to_rep()).unwrap(), pi);
    }

    #[test]
    fn wire_round_trip(pi in lds(), m0 in -2i64..=2) {
        let conv = Convention::new(m0, (pi.dim() % 2) as i64);
        let text = serde_json::to_string(&ParamDocument::lds(&pi, conv)).unwrap();
        let doc: ParamDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(doc.convention(), conv);
        prop_assert_eq!(doc.decode().unwrap(), Param::Lds(pi));
    }

    #[test]
    fn normalization_is_idempotent(pi in lds(), extra in 1usize..=3) {
        let n = pi.dim();
        for target in (n + 1..=n + extra).flat_map(Signature::all_of_dim) {
            let conv = conventions(n, target.dim())[0];
            if let Some(sigma) = theta_lift_lds(&pi, target, conv).unwrap() {
                let once = aq_normalize(&sigma).unwrap();
                prop_assert_eq!(aq_normalize(&once).unwrap(), once);
            }
        }
    }

    #[test]
    fn counts_grow_in_unit_steps(pi in lds(), m in 0usize..=8) {
        let n = pi.dim();
        let conv = conventions(n, m)[0];
        let inv = atobe_invariants(&TemperedParam::from_lds(pi), k0_for(n, m), conv).unwrap();
        prop_assert_eq!(c_count(&inv, 0), (0, 0));
        for x in 1..=12 {
            let (a0, b0) = c_count(&inv, x - 1);
            let (a1, b1) = c_count(&inv, x);
            prop_assert!(a1 == a0 || a1 == a0 + 1);
            prop_assert!(b1 == b0 || b1 == b0 + 1);
        }
        prop_assert_eq!(xinf_bruteforce(&inv.x, inv.k), inv.xinf);
    }

    #[test]
    fn nonvanishing_persists(pi in lds(), m in 0usize..=8, r in 0usize..=8) {
        let n = pi.dim();
        prop_assume!(r <= m);
        let target = Signature::new(r, m - r);
        let conv = conventions(n, m)[1];
        let pi = TemperedParam::from_lds(pi);
        if nonvanishing(&pi, target, conv).unwrap() {
            prop_assert!(nonvanishing(&pi, Signature::new(r + 1, m - r + 1), conv).unwrap());
        }
    }

    #[test]
    fn duality_swaps_targets(pi in lds(), m in 0usize..=8, r in 0usize..=8) {
        let n = pi.dim();
        prop_assume!(r <= m);
        let target = Signature::new(r, m - r);
        let conv = conventions(n, m)[0];
        let pi = TemperedParam::from_lds(pi);
        let dual = dual_param(&pi, conv);
        prop_assert_eq!(
            nonvanishing(&pi, target, conv).unwrap(),
            nonvanishing(&dual, target.swapped(), conv).unwrap()
        );
        prop_assert_eq!(dual_param(&dual, conv), pi);
    }

    #[test]
    fn ktype_correspondence_inverts(
        a in proptest::collection::vec(-3i64..=3, 0..=3),
        b in proptest::collection::vec(-3i64..=3, 0..=3),
        r in 0usize..=4,
        s in 0usize..=4,
    ) {
        let mut a = a;
        let mut b = b;
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        let n = a.len() + b.len();
        let target = Signature::new(r, s);
        let conv = Convention::new(((r + s) % 2) as i64, (n % 2) as i64);
        let mu = KType::new(a, b).unwrap();
        let source = mu.signature();
        if let Some(image) = ktype_correspond(&mu, target, conv).unwrap() {
            prop_assert_eq!(image.signature(), target);
            prop_assert_eq!(ktype_correspond(&image, source, conv.reversed()).unwrap(), Some(mu));
        }
    }
}
