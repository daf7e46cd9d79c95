use carlitz_core::sample::{self, SeriesShape};
use carlitz_core::{multinomial_coeff, Ctx};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx_for(which: u8) -> Ctx {
    match which % 3 {
        0 => Ctx::for_q(2, 1, 1).unwrap(),
        1 => Ctx::for_q(3, 1, 1).unwrap(),
        _ => Ctx::for_q(2, 2, 1).unwrap(),
    }
}

const SHAPE: SeriesShape = SeriesShape { min_val: -1, spread: 3, terms: 3, den_exp: 1 };

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn series_field_laws(which in 0u8..3, seed in any::<u64>()) {
        let ctx = ctx_for(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::series(&ctx, &mut rng, SHAPE);
        let b = sample::series(&ctx, &mut rng, SHAPE);
        let c = sample::series(&ctx, &mut rng, SHAPE);
        prop_assert_eq!(ctx.ps_mul(&a, &b), ctx.ps_mul(&b, &a));
        let lhs = ctx.ps_mul(&a, &ctx.ps_add(&b, &c));
        let rhs = ctx.ps_add(&ctx.ps_mul(&a, &b), &ctx.ps_mul(&a, &c));
        prop_assert_eq!(lhs, rhs);
        // Frobenius is additive and multiplicative, and root_q undoes it
        let f = |s: &carlitz_core::PerfSeries| ctx.ps_frobenius(s, 1).unwrap();
        let (sum, prod) = (ctx.ps_add(&a, &b), ctx.ps_mul(&a, &b));
        prop_assert_eq!(f(&sum), ctx.ps_add(&f(&a), &f(&b)));
        prop_assert_eq!(f(&prod), ctx.ps_mul(&f(&a), &f(&b)));
        prop_assert_eq!(ctx.ps_root_q(&f(&a)).unwrap(), a.clone());
        if !a.is_zero() {
            let inv = ctx.ps_inv(&a).unwrap();
            prop_assert!(ctx.ps_eq_mod(&ctx.ps_mul(&a, &inv), &ctx.ps_one()));
        }
    }

    #[test]
    fn composition_ring_laws(which in 0u8..3, seed in any::<u64>()) {
        let ctx = ctx_for(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 6;
        let a = ctx.cs_truncate(&sample::comp(&ctx, &mut rng, 0, 4, 0.6, SHAPE), n);
        let b = ctx.cs_truncate(&sample::comp(&ctx, &mut rng, 0, 4, 0.6, SHAPE), n);
        let c = ctx.cs_truncate(&sample::comp(&ctx, &mut rng, 0, 4, 0.6, SHAPE), n);
        let ab_c = ctx.cs_compose(&ctx.cs_compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = ctx.cs_compose(&a, &ctx.cs_compose(&b, &c).unwrap()).unwrap();
        prop_assert!(ctx.cs_eq_mod(&ab_c, &a_bc));
        // both sides distribute since every element is additive
        let lhs = ctx.cs_compose(&a, &ctx.cs_add(&b, &c)).unwrap();
        let rhs = ctx.cs_add(&ctx.cs_compose(&a, &b).unwrap(), &ctx.cs_compose(&a, &c).unwrap());
        prop_assert!(ctx.cs_eq_mod(&lhs, &rhs));
        let lhs = ctx.cs_compose(&ctx.cs_add(&a, &b), &c).unwrap();
        let rhs = ctx.cs_add(&ctx.cs_compose(&a, &c).unwrap(), &ctx.cs_compose(&b, &c).unwrap());
        prop_assert!(ctx.cs_eq_mod(&lhs, &rhs));
        let t = ctx.cs_identity();
        prop_assert!(ctx.cs_eq_mod(&ctx.cs_compose(&t, &a).unwrap(), &a));
        prop_assert!(ctx.cs_eq_mod(&ctx.cs_compose(&a, &t).unwrap(), &a));
    }

    #[test]
    fn unit_inverse_is_two_sided(which in 0u8..3, seed in any::<u64>()) {
        let ctx = ctx_for(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample::unit(&ctx, &mut rng, 4, SeriesShape { min_val: 0, ..SHAPE });
        let inv = ctx.invert_unit(&u, 6).unwrap();
        let t = ctx.cs_truncate(&ctx.cs_identity(), 6);
        prop_assert!(ctx.cs_eq_mod(&ctx.cs_compose(&u, &inv).unwrap(), &t));
        prop_assert!(ctx.cs_eq_mod(&ctx.cs_compose(&inv, &u).unwrap(), &t));
    }

    #[test]
    fn ore_condition_holds(which in 0u8..3, seed in any::<u64>()) {
        let ctx = ctx_for(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SeriesShape { min_val: 0, ..SHAPE };
        let a = sample::comp_with_lead(&ctx, &mut rng, 0, 3, shape);
        let b = sample::comp_with_lead(&ctx, &mut rng, 1, 4, shape);
        let (a2, b2) = ctx.ore_left_multiple(&a, &b, 6).unwrap();
        prop_assert!(!b2.is_zero());
        let lhs = ctx.cs_compose(&a2, &b).unwrap();
        let rhs = ctx.cs_compose(&b2, &a).unwrap();
        prop_assert!(ctx.cs_eq_mod(&lhs, &rhs));
    }

    #[test]
    fn self_power_matches_multinomial(which in 0u8..3, seed in any::<u64>()) {
        let ctx = ctx_for(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = ctx.cs_truncate(&sample::comp(&ctx, &mut rng, 1, 6, 0.7, SHAPE), 6);
        for k in 1..=3u32 {
            let zk = ctx.cs_self_power(&z, k).unwrap();
            for l in 0..=6 {
                let want = multinomial_coeff(&ctx, l, k, &z).unwrap();
                let got = zk.coeff(l).cloned().unwrap_or_else(|| ctx.ps_zero());
                prop_assert!(ctx.ps_eq_mod(&got, &want), "l={} k={}", l, k);
            }
        }
    }

    #[test]
    fn d_agrees_with_pointwise_delta(which in 0u8..3, seed in any::<u64>()) {
        let ctx = ctx_for(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample::comp(&ctx, &mut rng, 0, 5, 0.6, SHAPE);
        // Delta u = u o (x t) - x u
        let xt = ctx.cs_monomial(0, ctx.ps_x());
        let pointwise = ctx.cs_sub(&ctx.cs_compose(&u, &xt).unwrap(), &ctx.cs_scale(&ctx.ps_x(), &u));
        prop_assert!(ctx.cs_eq_mod(&ctx.carlitz_delta(&u).unwrap(), &pointwise));
        // d = tau^-1 o Delta
        let d = ctx.carlitz_d(&u).unwrap();
        prop_assert!(ctx.cs_eq_mod(&ctx.cs_tau(&d, 1).unwrap(), &ctx.carlitz_delta(&u).unwrap()));
    }
}
