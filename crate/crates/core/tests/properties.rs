use dvm_core::circles::{
    circle_points, exp_sum_closed, exp_sum_direct, exp_sum_direct_with, r2, AngleConvention,
};
use dvm_core::collision::{post_collision, LatticeCollision, Vec2};
use dvm_core::numtheory::{factorize, gaussian_factorize, is_prime};
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn brute_points(n: u64) -> Vec<(i64, i64)> {
    let m = (n as f64).sqrt() as i64 + 1;
    let mut pts = Vec::new();
    for x in -m..=m {
        let rest = n as i64 - x * x;
        if rest < 0 {
            continue;
        }
        let y = (rest as f64).sqrt().round() as i64;
        if y * y == rest {
            pts.push((x, y));
            if y != 0 {
                pts.push((x, -y));
            }
        }
    }
    pts.sort_unstable();
    pts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn factorization_multiplies_back(n in 1u64..u64::MAX) {
        let f = factorize(n);
        let mut prod = 1u128;
        for pp in &f {
            prop_assert!(is_prime(pp.p));
            prod *= (pp.p as u128).pow(pp.alpha);
        }
        prop_assert_eq!(prod, n as u128);
        prop_assert!(f.windows(2).all(|w| w[0].p < w[1].p));
    }

    #[test]
    fn circle_points_match_scan(n in 1u64..2_000_000) {
        let set = circle_points(n);
        let mut got = set.points.clone();
        got.sort_unstable();
        prop_assert_eq!(&got, &brute_points(n));
        prop_assert_eq!(set.len() as u64, r2(n));
        prop_assert!(set.angles.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn closed_form_matches_direct(n in 1u64..200_000, k in -24i64..=24) {
        let direct = exp_sum_direct(n, k).value;
        let closed = exp_sum_closed(n, k);
        let scale = r2(n).max(1) as f64;
        prop_assert!(direct.im.abs() <= 1e-9 * scale);
        prop_assert!((direct.norm() - closed).abs() <= 1e-9 * scale);
    }

    #[test]
    fn abs_s_is_convention_free(n in 1u64..100_000, k in 1i64..20) {
        let a = exp_sum_direct_with(n, k, AngleConvention::Atan2).value.norm();
        let b = exp_sum_direct_with(n, k, AngleConvention::SinCos).value.norm();
        prop_assert!((a - b).abs() <= 1e-9 * r2(n).max(1) as f64);
    }

    #[test]
    fn quarter_abs_s_is_multiplicative(a in 1u64..50_000, b in 1u64..50_000, k in prop::sample::select(vec![4i64, 8, 12, 16])) {
        prop_assume!(gcd(a, b) == 1);
        let lhs = exp_sum_closed(a * b, k) / 4.0;
        let rhs = exp_sum_closed(a, k) / 4.0 * (exp_sum_closed(b, k) / 4.0);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0));
    }

    #[test]
    fn gaussian_splittings_have_prime_norm(n in 1u64..10_000_000) {
        let g = gaussian_factorize(n);
        for s in &g.splittings {
            prop_assert_eq!((s.x * s.x + s.y * s.y) as u64, s.p);
            prop_assert!(s.x > s.y && s.y > 0);
        }
    }

    #[test]
    fn lattice_collisions_conserve(
        vx in -1000i64..1000, vy in -1000i64..1000,
        n in 1u64..5000, i in 0usize..1000, j in 0usize..1000,
    ) {
        let set = circle_points(n);
        prop_assume!(!set.is_empty());
        let zeta = set.points[i % set.len()];
        let zeta_p = set.points[j % set.len()];
        let c = LatticeCollision::new([vx, vy], [zeta.0, zeta.1], [zeta_p.0, zeta_p.1]);
        prop_assert!(c.conserves_momentum());
        prop_assert!(c.conserves_energy());
    }

    #[test]
    fn float_collisions_conserve(
        vx in -5.0f64..5.0, vy in -5.0f64..5.0, wx in -5.0f64..5.0, wy in -5.0f64..5.0, theta in -3.2f64..3.2,
    ) {
        let c = post_collision(Vec2::new(vx, vy), Vec2::new(wx, wy), theta);
        let scale = c.v.norm_sq() + c.v_star.norm_sq() + 1.0;
        prop_assert!(c.momentum_defect().norm() <= 1e-12 * scale.sqrt());
        prop_assert!(c.energy_defect().abs() <= 1e-12 * scale);
    }
}
