//! Randomised invariants across modules.

use std::f64::consts::{PI, TAU};

use corrdyn::bundle::{bundle_map, bundle_point_from_orbit, choose_bundle_params, reencode, series_of};
use corrdyn::motion::{motion_point, solenoid_orbit};
use corrdyn::orbit::OrbitSegment;
use corrdyn::rng::SplitMix64;
use corrdyn::scalar::{cis, fmt17};
use corrdyn::solenoid::{reduce_angle, symbolic_point, theta, torus_address, torus_apply};
use corrdyn::{annulus_bounds, BundleParams, Complex64 as C, MotionConfig, Params, SymbolSequence, TorusPoint};
use proptest::prelude::*;

fn pq() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![Just((6, 2)), Just((3, 2)), Just((5, 3)), Just((4, 2)), Just((7, 3)), Just((2, 1))]
}

fn polar(lo: f64, hi: f64) -> impl Strategy<Value = C> {
    (lo..hi, -PI..PI).prop_map(|(r, t)| cis(t) * r)
}

fn nearest(set: &[C], z: C) -> f64 {
    set.iter().map(|x| (x - z).norm()).fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn images_and_preimages_are_dual((p, q) in pq(), c in polar(0.0, 0.5), z in polar(0.3, 2.5)) {
        let params = Params::new(p, q, c).unwrap();
        let imgs = params.images(z).unwrap();
        prop_assert_eq!(imgs.len(), q as usize);
        for w in &imgs {
            prop_assert!(params.satisfies(z, *w));
            prop_assert!(nearest(&params.preimages(*w).unwrap(), z) <= 1e-9 * z.norm().max(1.0));
        }
        let pre = params.preimages(z).unwrap();
        prop_assert_eq!(pre.len(), p as usize);
        for zeta in &pre {
            prop_assert!(nearest(&params.images(*zeta).unwrap(), z) <= 1e-9 * z.norm().max(1.0));
        }
    }

    #[test]
    fn preimages_only_depend_on_w_minus_c((p, q) in pq(), c in polar(0.0, 0.5), d in polar(0.0, 0.5), w in polar(0.3, 2.0)) {
        let a = Params::new(p, q, c).unwrap().preimages(w).unwrap();
        let b = Params::new(p, q, c + d).unwrap().preimages(w + d).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn escape_beyond_s_c((p, q) in pq(), c in polar(0.0, 0.4), t in -PI..PI, f in 1.0001f64..3.0) {
        let params = Params::new(p, q, c).unwrap();
        let s = annulus_bounds(&params).escape_radius;
        let z = cis(t) * (s * f);
        for w in params.images(z).unwrap() {
            prop_assert!(w.norm() > z.norm());
        }
    }

    #[test]
    fn annulus_bounds_solve_their_equations((p, q) in pq(), m in 0.0f64..0.3) {
        let params = Params::new(p, q, C::new(0.0, m)).unwrap();
        let b = annulus_bounds(&params);
        let beta = p as f64 / q as f64;
        prop_assert!((b.escape_radius.powf(beta - 1.0) - (1.0 + m)).abs() <= 1e-9);
        if b.valid && m > 0.0 {
            for x in [b.lower_root, b.upper_root] {
                prop_assert!((x - x.powf(beta) - m).abs() <= 1e-9);
            }
            prop_assert!(b.lower_root < b.upper_root && b.upper_root <= b.escape_radius);
        }
    }

    #[test]
    fn theta_matches_angle_multiplication(t in 0.0..TAU, k in 0u32..2) {
        let params = Params::new(6, 2, C::new(0.0, 0.0)).unwrap();
        let lhs = cis(theta(&params, k, t)).powu(2);
        prop_assert!((lhs - cis(t).powu(6)).norm() <= 1e-12);
        let r = reduce_angle(theta(&params, k, t));
        prop_assert!((0.0..TAU).contains(&r));
    }

    #[test]
    fn symbolic_and_torus_constructions_agree(t in 0.0..TAU, word in proptest::collection::vec(0u32..2, 12)) {
        let params = Params::new(6, 2, C::new(0.0, 0.0)).unwrap();
        let bp = choose_bundle_params(&params, &annulus_bounds(&params)).unwrap();
        let tau = SymbolSequence::new(2, word).unwrap();
        let g = symbolic_point(&bp, &params, t, &tau, 12).unwrap();
        let (a, w) = torus_address(&params, t, &tau, 12).unwrap();
        let x = torus_apply(&bp, &params, &w, TorusPoint::new(a, C::new(0.0, 0.0)).unwrap()).unwrap();
        prop_assert!((g.base - x.c2().0).norm() <= 1e-12);
        prop_assert!((g.series - x.c2().1).norm() <= g.tail + 1e-12);
    }

    #[test]
    fn bundle_map_shifts_the_series(c in polar(0.0, 0.15), seed in any::<u64>()) {
        let params = Params::new(6, 2, c).unwrap();
        let bounds = annulus_bounds(&params);
        let bp = choose_bundle_params(&params, &bounds).unwrap();
        let mut rng = SplitMix64::new(seed);
        // a short forward orbit started on the circle stays near the set
        let z = cis(rng.uniform(0.0, TAU));
        let word: Vec<u32> = (0..8).map(|_| rng.below(2) as u32).collect();
        let orbit = OrbitSegment::forward(&params, z, &word).unwrap();
        let x = bundle_point_from_orbit(&bp, &orbit).unwrap();
        let y = bundle_map(&bp, &x).unwrap();
        prop_assert_eq!(y.base, orbit.points()[1]);
        // plain forward summation of r Σ δ^(n-1) z_n
        let pts = orbit.points();
        let direct: C = (1..pts.len()).map(|n| pts[n] * (bp.r * bp.delta.powi(n as i32 - 1))).sum();
        let scale = orbit.max_modulus().max(1.0);
        prop_assert!((direct - x.series).norm() <= 1e-12 * scale);
        prop_assert_eq!(series_of(&bp, pts), x.series);
        prop_assert!(((x.series - pts[1] * bp.r) / bp.delta - y.series).norm() <= 1e-12 * scale / bp.delta);
        let other = BundleParams::new(bp.r / 2.0, bp.delta / 2.0, bp.radius).unwrap();
        let back = reencode(&reencode(&x, &other).unwrap(), &bp).unwrap();
        prop_assert_eq!(back.base, x.base);
        prop_assert!((back.series - x.series).norm() <= 1e-12 * scale);
    }

    #[test]
    fn motion_is_identity_at_the_base(t in 0.0..TAU, word in proptest::collection::vec(0u32..2, 4)) {
        let zero = Params::new(6, 2, C::new(0.0, 0.0)).unwrap();
        let bp = choose_bundle_params(&zero, &annulus_bounds(&zero)).unwrap();
        let cfg = MotionConfig::new(0.1, 1.0 / 3.0).unwrap();
        let orbit = solenoid_orbit(&zero, t, &SymbolSequence::new(2, word).unwrap(), 30 + cfg.buffer).unwrap();
        let x = bundle_point_from_orbit(&bp, &orbit).unwrap();
        let m = motion_point(&bp, &zero, &zero, &x, &cfg, 30).unwrap();
        prop_assert_eq!(&m.point, &bundle_point_from_orbit(&bp, &orbit.truncated(30)).unwrap());
        prop_assert!(m.error_bound <= m.point.tail_bound);
    }

    #[test]
    fn fmt17_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn symbol_strings_round_trip(word in proptest::collection::vec(0u32..5, 0..20)) {
        let s: String = word.iter().map(|d| char::from_digit(*d, 10).unwrap()).collect();
        let parsed = SymbolSequence::parse(5, &s).unwrap();
        prop_assert_eq!(parsed.symbols(), &word[..]);
    }

    #[test]
    fn rng_streams_are_reproducible(seed in any::<u64>(), n in 1u64..1000) {
        let mut a = SplitMix64::new(seed);
        let mut b = SplitMix64::new(seed);
        for _ in 0..16 {
            let x = a.below(n);
            prop_assert!(x < n);
            prop_assert_eq!(x, b.below(n));
            let u = a.next_f64();
            prop_assert!((0.0..1.0).contains(&u));
            prop_assert_eq!(u, b.next_f64());
        }
    }
}
