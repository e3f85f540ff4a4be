//! Property and invariant tests across the crate: partition exactness,
//! closed-form versus loop iteration, residuals of the defining equations,
//! symmetry laws, and memo purity.

use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use funeq::affine::{anchor_fixed_point, interval_family, limit_point, locate_index, AffineMap};
use funeq::expr::{BinOp, Func};
use funeq::oracle::{iterate_loop, residual_sweep};
use funeq::parity::{Parity, ParityDomain, ParityProblem};
use funeq::penlp::{classify, constraint_witness, validate_initial_set, Classification, WitnessVerdict};
use funeq::scale::make_scale_problem;
use funeq::shift_scale::make_problem;
use funeq::three_term::ThreeTermProblem;
use funeq::{EquationSpec, Expr, InitialData, Interval, IntervalUnion};

fn uniform_data(set: &str, f: &str) -> InitialData {
    InitialData::uniform(IntervalUnion::parse(set).unwrap(), Expr::parse(f).unwrap()).unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

// ---------------------------------------------------------------------------
// interval algebra

fn arb_interval() -> impl Strategy<Value = Interval> {
    (-50.0f64..50.0, 0.001f64..20.0, any::<bool>(), any::<bool>())
        .prop_map(|(lo, len, lc, hc)| Interval::new(lo, lo + len, lc, hc).unwrap())
}

proptest! {
    #[test]
    fn normalize_is_idempotent_and_preserves_membership(
        parts in proptest::collection::vec(arb_interval(), 1..6),
        probes in proptest::collection::vec(-60.0f64..60.0, 32),
    ) {
        if let Ok(u) = IntervalUnion::normalize(parts.clone()) {
            let again = IntervalUnion::normalize(u.parts().to_vec()).unwrap();
            prop_assert_eq!(&u, &again);
            for x in probes {
                let direct = parts.iter().any(|p| p.contains(x));
                prop_assert_eq!(u.contains(x), direct, "probe {}", x);
            }
            // endpoints are the sharp spots
            for p in &parts {
                for x in [p.lo(), p.hi()] {
                    let direct = parts.iter().any(|p| p.contains(x));
                    prop_assert_eq!(u.contains(x), direct, "endpoint {}", x);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// expression language

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0f64..100.0).prop_map(Expr::Num),
        Just(Expr::Var),
        Just(Expr::Pi),
        Just(Expr::E),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone(), 0u8..5).prop_map(|(a, b, op)| {
                let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]
                    [op as usize];
                Expr::Bin(op, Box::new(a), Box::new(b))
            }),
            (inner, 0u8..9).prop_map(|(a, f)| {
                let f = [
                    Func::Sin,
                    Func::Cos,
                    Func::Tan,
                    Func::Exp,
                    Func::Ln,
                    Func::Abs,
                    Func::Sqrt,
                    Func::Floor,
                    Func::Frac,
                ][f as usize];
                Expr::Call(f, Box::new(a))
            }),
        ]
    })
}

proptest! {
    #[test]
    fn printer_round_trips(e in arb_expr()) {
        let printed = e.to_string();
        let reparsed = Expr::parse(&printed).unwrap();
        prop_assert_eq!(&e, &reparsed, "through `{}`", printed);
    }
}

// ---------------------------------------------------------------------------
// affine iteration: closed form versus loop, contraction law

#[test]
fn closed_form_matches_loop_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..2_000 {
        let mag = 10f64.powf(rng.random_range(-1.0..1.0));
        let slope = if rng.random_bool(0.5) { mag } else { -mag };
        let offset = rng.random_range(-5.0..5.0);
        let x0 = rng.random_range(-100.0..100.0);
        let n = rng.random_range(0..=60u32);
        let map = AffineMap::new(slope, offset);
        let closed = map.iterate_closed(x0, n);
        let looped = iterate_loop(&map, x0, n);
        assert!(
            rel_close(closed, looped, 1e-9),
            "slope={slope} offset={offset} x0={x0} n={n}: {closed} vs {looped}"
        );
    }
}

#[test]
fn iterates_contract_by_the_slope_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..500 {
        let slope: f64 = rng.random_range(-0.9..0.9);
        if slope.abs() < 0.05 {
            continue;
        }
        let map = AffineMap::new(slope, rng.random_range(-3.0..3.0));
        let p = map.fixed_point().unwrap();
        let mut x = rng.random_range(-20.0..20.0);
        for _ in 0..30 {
            let next = map.apply(x);
            let (d0, d1) = ((x - p).abs(), (next - p).abs());
            if d0 > 1e-6 {
                assert!(
                    (d1 - slope.abs() * d0).abs() <= 1e-9 * (1.0 + d0),
                    "slope={slope} x={x}"
                );
            }
            x = next;
        }
    }
}

// ---------------------------------------------------------------------------
// partition properties of the interval families

#[test]
fn right_family_tiles_exactly() {
    let (x0, b) = (1.5, 0.5);
    let first = interval_family(x0, b, 1).unwrap();
    assert_eq!(first.lo(), x0 + 1.0);
    for k in 1..20 {
        let cur = interval_family(x0, b, k).unwrap();
        let next = interval_family(x0, b, k + 1).unwrap();
        assert_eq!(cur.hi(), next.lo(), "gap or overlap between members {k} and {}", k + 1);
    }
    let spread = x0 - anchor_fixed_point(b);
    let last = interval_family(x0, b, 20).unwrap();
    assert_eq!(last.hi(), limit_point(b) + spread * b.powi(-20));
}

#[test]
fn left_family_tiles_down_to_the_limit_point() {
    let (x0, b) = (1.5, 0.5);
    let limit = limit_point(b);
    let first = interval_family(x0, b, -1).unwrap();
    assert_eq!(first.hi(), b * x0);
    for k in 1..40 {
        let cur = interval_family(x0, b, -k).unwrap();
        let next = interval_family(x0, b, -(k + 1)).unwrap();
        assert_eq!(next.hi(), cur.lo(), "gap between members -{k} and -{}", k + 1);
    }
    let innermost = interval_family(x0, b, -40).unwrap();
    assert!(innermost.lo() - limit < 1e-9, "40 members reach within the tolerance band");
    assert!(innermost.lo() > limit, "members stay strictly above the limit point");
}

#[test]
fn locate_index_agrees_with_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let (x0, b) = (1.5, 0.5);
    let lo = interval_family(x0, b, -12).unwrap().lo();
    let hi = interval_family(x0, b, 12).unwrap().hi();
    for _ in 0..10_000 {
        let x = rng.random_range(lo..hi);
        let k = locate_index(x, x0, b).unwrap();
        assert!(interval_family(x0, b, k).unwrap().contains(x), "x={x} k={k}");
    }
}

#[test]
fn dyadic_partitions_tile_without_gaps() {
    let eps = 1.0;
    for n in 0..40 {
        let hi_of_n = 2f64.powi(n + 1) * eps;
        let lo_of_next = 2f64.powi(n + 1) * eps;
        assert_eq!(hi_of_n, lo_of_next);
        let inner_hi = eps / 2f64.powi(n + 1);
        let inner_lo_above = eps / 2f64.powi(n + 1);
        assert_eq!(inner_hi, inner_lo_above);
    }
    // membership against the doubling engine: every power-block maps back
    let p = make_scale_problem(2.0, uniform_data("[1,2)", "x")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..2_000 {
        let n = rng.random_range(-40..=40i32);
        let x = 2f64.powi(n) * rng.random_range(1.0..2.0);
        let y = p.evaluate(x).unwrap();
        assert!(rel_close(y, 2f64.powi(-n) * x, 1e-12), "x={x}");
    }
}

// ---------------------------------------------------------------------------
// shift-scale engine laws

#[test]
fn shift_scale_residuals_across_regimes() {
    let l_half_neg = limit_point(-0.5);
    let annulus_half = format!(
        "[{},{})u[{},{})",
        l_half_neg - 1.0,
        l_half_neg - 0.5,
        l_half_neg + 0.5,
        l_half_neg + 1.0
    );
    let l_two_neg = limit_point(-2.0);
    let annulus_two = format!(
        "[{},{})u[{},{})",
        l_two_neg - 2.0,
        l_two_neg - 1.0,
        l_two_neg + 1.0,
        l_two_neg + 2.0
    );
    let cases: Vec<(f64, InitialData)> = vec![
        (1.0, uniform_data("[0,1)", "x^2")),
        (0.5, uniform_data("[0.75,2.5)", "sin(x)")),
        (2.0, uniform_data("[3,4)", "x^2-3")),
        (-1.0, uniform_data("[0.5,2.5)", "cos(2*pi*x)")),
        (-0.5, uniform_data(&annulus_half, "x")),
        (-2.0, uniform_data(&annulus_two, "abs(x)")),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for (b, data) in cases {
        let p = make_problem(b, data).unwrap();
        let mut checked = 0;
        let mut guard = 0;
        while checked < 1_000 {
            guard += 1;
            assert!(guard < 100_000, "could not find in-domain samples for b={b}");
            let x = rng.random_range(-8.0..8.0);
            let (lhs, rhs) = (p.evaluate(x + 1.0), p.evaluate(b * x));
            let (Ok(lhs), Ok(rhs)) = (lhs, rhs) else { continue };
            assert!(
                (lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()),
                "b={b}, x={x}: y(x+1)={lhs} vs y(bx)={rhs}"
            );
            checked += 1;
        }
    }
}

#[test]
fn restriction_is_exact_on_the_initial_set() {
    let p = make_problem(0.5, uniform_data("[0.75,2.5)", "sin(x)+x^2")).unwrap();
    let f = Expr::parse("sin(x)+x^2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..300 {
        let x = rng.random_range(0.75..2.5);
        assert_eq!(p.evaluate(x).unwrap().to_bits(), f.eval(x).unwrap().to_bits());
    }
    assert_eq!(p.evaluate(0.75).unwrap().to_bits(), f.eval(0.75).unwrap().to_bits());
}

#[test]
fn reflection_regime_reproduces_known_solutions() {
    // cos(2*pi*x) and sin(pi*x) both satisfy y(x) = y(1-x); extending their
    // restriction to [1/2, 2.5) must reproduce them on (-1.5, 2.5)
    let cases: [(&str, fn(f64) -> f64); 2] = [
        ("cos(2*pi*x)", |x| (2.0 * std::f64::consts::PI * x).cos()),
        ("sin(pi*x)", |x| (std::f64::consts::PI * x).sin()),
    ];
    for (text, f) in cases {
        let p = make_problem(-1.0, uniform_data("[0.5,2.5)", text)).unwrap();
        for i in 0..4_000 {
            let x = -1.5 + 4.0 * (i as f64 + 0.5) / 4_000.0;
            let got = p.evaluate(x).unwrap();
            assert!((got - f(x)).abs() <= 1e-9, "{text} at {x}: {got} vs {}", f(x));
        }
    }
}

#[test]
fn negative_b_traces_alternate_and_contract() {
    for (b, eps) in [(-0.5, 1.0), (-2.0, 1.0), (-0.25, 0.5), (-3.0, 2.0)] {
        let l = limit_point(b);
        let (r_in, r_out) = if b.abs() < 1.0 { (b.abs() * eps, eps) } else { (eps, b.abs() * eps) };
        let set = format!("[{},{})u[{},{})", l - r_out, l - r_in, l + r_in, l + r_out);
        let p = make_problem(b, uniform_data(&set, "x")).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
        for _ in 0..200 {
            let x = l + rng.random_range(-30.0..30.0);
            if x == l {
                continue;
            }
            let t = p.trace(x).unwrap();
            for w in t.points.windows(2) {
                assert!(
                    (w[0] - l).signum() != (w[1] - l).signum(),
                    "b={b}, consecutive iterates {w:?} on the same side of {l}"
                );
            }
        }
    }
}

#[test]
fn constant_data_gives_constant_extensions() {
    let cases: Vec<(f64, InitialData)> = vec![
        (1.0, uniform_data("[0,1)", "7")),
        (0.5, uniform_data("[0.75,2.5)", "7")),
        (-1.0, uniform_data("[0.5,2.5)", "7")),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for (b, data) in cases {
        let p = make_problem(b, data).unwrap();
        for _ in 0..200 {
            let x = rng.random_range(-1.4..2.4);
            if let Ok(v) = p.evaluate(x) {
                assert_eq!(v, 7.0, "b={b}, x={x}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// scale engine laws

#[test]
fn scale_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for (b, set) in [(2.0, "[1,2)"), (3.0, "[0.5,1.5)"), (-2.0, "(-2,-1]u[1,2)")] {
        let p = make_scale_problem(b, uniform_data(set, "x^2")).unwrap();
        let mut checked = 0;
        while checked < 1_000 {
            let x = rng.random_range(-50.0..50.0);
            let (Ok(lhs), Ok(rhs)) = (p.evaluate(x), p.evaluate(b * x)) else { continue };
            assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), "b={b}, x={x}");
            checked += 1;
        }
    }
}

#[test]
fn underdetermined_band_rejects_exactly_the_uncovered_blocks() {
    let p = make_scale_problem(2.0, uniform_data("[1,1.5)", "x")).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000a);
    for n in -8..=8i32 {
        let s = 2f64.powi(n);
        for _ in 0..20 {
            let covered = s * rng.random_range(1.0..1.4999);
            assert!(p.evaluate(covered).is_ok(), "x={covered} lies in a covered block");
            let gap = s * rng.random_range(1.5001..1.9999);
            assert!(p.evaluate(gap).is_err(), "x={gap} lies in a gap block");
        }
    }
}

// ---------------------------------------------------------------------------
// parity laws

#[test]
fn parity_symmetry_laws() {
    let even = ParityProblem::new(
        Parity::Even,
        ParityDomain::Symmetric(2.0),
        uniform_data("[0,2)", "x^2+sin(x)"),
    )
    .unwrap();
    even.validate_rep_set().unwrap();
    let odd = ParityProblem::new(
        Parity::Odd,
        ParityDomain::Symmetric(2.0),
        uniform_data("(0,2)", "x^3+x"),
    )
    .unwrap();
    odd.validate_rep_set().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000b);
    for _ in 0..1_000 {
        let x = rng.random_range(-1.999..1.999);
        let (e1, e2) = (even.extend(x).unwrap(), even.extend(-x).unwrap());
        assert_eq!(e1, e2, "even symmetry at {x}");
        let (o1, o2) = (odd.extend(x).unwrap(), odd.extend(-x).unwrap());
        assert!((o1 + o2).abs() <= 1e-9 * (1.0 + o1.abs()), "odd antisymmetry at {x}");
    }
    assert_eq!(odd.extend(0.0).unwrap(), 0.0);
}

// ---------------------------------------------------------------------------
// three-term engine laws

#[test]
fn three_term_residuals_and_linear_closure() {
    let p = ThreeTermProblem::new(Some((1.0, Expr::parse("x^2").unwrap())), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000c);
    let mut grid = Vec::with_capacity(1_000);
    for _ in 0..1_000 {
        grid.push(10f64.powf(rng.random_range(-2.0..1.7)));
    }
    let report = residual_sweep(|x| p.evaluate(x), &EquationSpec::ThreeTerm, &grid, 1e-9).unwrap();
    assert!(report.within_tol, "max residual {} at {}", report.max_abs_residual, report.argmax_point);

    // y = m*x solves the equation globally, so linear data must extend to it
    for m in [-2.0, 0.5, 3.0] {
        let f = Expr::parse(&format!("{m}*x")).unwrap();
        let p = ThreeTermProblem::new(Some((1.0, f)), None).unwrap();
        for _ in 0..200 {
            let x = rng.random_range(1e-6..100.0);
            let y = p.evaluate(x).unwrap();
            assert!(rel_close(y, m * x, 1e-9), "m={m}, x={x}, y={y}");
        }
    }
}

#[test]
fn memoized_evaluation_is_a_pure_cache() {
    // plain recursion mirroring the engine's arithmetic exactly, no memo
    fn plain(eps: f64, f: &Expr, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        if x >= eps && x < 3.0 * eps {
            f.eval(x).unwrap()
        } else if x >= 3.0 * eps {
            plain(eps, f, x / 3.0) + plain(eps, f, 2.0 * x / 3.0)
        } else {
            plain(eps, f, 3.0 * x) - plain(eps, f, 2.0 * x)
        }
    }
    let f = Expr::parse("sin(x)+1").unwrap();
    let p = ThreeTermProblem::new(Some((1.0, f.clone())), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000d);
    for _ in 0..100 {
        let x = 10f64.powf(rng.random_range(-2.0..1.5));
        let memoized = p.evaluate(x).unwrap();
        let reference = plain(1.0, &f, x);
        assert_eq!(memoized.to_bits(), reference.to_bits(), "x={x}");
    }
}

#[test]
fn recursion_depth_follows_the_interval_ladder() {
    // ladder member n is [3^n/2^(n-1) eps, 3^(n+1)/2^n eps); one forward
    // step per level, counted by a brute-force walker
    fn depth(eps: f64, x: f64) -> usize {
        if x >= eps && x < 3.0 * eps {
            0
        } else if x >= 3.0 * eps {
            1 + depth(eps, x / 3.0).max(depth(eps, 2.0 * x / 3.0))
        } else {
            1 + depth(eps, 3.0 * x).max(depth(eps, 2.0 * x))
        }
    }
    let eps = 1.0;
    for n in 1..=8i32 {
        let lo = 3f64.powi(n) / 2f64.powi(n - 1) * eps;
        let hi = 3f64.powi(n + 1) / 2f64.powi(n) * eps;
        for i in 0..5 {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / 5.0;
            assert_eq!(depth(eps, x), n as usize, "x={x} in ladder member {n}");
        }
    }
}

// ---------------------------------------------------------------------------
// penlp laws

#[test]
fn limit_points_are_fixed_points_of_the_evaluation_maps() {
    // exact rational check: for b = p/q, the limit point is p/(p-q) and the
    // clockwise map b*x - b fixes it
    #[derive(Clone, Copy, PartialEq, Debug)]
    struct Frac(i64, i64);
    impl Frac {
        fn norm(self) -> Frac {
            fn gcd(a: i64, b: i64) -> i64 {
                if b == 0 {
                    a.abs()
                } else {
                    gcd(b, a % b)
                }
            }
            let g = gcd(self.0, self.1);
            let s = if self.1 < 0 { -1 } else { 1 };
            Frac(s * self.0 / g, s * self.1 / g)
        }
        fn mul(self, o: Frac) -> Frac {
            Frac(self.0 * o.0, self.1 * o.1).norm()
        }
        fn sub(self, o: Frac) -> Frac {
            Frac(self.0 * o.1 - o.0 * self.1, self.1 * o.1).norm()
        }
    }
    for (p, q) in [(-3i64, 1i64), (-2, 1), (-1, 2), (1, 2), (2, 1), (3, 1)] {
        let b = Frac(p, q).norm();
        let limit = Frac(p, p - q).norm();
        let mapped = b.mul(limit).sub(b);
        assert_eq!(mapped, limit, "b = {p}/{q}");
        // and the floating-point limit_points agree with the fraction
        let eq = EquationSpec::ShiftScale { b: p as f64 / q as f64 };
        let fp = eq.limit_points()[0];
        assert!((fp - limit.0 as f64 / limit.1 as f64).abs() <= 1e-15 * fp.abs().max(1.0));
    }
}

#[test]
fn validated_problems_keep_iterates_away_from_the_limit_point() {
    let b = -0.5;
    let l = limit_point(b);
    let set = format!("[{},{})u[{},{})", l - 1.0, l - 0.5, l + 0.5, l + 1.0);
    let union = IntervalUnion::parse(&set).unwrap();
    validate_initial_set(&EquationSpec::ShiftScale { b }, &union).unwrap();
    let gap = 0.5; // distance from the limit point to the set
    let p = make_problem(b, InitialData::uniform(union, Expr::parse("x").unwrap()).unwrap())
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000e);
    let mut checked = 0;
    while checked < 100 {
        let x = l + rng.random_range(-20.0..20.0);
        if (x - l).abs() <= gap / 2.0 {
            continue;
        }
        let t = p.trace(x).unwrap();
        for point in &t.points {
            assert!((point - l).abs() > gap / 2.0, "iterate {point} inside the guard band");
        }
        checked += 1;
    }
}

#[test]
fn classification_is_scale_equivariant() {
    let variant = |c: &Classification| match c {
        Classification::WellPosed { .. } => 0,
        Classification::Overdetermined { .. } => 1,
        Classification::Underdetermined { .. } => 2,
        Classification::PenlpViolation { .. } => 3,
    };
    for eq in [EquationSpec::PureScale { b: 2.0 }, EquationSpec::ThreeTerm] {
        for (a, c) in [(1.0, 2.0), (1.0, 3.0), (1.0, 1.5), (1.0, 4.0)] {
            let base = classify(&eq, Interval::closed_open(a, c).unwrap()).unwrap();
            for lambda in [0.1, 7.0] {
                let scaled =
                    classify(&eq, Interval::closed_open(lambda * a, lambda * c).unwrap()).unwrap();
                assert_eq!(variant(&base), variant(&scaled), "lambda={lambda}");
            }
        }
    }
}

#[test]
fn linear_witnesses_stay_consistent_to_depth_ten() {
    let f = Expr::parse("2*x").unwrap();
    let depths: Vec<u32> = (1..=10).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000f);
    for _ in 0..50 {
        let x = rng.random_range(0.0001..10.0);
        let report =
            constraint_witness(&EquationSpec::ThreeTerm, &f, x, &depths, 1e-9).unwrap();
        assert_eq!(report.verdict, WitnessVerdict::Consistent, "x={x}");
    }
}
