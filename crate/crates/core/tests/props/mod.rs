//! Randomized invariants that need no catalog data. Each suite runs a fixed
//! number of cases from a deterministic generator.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rbsuper::exactmath::{parse_expr, FieldSpec, Monomial, PolyExpr, RatExpr, Scalar, Symbol};
use rbsuper::format::{parse_operator_file, render_algebra, render_operator, AlgebraFile};
use rbsuper::operators::{check_rb, rb_residual, LinearMap, OperatorFamily};
use rbsuper::structures::{validate, GradedBasis, Kind, StructureTable, SuperAlgebra};

pub const SUITES: [(&str, fn() -> Result<(), String>); 5] = [
    ("exactmath ring axioms", ring_axioms),
    ("grading invariants", grading_invariants),
    ("even-map block zeros", even_map_block_zeros),
    ("RB scaling invariance at weight 0", rb_scaling),
    ("parse/render round trip", round_trip),
];

const CASES: u32 = 64;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn gaussian() -> Arc<FieldSpec> {
    Arc::new(FieldSpec::gaussian())
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn symbols() -> Vec<Symbol> {
    ["a1", "a2", "a3"].iter().map(|s| Symbol::new(s)).collect()
}

/// Terms `(re, im, exponents)` over `a1, a2, a3` with Gaussian coefficients.
type Terms = Vec<(i64, i64, [u32; 3])>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((-4i64..=4, -2i64..=2, [0u32..3, 0u32..3, 0u32..3]), 0..5)
}

fn poly(t: &Terms) -> PolyExpr {
    let f = gaussian();
    let syms = symbols();
    let mut p = PolyExpr::zero();
    for (re, im, e) in t {
        let c = Scalar::from_coords(vec![q(*re), q(*im)], &f);
        let m = Monomial::from_pairs(syms.iter().cloned().zip(e.iter().cloned()).filter(|(_, k)| *k > 0).collect());
        p = &p + &PolyExpr::term(c, m);
    }
    p
}

fn ring_axioms() -> Result<(), String> {
    run((terms(), terms(), terms()), |(a, b, c)| {
        let (a, b, c) = (poly(&a), poly(&b), poly(&c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        let (ra, rb) = (RatExpr::from_poly(a.clone()), RatExpr::from_poly(b.clone()));
        prop_assert!((&ra - &ra).is_zero());
        if !a.is_zero() && !b.is_zero() {
            let x = ra.checked_div(&rb).unwrap();
            let y = rb.checked_div(&ra).unwrap();
            prop_assert!((&x * &y).is_one() || (&(&x * &y) - &RatExpr::one()).is_zero());
        }
        Ok(())
    })?;
    // a * (1/a) = 1 over both number fields, exhaustively on small coordinates
    for f in [FieldSpec::gaussian(), FieldSpec::sixth_roots()] {
        let f = Arc::new(f);
        for x in -2..=2 {
            for y in -2..=2 {
                let a = Scalar::from_coords(vec![q(x), q(y)], &f);
                if a.is_zero() {
                    continue;
                }
                let inv = a.inverse().map_err(|e| e.to_string())?;
                if !(&a * &inv).is_one() {
                    return Err(format!("{} * {} is not 1", a, inv));
                }
            }
        }
    }
    Ok(())
}

/// A graded table with small integer entries on grading-consistent slots.
fn graded_table(even: usize, odd: usize, seed: &[i64]) -> (GradedBasis, StructureTable) {
    let basis = GradedBasis::standard("e", even, odd);
    let n = even + odd;
    let mut t = StructureTable::zero(n);
    let mut it = seed.iter().cycle();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = *it.next().unwrap();
                if (basis.parity(i) + basis.parity(j) + basis.parity(k)) % 2 == 0 && v != 0 {
                    t.set(i, j, k, RatExpr::int(v));
                }
            }
        }
    }
    (basis, t)
}

fn table_seed() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=2, 1usize..=2, prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], 8..40))
}

fn grading_invariants() -> Result<(), String> {
    run((table_seed(), any::<prop::sample::Index>()), |((even, odd, seed), pick)| {
        let (basis, t) = graded_table(even, odd, &seed);
        let n = basis.dim();
        let alg = SuperAlgebra::new("g", Kind::PreLie, basis.clone(), vec![t.clone()]).unwrap();
        prop_assert!(validate(&alg).passed());
        let opp = t.graded_opposite(basis.parities());
        prop_assert_eq!(opp.graded_opposite(basis.parities()), t.clone());
        let alg_opp = SuperAlgebra::new("g", Kind::PreLie, basis.clone(), vec![opp]).unwrap();
        prop_assert!(validate(&alg_opp).passed());
        // one entry in a slot of the wrong parity is reported at that slot
        let wrong: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| (basis.parity(i) + basis.parity(j) + basis.parity(k)) % 2 == 1)
            .collect();
        let (i, j, k) = wrong[pick.index(wrong.len())];
        let mut bad = t;
        bad.set(i, j, k, RatExpr::int(1));
        let alg_bad = SuperAlgebra::new("g", Kind::PreLie, basis, vec![bad]).unwrap();
        let rep = validate(&alg_bad);
        prop_assert!(!rep.passed());
        prop_assert_eq!(rep.failures, 1);
        prop_assert_eq!(&rep.witnesses[0].indices, &vec![i + 1, j + 1, k + 1]);
        Ok(())
    })
}

/// An even map with small integer entries.
fn even_map(basis: &GradedBasis, seed: &[i64]) -> LinearMap {
    let mut m = LinearMap::zero(basis, basis);
    let mut it = seed.iter().cycle();
    for k in 0..basis.dim() {
        for i in 0..basis.dim() {
            let v = *it.next().unwrap();
            if basis.parity(k) == basis.parity(i) && v != 0 {
                m.set(k, i, RatExpr::int(v));
            }
        }
    }
    m
}

fn even_map_block_zeros() -> Result<(), String> {
    run((table_seed(), prop::collection::vec(-3i64..=3, 4..16), any::<prop::sample::Index>()), |((even, odd, seed), rs, pick)| {
        let (basis, t) = graded_table(even, odd, &seed);
        let alg = SuperAlgebra::new("g", Kind::PreLie, basis.clone(), vec![t]).unwrap();
        let r = even_map(&basis, &rs);
        prop_assert!(r.is_even());
        prop_assert!(r.parity_violations(0).is_empty());
        let n = basis.dim();
        let odd_cells: Vec<(usize, usize)> =
            (0..n).flat_map(|k| (0..n).map(move |i| (k, i))).filter(|&(k, i)| basis.parity(k) != basis.parity(i)).collect();
        let (k, i) = odd_cells[pick.index(odd_cells.len())];
        let mut bad = r;
        bad.set(k, i, RatExpr::var("a1"));
        prop_assert!(!bad.is_even());
        prop_assert_eq!(bad.parity_violations(0), vec![(k, i)]);
        prop_assert!(!check_rb(&alg, &bad, &Scalar::zero()).unwrap().passed());
        Ok(())
    })
}

fn rb_scaling() -> Result<(), String> {
    run((table_seed(), prop::collection::vec(-3i64..=3, 4..16), -5i64..=5), |((even, odd, seed), rs, c)| {
        let (basis, t) = graded_table(even, odd, &seed);
        let alg = SuperAlgebra::new("g", Kind::PreLie, basis.clone(), vec![t]).unwrap();
        let r = even_map(&basis, &rs);
        let cr = r.scale(&RatExpr::int(c));
        let c2 = RatExpr::int(c * c);
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                let a = rb_residual(&alg, 0, &r, &Scalar::zero(), i, j);
                let b = rb_residual(&alg, 0, &cr, &Scalar::zero(), i, j);
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((&(x * &c2) - y).is_zero());
                }
            }
        }
        if c != 0 {
            let before = check_rb(&alg, &r, &Scalar::zero()).unwrap().passed();
            prop_assert_eq!(before, check_rb(&alg, &cr, &Scalar::zero()).unwrap().passed());
        }
        Ok(())
    })?;
    // a passing operator stays passing under symbolic scaling: x*x = 1/2 y on
    // a 1|1 space with R = diag(a1, 2 a1)
    let basis = GradedBasis::standard("e", 1, 1);
    let mut t = StructureTable::zero(2);
    t.set(1, 1, 0, RatExpr::constant(Scalar::ratio(1, 2)));
    let alg = SuperAlgebra::new("g", Kind::PreLie, basis.clone(), vec![t]).map_err(|e| e.to_string())?;
    let mut r = LinearMap::zero(&basis, &basis);
    r.set(0, 0, RatExpr::var("a1"));
    r.set(1, 1, &RatExpr::int(2) * &RatExpr::var("a1"));
    for s in ["a2", "a2^2 + 1"] {
        let f = parse_expr(s, &symbols(), &gaussian()).map_err(|e| e.to_string())?;
        if !check_rb(&alg, &r.scale(&f), &Scalar::zero()).map_err(|e| e.to_string())?.passed() {
            return Err(format!("scaling by {} breaks a passing operator", s));
        }
    }
    Ok(())
}

fn ratexpr() -> impl Strategy<Value = (Terms, Terms)> {
    (terms(), terms().prop_filter("nonzero denominator", |t| !poly(t).is_zero()))
}

fn round_trip() -> Result<(), String> {
    run(ratexpr(), |(n, d)| {
        let e = RatExpr::new(poly(&n), poly(&d)).unwrap();
        let text = e.to_string();
        let back = parse_expr(&text, &symbols(), &gaussian()).map_err(|err| TestCaseError::fail(format!("{}: {}", text, err)))?;
        prop_assert!((&back - &e).is_zero(), "{} reparsed as {}", text, back);
        Ok(())
    })?;
    run((table_seed(), prop::collection::vec(-3i64..=3, 4..16)), |((even, odd, seed), rs)| {
        let (basis, t) = graded_table(even, odd, &seed);
        let alg = SuperAlgebra::new("g", Kind::PreLie, basis.clone(), vec![t]).unwrap();
        let file = AlgebraFile::parse(&render_algebra(&alg, None)).unwrap();
        prop_assert_eq!(&file.algebra.tables, &alg.tables);
        prop_assert_eq!(file.algebra.basis.names(), alg.basis.names());
        let fam = OperatorFamily::rota_baxter("R", &alg, even_map(&basis, &rs));
        let ops = parse_operator_file(&render_operator(&fam), &alg, None).unwrap();
        prop_assert_eq!(ops.len(), 1);
        prop_assert_eq!(ops[0].map.entries(), fam.map.entries());
        Ok(())
    })
}
