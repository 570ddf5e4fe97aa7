//! Randomized invariants of every module.

mod common;

use std::cmp::Ordering;

use num::{Integer, One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use tropica::krull::{contains_bends, coordinate_dimension};
use tropica::linalg;
use tropica::poly::{Mode, Monomial, Pair, Polynomial, Term};
use tropica::polyhedra::{HalfSpace, Polyhedron, Relation};
use tropica::prime::{
    check_admissible, compare_terms, geometric_prime_of_point, member_ip, pair_in_prime, variety_of_prime,
    AdmissibleMatrix,
};
use tropica::sampling::{self, TrialRng};
use tropica::scalar::{int, ratio, Rational, TropScalar};
use tropica::text::{parse_polynomial_n, parse_polynomials};
use tropica::trace::{prime_generator_trace, verify_trace};
use tropica::variety::{affine_prevariety, hypersurface, prevariety};

fn scalar() -> impl Strategy<Value = TropScalar> {
    prop_oneof![
        1 => Just(TropScalar::bottom()),
        6 => (-20i64..=20, 1i64..=4).prop_map(|(p, q)| TropScalar::finite(ratio(p, q))),
    ]
}

fn seeded() -> impl Strategy<Value = TrialRng> {
    any::<u64>().prop_map(sampling::rng)
}

fn nonzero_poly(rng: &mut TrialRng, n: usize, mode: Mode, terms: usize, exp: i64) -> Polynomial {
    loop {
        let f = sampling::polynomial(rng, n, mode, terms, exp);
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_term(rng: &mut TrialRng, n: usize) -> Term {
    Term::new(sampling::rational(rng, 4), sampling::monomial(rng, n, -2, 2))
}

fn random_matrix(rng: &mut TrialRng) -> AdmissibleMatrix {
    let n = rng.gen_range(1..=3);
    let rank = rng.gen_range(1..=n + 1);
    sampling::admissible(rng, n, rank, Mode::Laurent)
}

fn random_pair(rng: &mut TrialRng, n: usize) -> Pair {
    Pair::new(nonzero_poly(rng, n, Mode::Laurent, 3, 2), nonzero_poly(rng, n, Mode::Laurent, 3, 2)).unwrap()
}

// semiring-poly

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn semifield_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&a), a.clone());
        prop_assert_eq!(a.add(&TropScalar::bottom()), a.clone());
        prop_assert_eq!(a.mul(&TropScalar::unit()), a.clone());
        match a.inv() {
            Some(i) => prop_assert_eq!(a.mul(&i), TropScalar::unit()),
            None => prop_assert!(a.is_bottom()),
        }
    }

    #[test]
    fn symmetric_identity_with_coefficients(ca in -20i64..=20, cb in -20i64..=20, cc in -20i64..=20) {
        let n = 3;
        let v = |i: usize, c: i64| Polynomial::from_term(n, Mode::Laurent, Term::new(int(c), Monomial::var(n, i))).unwrap();
        let (a, b, c) = (v(0, ca), v(1, cb), v(2, cc));
        let lhs = a.add(&b).unwrap().add(&c).unwrap()
            .mul(&a.mul(&b).unwrap().add(&b.mul(&c).unwrap()).unwrap().add(&a.mul(&c).unwrap()).unwrap()).unwrap();
        let rhs = a.add(&b).unwrap().mul(&a.add(&c).unwrap()).unwrap().mul(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisted_product_laws(mut rng in seeded()) {
        let n = rng.gen_range(1..=2);
        let (a, b, c) = (random_pair(&mut rng, n), random_pair(&mut rng, n), random_pair(&mut rng, n));
        let left = a.twisted_mul(&b).unwrap().twisted_mul(&c).unwrap();
        let right = a.twisted_mul(&b.twisted_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.twisted_pow(0).unwrap(), Pair::identity(n, Mode::Laurent));
        let d = Pair::diagonal(a.left.clone());
        prop_assert!(d.twisted_mul(&b).unwrap().is_diagonal());
    }

    #[test]
    fn evaluation_is_a_morphism(mut rng in seeded()) {
        let n = rng.gen_range(1..=3);
        let f = sampling::polynomial(&mut rng, n, Mode::Laurent, 4, 2);
        let g = sampling::polynomial(&mut rng, n, Mode::Laurent, 4, 2);
        let p = sampling::point(&mut rng, n, 4);
        let (fp, gp) = (f.evaluate(&p).unwrap(), g.evaluate(&p).unwrap());
        prop_assert_eq!(f.add(&g).unwrap().evaluate(&p).unwrap(), fp.add(&gp));
        prop_assert_eq!(f.mul(&g).unwrap().evaluate(&p).unwrap(), fp.mul(&gp));
    }

    #[test]
    fn scalar_shift_preserves_vanishing(mut rng in seeded(), c in -10i64..=10) {
        let n = rng.gen_range(1..=3);
        let f = sampling::polynomial(&mut rng, n, Mode::Laurent, 4, 2);
        let p = sampling::point(&mut rng, n, 3);
        prop_assert_eq!(f.vanishes_at(&p).unwrap(), f.shift(&int(c)).vanishes_at(&p).unwrap());
    }

    #[test]
    fn print_parse_round_trip(mut rng in seeded()) {
        let n = rng.gen_range(1..=4);
        let mode = if rng.gen_bool(0.5) { Mode::Laurent } else { Mode::Poly };
        let f = sampling::polynomial(&mut rng, n, mode, 5, 3);
        let back = parse_polynomial_n(&f.to_string(), n, mode).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn print_parse_round_trip_500() {
    let mut rng = sampling::rng(7);
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let f = sampling::polynomial(&mut rng, n, Mode::Laurent, 6, 3);
        assert_eq!(parse_polynomial_n(&f.to_string(), n, Mode::Laurent).unwrap(), f, "{f}");
    }
}

// prime-congruence

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn term_order_is_total_and_transitive(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        let n = u.arity();
        let (a, b, c) = (random_term(&mut rng, n), random_term(&mut rng, n), random_term(&mut rng, n));
        let ab = compare_terms(&u, &a, &b).unwrap();
        prop_assert_eq!(compare_terms(&u, &b, &a).unwrap(), ab.reverse());
        let bc = compare_terms(&u, &b, &c).unwrap();
        if ab != Ordering::Less && bc != Ordering::Less {
            prop_assert_ne!(compare_terms(&u, &a, &c).unwrap(), Ordering::Less);
        }
        if ab == Ordering::Equal && bc == Ordering::Equal {
            prop_assert_eq!(compare_terms(&u, &a, &c).unwrap(), Ordering::Equal);
        }
    }

    #[test]
    fn term_order_is_cancellative(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        let n = u.arity();
        let (a, b, s) = (random_term(&mut rng, n), random_term(&mut rng, n), random_term(&mut rng, n));
        prop_assert_eq!(compare_terms(&u, &a.mul(&s), &b.mul(&s)).unwrap(), compare_terms(&u, &a, &b).unwrap());
    }

    #[test]
    fn prime_law(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        let n = u.arity();
        let (a, b) = (random_pair(&mut rng, n), random_pair(&mut rng, n));
        let t = a.twisted_mul(&b).unwrap();
        if pair_in_prime(&u, &t.left, &t.right).unwrap() {
            prop_assert!(pair_in_prime(&u, &a.left, &a.right).unwrap() || pair_in_prime(&u, &b.left, &b.right).unwrap());
        }
    }

    #[test]
    fn membership_is_an_ideal(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        let n = u.arity();
        let f = sampling::polynomial(&mut rng, n, Mode::Laurent, 4, 2);
        let g = sampling::polynomial(&mut rng, n, Mode::Laurent, 4, 2);
        let h = sampling::polynomial(&mut rng, n, Mode::Laurent, 3, 2);
        if member_ip(&u, &f).unwrap() && member_ip(&u, &g).unwrap() {
            prop_assert!(member_ip(&u, &f.add(&g).unwrap()).unwrap());
        }
        if member_ip(&u, &f).unwrap() {
            prop_assert!(member_ip(&u, &f.mul(&h).unwrap()).unwrap());
        }
    }

    #[test]
    fn membership_is_prime(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        let n = u.arity();
        let f = nonzero_poly(&mut rng, n, Mode::Laurent, 3, 2);
        let g = nonzero_poly(&mut rng, n, Mode::Laurent, 3, 2);
        if member_ip(&u, &f.mul(&g).unwrap()).unwrap() {
            prop_assert!(member_ip(&u, &f).unwrap() || member_ip(&u, &g).unwrap());
        }
    }

    #[test]
    fn variety_of_prime_is_at_most_a_point(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        match variety_of_prime(&u) {
            Some(p) => {
                prop_assert_eq!(p.len(), u.arity());
                prop_assert!(!u.rows()[0][0].is_zero());
            }
            None => prop_assert!(u.rows()[0][0].is_zero()),
        }
    }

    #[test]
    fn membership_matches_bend_pairs(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        let f = sampling::polynomial(&mut rng, u.arity(), Mode::Laurent, 5, 2);
        let by_pairs = f.bend_pairs().iter().all(|p| pair_in_prime(&u, &p.left, &p.right).unwrap());
        prop_assert_eq!(member_ip(&u, &f).unwrap(), by_pairs);
    }
}

/// Every polynomial of degree at most 2 in two variables with coefficients in
/// `{bottom, -1, 0, 1}`, checked at a geometric prime: membership, vanishing
/// and pointwise equality of every bend pair agree.
#[test]
fn geometric_membership_is_vanishing_exhaustive() {
    let n = 2;
    let monos: Vec<Monomial> = (0..=2i64)
        .flat_map(|d| (0..=d).map(move |i| Monomial::new(vec![d - i, i])))
        .collect();
    let coefs = [None, Some(-1i64), Some(0), Some(1)];
    let p = vec![ratio(1, 2), int(-1)];
    let u = geometric_prime_of_point(&p);
    let mut idx = vec![0usize; monos.len()];
    let mut checked = 0;
    loop {
        let f = Polynomial::from_terms(
            n,
            Mode::Poly,
            monos.iter().zip(&idx).filter_map(|(m, &i)| coefs[i].map(|c| (m.clone(), TropScalar::from_int(c)))),
        )
        .unwrap();
        let f = f.with_mode(Mode::Laurent).unwrap();
        let member = member_ip(&u, &f).unwrap();
        let pointwise = f
            .bend_pairs()
            .iter()
            .all(|pr| pr.left.evaluate(&p).unwrap() == pr.right.evaluate(&p).unwrap());
        assert_eq!(member, pointwise, "{f}");
        if !f.is_zero() {
            assert_eq!(member, f.vanishes_at(&p).unwrap(), "{f}");
        }
        checked += 1;
        let mut k = 0;
        loop {
            if k == idx.len() {
                assert_eq!(checked, 4usize.pow(monos.len() as u32));
                return;
            }
            idx[k] += 1;
            if idx[k] < coefs.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

// congruence-trace

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn accepted_traces_are_sound_for_primes(mut rng in seeded(), which in 0usize..4) {
        let trace = common::load_trace(common::TRACE_FILES[which]);
        let n = trace.generators[0].arity();
        let u = if rng.gen_bool(0.5) {
            let rank = rng.gen_range(1..=n + 1);
            sampling::admissible(&mut rng, n, rank, Mode::Laurent)
        } else {
            let gens: Vec<Polynomial> = trace.generators.iter().map(|g| g.with_mode(Mode::Laurent).unwrap()).collect();
            let x = prevariety(&gens).unwrap();
            let cell = &x.cells()[rng.gen_range(0..x.cells().len())];
            geometric_prime_of_point(&cell.interior)
        };
        let gens: Vec<Polynomial> = trace.generators.iter().map(|g| g.with_mode(Mode::Laurent).unwrap()).collect();
        if contains_bends(&u, &gens).unwrap() {
            let goal = &trace.goal;
            let (l, r) = (goal.left.with_mode(Mode::Laurent).unwrap(), goal.right.with_mode(Mode::Laurent).unwrap());
            prop_assert!(pair_in_prime(&u, &l, &r).unwrap());
        }
    }
}

/// The trace schema for a pair `(m1 + m2, m1)` of a non-minimal prime,
/// built from two distinct terms the prime identifies.
#[test]
fn prime_generator_traces_verify() {
    let mut rng = sampling::rng(5);
    let mut verified = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=3);
        let rank = rng.gen_range(1..=n);
        let u = sampling::admissible(&mut rng, n, rank, Mode::Laurent);
        // a kernel vector of U with non-zero monomial part
        let kernel = linalg::nullspace(u.rows(), n + 1);
        let Some(k) = kernel.into_iter().find(|k| k[1..].iter().any(|c| !c.is_zero())) else { continue };
        let lcm = k.iter().fold(num::BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let k: Vec<Rational> = k.iter().map(|c| c * Rational::from_integer(lcm.clone())).collect();
        if k[1..].iter().any(|c| c.abs() > int(50)) {
            continue;
        }
        let exps: Vec<i64> = k[1..].iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        let a = Term::new(k[0].clone(), Monomial::new(exps));
        let b = Term::new(Rational::zero(), Monomial::one(n));
        assert_eq!(compare_terms(&u, &a, &b).unwrap(), Ordering::Equal);
        let (mut m1, mut m2) = (random_term(&mut rng, n), random_term(&mut rng, n));
        if compare_terms(&u, &m1, &m2).unwrap() == Ordering::Less {
            std::mem::swap(&mut m1, &mut m2);
        }
        let Ok(trace) = prime_generator_trace(n, &m1, &m2, &a, &b) else { continue };
        assert!(verify_trace(&trace).is_ok());
        assert!(trace.generators.iter().all(|g| member_ip(&u, g).unwrap()));
        assert!(pair_in_prime(&u, &trace.goal.left, &trace.goal.right).unwrap());
        verified += 1;
    }
    assert!(verified >= 100, "only {verified} traces built");
}

#[test]
fn shipped_traces_verify() {
    for name in common::TRACE_FILES {
        verify_trace(&common::load_trace(name)).unwrap_or_else(|r| panic!("{name}: {r}"));
    }
}

// polyhedra

fn random_polyhedron(rng: &mut TrialRng) -> Polyhedron {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(0..=6);
    let cs = (0..m)
        .map(|_| {
            let normal: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-2..=2))).collect();
            let rhs = int(rng.gen_range(-3..=3));
            if rng.gen_bool(0.2) { HalfSpace::eq(normal, rhs) } else { HalfSpace::le(normal, rhs) }
        })
        .collect();
    Polyhedron::new(n, cs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn relative_interior_is_strict(mut rng in seeded()) {
        let p = random_polyhedron(&mut rng);
        let Ok(x) = p.relative_interior_point() else {
            prop_assert!(p.is_empty());
            return Ok(());
        };
        prop_assert!(p.contains_point(&x));
        let implied = p.implicit_equalities();
        for (i, h) in p.constraints().iter().enumerate() {
            if h.relation == Relation::Le && !implied.contains(&i) {
                prop_assert!(linalg::dot(&h.normal, &x) < h.rhs);
            }
        }
    }

    #[test]
    fn elimination_preserves_emptiness(mut rng in seeded()) {
        let p = random_polyhedron(&mut rng);
        let i = rng.gen_range(0..p.ambient());
        prop_assert_eq!(p.fm_eliminate(i).unwrap().is_empty(), p.is_empty());
    }

    #[test]
    fn dimension_matches_affine_hull(mut rng in seeded()) {
        let p = random_polyhedron(&mut rng);
        match p.affine_hull() {
            Ok((_, basis)) => prop_assert_eq!(p.dimension(), basis.len() as i64),
            Err(_) => prop_assert_eq!(p.dimension(), -1),
        }
    }
}

// variety

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn hypersurface_is_sound(mut rng in seeded()) {
        let n = rng.gen_range(1..=3);
        let f = sampling::polynomial_with_terms(&mut rng, n, Mode::Laurent, 4, 2);
        let x = hypersurface(&f);
        for c in x.cells() {
            prop_assert!(f.vanishes_at(&c.interior).unwrap());
        }
        for _ in 0..200 {
            let p = sampling::point(&mut rng, n, 4);
            prop_assert_eq!(x.contains_point(&p), f.vanishes_at(&p).unwrap());
        }
    }

    #[test]
    fn prevariety_of_one_is_its_hypersurface(mut rng in seeded()) {
        let n = rng.gen_range(1..=3);
        let f = sampling::polynomial_with_terms(&mut rng, n, Mode::Laurent, 4, 2);
        prop_assert!(prevariety(std::slice::from_ref(&f)).unwrap().same_cells(&hypersurface(&f)));
    }

    #[test]
    fn prevariety_is_shift_invariant(mut rng in seeded(), c in -5i64..=5) {
        let n = rng.gen_range(1..=2);
        let gens: Vec<Polynomial> = (0..2).map(|_| sampling::polynomial_with_terms(&mut rng, n, Mode::Laurent, 3, 2)).collect();
        let shifted: Vec<Polynomial> = gens.iter().map(|g| g.shift(&int(c))).collect();
        prop_assert!(prevariety(&gens).unwrap().same_cells(&prevariety(&shifted).unwrap()));
    }

    #[test]
    fn prime_members_vanish_on_its_point(mut rng in seeded()) {
        let u = random_matrix(&mut rng);
        let Some(p) = variety_of_prime(&u) else { return Ok(()) };
        let n = u.arity();
        let mut gens = Vec::new();
        for _ in 0..200 {
            let f = nonzero_poly(&mut rng, n, Mode::Laurent, 4, 2);
            if member_ip(&u, &f).unwrap() {
                gens.push(f);
                if gens.len() == 2 {
                    break;
                }
            }
        }
        prop_assume!(!gens.is_empty());
        prop_assert!(prevariety(&gens).unwrap().contains_point(&p));
    }
}

// krull-dimension

#[test]
fn witnesses_of_random_hypersurfaces_are_valid() {
    let mut rng = sampling::rng(11);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=3);
        let f = sampling::polynomial_with_terms(&mut rng, n, Mode::Laurent, 4, 2);
        if f.len() < 2 {
            continue;
        }
        let r = coordinate_dimension(std::slice::from_ref(&f)).unwrap();
        assert_eq!(r.variety_dim, n as i64 - 1, "{f}");
        assert_eq!(r.coordinate_dim, n as i64, "{f}");
        assert!(check_admissible(r.witness.rows().to_vec(), n, Mode::Laurent).is_ok());
        assert_eq!(r.witness.rank() as i64, r.coordinate_dim);
        assert!(contains_bends(&r.witness, &[f]).unwrap());
        assert!(r.is_valid() && !r.prevariety_caveat);
        done += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minimal_primes_exclude_bends(mut rng in seeded()) {
        let n = rng.gen_range(1..=3);
        let u = sampling::admissible(&mut rng, n, n + 1, Mode::Laurent);
        let f = nonzero_poly(&mut rng, n, Mode::Laurent, 5, 2);
        prop_assume!(f.len() > 1);
        prop_assert!(!contains_bends(&u, &[f]).unwrap());
    }
}

// tropical-linear

#[test]
fn torus_part_of_affine_prevariety_is_the_prevariety() {
    let examples: [&[&str]; 5] =
        [&["x + 1", "y + 2"], &["x + y + 0"], &["x + y + z + 0"], &["x + y", "x + z"], &["x + y", "x + y^2"]];
    for texts in examples {
        let gens = parse_polynomials(texts, None, Mode::Poly).unwrap();
        let affine = affine_prevariety(&gens).unwrap();
        let torus = prevariety(&gens).unwrap();
        let covered = |a: &[&Polyhedron], b: &[&Polyhedron]| a.iter().all(|p| b.iter().any(|q| q.contains(p)));
        let a: Vec<&Polyhedron> = affine.torus_cells().map(|c| &c.polyhedron).collect();
        let t: Vec<&Polyhedron> = torus.cells().iter().map(|c| &c.polyhedron).collect();
        assert!(covered(&a, &t) && covered(&t, &a), "{texts:?}");
    }
}

#[test]
fn geometric_prime_contains_bends_iff_variety_point() {
    let gens = parse_polynomials(&["x + y + 0"], None, Mode::Laurent).unwrap();
    assert!(contains_bends(&geometric_prime_of_point(&[int(0), int(-3)]), &gens).unwrap());
    assert!(!contains_bends(&geometric_prime_of_point(&[int(1), int(-3)]), &gens).unwrap());
}
