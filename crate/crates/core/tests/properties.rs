use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use walkguess::arith::{
    format_rational, parse_rational, ratio, Catalytic, CatalyticPoly, ExactMatrix, Rational, SolveStrategy,
    TruncatedSeries, UniPoly, Var,
};
use walkguess::guess::{AlgebraicRelation, DifferentialRelation, PolynomialFormula, Recurrence, Relation};
use walkguess::report::{format_relation, parse_relation};
use walkguess::walk::StepSet;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn series(len: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(rational(), len).prop_map(|v| TruncatedSeries::from_rationals(&v).unwrap())
}

fn bivariate() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(prop::collection::vec(((0u32..4, 0u32..3), -9i64..9), 0..5), 1..6).prop_map(|cs| {
        let coeffs = cs
            .into_iter()
            .map(|terms| CatalyticPoly::from_terms(2, terms.into_iter().map(|((i, j), c)| ([i, j], ratio(c, 1)))))
            .collect();
        TruncatedSeries::new(2, coeffs).unwrap()
    })
}

fn int_poly(var: Var, max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..6, 1..=max_deg + 1).prop_map(move |c| UniPoly::from_ints(var, &c))
}

fn family(var: Var) -> impl Strategy<Value = Vec<UniPoly>> {
    prop::collection::vec(int_poly(var, 3), 2..5)
        .prop_filter("nonzero leading", |f| !f.last().unwrap().is_zero())
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![
        int_poly(Var::N, 4)
            .prop_filter("nonzero", |p| !p.is_zero())
            .prop_map(|p| Relation::Polynomial(PolynomialFormula::new(p))),
        family(Var::T).prop_filter_map("involves C", |f| AlgebraicRelation::new(&f).ok().map(Relation::Algebraic)),
        family(Var::N).prop_map(|f| Relation::Recurrence(Recurrence::new(&f).unwrap())),
        family(Var::T).prop_map(|f| Relation::Differential(DifferentialRelation::new(&f).unwrap())),
    ]
}

fn scale_family(f: &[UniPoly], by: &Rational) -> Vec<UniPoly> {
    f.iter().map(|p| p.scale(by)).collect()
}

proptest! {
    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        if !b.is_zero() {
            prop_assert_eq!(&a / &b * &b, a.clone());
        }
    }

    #[test]
    fn rational_text_round_trip(a in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
    }

    #[test]
    fn series_ring_laws(a in series(8), b in series(8), c in series(8)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn bivariate_mul_commutes(a in bivariate(), b in bivariate()) {
        let n = a.order().min(b.order());
        let (a, b) = (a.truncate(n).unwrap(), b.truncate(n).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn substitute_zero_is_slice_zero(s in bivariate()) {
        let zero = Rational::zero();
        for var in [Catalytic::X, Catalytic::Y] {
            prop_assert_eq!(s.substitute(var, &zero).unwrap(), s.coeff_slice(var, 0).unwrap());
        }
    }

    #[test]
    fn nullspace_routes_agree(rows in prop::collection::vec(prop::collection::vec(-20i64..20, 6), 1..6)) {
        let m = ExactMatrix::from_int_rows(&rows).unwrap();
        let ff = m.nullspace_with(SolveStrategy::FractionFree).unwrap();
        let md = m.nullspace_with(SolveStrategy::Modular).unwrap();
        prop_assert_eq!(&ff, &md);
        for v in &ff {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(ff.len() + rank_of(&rows), 6);
    }

    #[test]
    fn scaling_is_canonical(f in family(Var::N), s in nonzero_rational()) {
        let base = Recurrence::new(&f).unwrap();
        prop_assert_eq!(Recurrence::new(&scale_family(&f, &s)).unwrap(), base.clone());
        prop_assert_eq!(Recurrence::new(base.coeffs()).unwrap(), base);
    }

    #[test]
    fn algebraic_scaling_is_canonical(f in family(Var::T), s in nonzero_rational()) {
        let Ok(base) = AlgebraicRelation::new(&f) else { return Ok(()) };
        prop_assert_eq!(AlgebraicRelation::new(&scale_family(&f, &s)).unwrap(), base.clone());
        let content = base
            .coeffs()
            .iter()
            .flat_map(|p| p.coeffs().iter().map(Rational::to_integer))
            .fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, &x));
        prop_assert_eq!(content, BigInt::from(1));
    }

    #[test]
    fn grammar_round_trip(r in relation()) {
        let text = format_relation(&r);
        prop_assert_eq!(parse_relation(&text).unwrap(), r, "{}", text);
    }

    #[test]
    fn stepset_round_trip(steps in prop::collection::btree_set(-4i64..5, 1..5), w in prop::bool::ANY) {
        let steps: Vec<i64> = steps.into_iter().collect();
        let mut set = StepSet::one_dim(&steps).unwrap();
        if w {
            let k = steps.len() as i64;
            set = set.with_weights(vec![ratio(1, k); steps.len()]).unwrap();
        }
        prop_assert_eq!(StepSet::from_document(&set.to_document()).unwrap(), set);
    }
}

fn rank_of(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| ratio(x, 1)).collect()).collect();
    let cols = a[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                let pivot = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}
