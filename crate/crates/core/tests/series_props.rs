use floquet_forge::algebra::{Additive, Ring};
use floquet_forge::gauss::GaussQ;
use floquet_forge::riccati::{large_energy_densities, lame_potential, mathieu_potential};
use floquet_forge::dispersion::dispersion_from_periods;
use floquet_forge::series::TruncatedSeries;
use proptest::prelude::*;

type S = TruncatedSeries<GaussQ>;

fn gq() -> impl Strategy<Value = GaussQ> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| {
        GaussQ::frac(a, b).add(&GaussQ::i().mul(&GaussQ::frac(c, d)))
    })
}

fn series(lead: std::ops::Range<i64>, len: std::ops::Range<usize>) -> impl Strategy<Value = S> {
    (lead, prop::collection::vec(gq(), len)).prop_map(|(l, c)| S::new("t", l, c))
}

fn unit_series() -> impl Strategy<Value = S> {
    (gq().prop_filter("unit", |g| !g.is_zero()), prop::collection::vec(gq(), 0..6))
        .prop_map(|(a0, rest)| {
            let mut c = vec![a0];
            c.extend(rest);
            S::new("t", 0, c)
        })
}

fn agree(a: &S, b: &S) -> bool {
    a.order() == b.order()
        && (a.lead().min(b.lead())..a.order()).all(|e| {
            let x = if e < a.lead() { GaussQ::zero() } else { a.coeff(e).unwrap() };
            let y = if e < b.lead() { GaussQ::zero() } else { b.coeff(e).unwrap() };
            x == y
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_is_commutative(a in series(-2..3, 1..6), b in series(-2..3, 1..6)) {
        prop_assert!(agree(&a.mul(&b).unwrap(), &b.mul(&a).unwrap()));
    }

    #[test]
    fn mul_is_associative(
        a in series(-1..2, 1..5),
        b in series(-1..2, 1..5),
        c in series(-1..2, 1..5),
    ) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(agree(&l, &r));
    }

    #[test]
    fn product_order_is_pessimistic(a in series(0..3, 1..6), b in series(0..3, 1..6)) {
        let p = a.mul(&b).unwrap();
        let expect = (a.order() + b.lead()).min(b.order() + a.lead());
        prop_assert_eq!(p.order(), expect);
        prop_assert!(p.coeff(p.order()).is_err());
    }

    #[test]
    fn inverse_times_self_is_one(a in unit_series()) {
        let p = a.mul(&a.inv().unwrap()).unwrap();
        prop_assert!(agree(&p, &S::one("t", a.order())));
    }

    #[test]
    fn sqrt_squares_back(b in gq().prop_filter("unit", |g| !g.is_zero()), rest in prop::collection::vec(gq(), 0..6)) {
        let mut c = vec![b.mul(&b)];
        c.extend(rest);
        let x = S::new("t", 0, c);
        let r = x.sqrt(&b).unwrap();
        prop_assert_eq!(r.coeff(0).unwrap(), b);
        prop_assert!(agree(&r.mul(&r).unwrap(), &x));
    }

    #[test]
    fn revert_is_compositional_inverse(rest in prop::collection::vec(gq(), 1..6), neg in any::<bool>()) {
        let mut c = vec![GaussQ::int(if neg { -1 } else { 1 })];
        c.extend(rest);
        let a = S::new("t", 1, c);
        let b = a.revert("s").unwrap();
        let id = S::compose(&a, &b).unwrap();
        prop_assert_eq!(id.symbol(), "s");
        for e in 1..id.order() {
            let want = if e == 1 { GaussQ::one() } else { GaussQ::zero() };
            prop_assert_eq!(id.coeff(e).unwrap(), want);
        }
        prop_assert!(id.order() >= a.order());
    }

    #[test]
    fn truncation_commutes_with_mul(a in series(0..2, 3..8), b in series(0..2, 3..8), cut in 1i64..3) {
        let full = a.mul(&b).unwrap();
        let ta = a.truncate(a.order() - cut).unwrap();
        let tb = b.truncate(b.order() - cut).unwrap();
        let small = ta.mul(&tb).unwrap();
        prop_assert!(small.order() <= full.order());
        prop_assert!(agree(&full.truncate(small.order()).unwrap(), &small));
    }
}

#[test]
fn truncation_beyond_validity_is_an_error() {
    let a = S::new("t", 0, vec![GaussQ::one(), GaussQ::one()]);
    assert!(a.coeff(2).is_err());
    assert!(a.truncate(3).is_err());
}

#[test]
fn difference_of_squares() {
    let a = S::new("eps", 0, vec![GaussQ::one(), GaussQ::one(), GaussQ::zero()]);
    let b = S::new("eps", 0, vec![GaussQ::one(), GaussQ::int(-1), GaussQ::zero()]);
    let p = a.mul(&b).unwrap();
    assert!(agree(
        &p.with_symbol("t"),
        &S::new("t", 0, vec![GaussQ::one(), GaussQ::zero(), GaussQ::int(-1)])
    ));
}

#[test]
fn densities_and_dispersion_are_stable_under_higher_order() {
    let u = mathieu_potential().potential;
    let short = large_energy_densities(&u, 4).unwrap();
    let long = large_energy_densities(&u, 7).unwrap();
    assert_eq!(short[..], long[..4]);
    let ls = dispersion_from_periods(&short, 1).unwrap().lambda.series;
    let ll = dispersion_from_periods(&long, 1).unwrap().lambda.series;
    assert!(ll.order() > ls.order());
    for e in ls.lead()..ls.order() {
        assert_eq!(ls.coeff(e).unwrap(), ll.coeff(e).unwrap(), "order {e}");
    }

    let w = lame_potential().potential;
    let short = large_energy_densities(&w, 3).unwrap();
    let long = large_energy_densities(&w, 6).unwrap();
    assert_eq!(short[..], long[..3]);
}
