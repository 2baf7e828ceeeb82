use cdloop::expr::{Coeff, Factor, FieldKind, GradedExpr, JetVar, Parity, Patch, Symmetry, TestFn};
use proptest::prelude::*;

const N: u8 = 3;

fn field(k: u8) -> FieldKind {
    FieldKind::ALL[k as usize % 4]
}

fn symbol(name: &'static str, mu: u8, parity: Parity) -> Factor {
    match GradedExpr::symbol(name, &[mu], &[], Symmetry::None, parity).terms()[0].0.factors() {
        [f] => f.clone(),
        _ => unreachable!(),
    }
}

fn factor(with_tests: bool) -> impl Strategy<Value = Factor> {
    let jet = (0u8..4, 1..=N, 0u8..3).prop_map(|(f, i, o)| Factor::Jet(JetVar::new(field(f), i, o)));
    let sym = (0u8..3, 1..=N).prop_map(|(k, mu)| match k {
        0 => symbol("v", mu, Parity::Even),
        1 => symbol("a", mu, Parity::Even),
        _ => symbol("s", mu, Parity::Odd),
    });
    let test = (1u8..3, 0u8..2, 0u8..3).prop_map(|(id, th, o)| Factor::Test(TestFn::new(id, th, o, Parity::Even)));
    if with_tests {
        prop_oneof![4 => jet, 2 => sym, 1 => test].boxed()
    } else {
        prop_oneof![4 => jet, 2 => sym].boxed()
    }
}

fn coeff() -> impl Strategy<Value = Coeff> {
    (-3i64..=3, -2i64..=2, 1i64..=3).prop_map(|(a, b, d)| Coeff::ratio(a, d) + Coeff::ratio(b, d) * Coeff::i())
}

fn parity_of(fs: &[Factor]) -> Parity {
    Parity::from_bit(fs.iter().filter(|f| f.is_odd()).count() % 2 == 1)
}

/// Raw terms forced to the requested parity by appending `λ³` where needed.
fn raw_terms(parity: Parity, with_tests: bool) -> impl Strategy<Value = Vec<(Coeff, Vec<Factor>)>> {
    prop::collection::vec((coeff(), prop::collection::vec(factor(with_tests), 0..4)), 0..4).prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(c, mut fs)| {
                if parity_of(&fs) != parity {
                    fs.push(Factor::Jet(JetVar::new(FieldKind::Lambda, 3, 0)));
                }
                (c, fs)
            })
            .collect()
    })
}

fn expr(parity: Parity, with_tests: bool) -> impl Strategy<Value = GradedExpr> {
    raw_terms(parity, with_tests).prop_map(|t| GradedExpr::from_terms(t).unwrap())
}

fn any_expr(with_tests: bool) -> impl Strategy<Value = GradedExpr> {
    prop_oneof![expr(Parity::Even, with_tests), expr(Parity::Odd, with_tests)]
}

fn parity(e: &GradedExpr) -> Parity {
    e.parity().unwrap_or(Parity::Even)
}

/// Sign of reordering `fs` by `perm`, counting only odd-odd inversions.
fn koszul(fs: &[Factor], perm: &[usize]) -> bool {
    let mut negative = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && fs[perm[i]].is_odd() && fs[perm[j]].is_odd() {
                negative = !negative;
            }
        }
    }
    negative
}

fn raw_of(e: &GradedExpr) -> Vec<(Coeff, Vec<Factor>)> {
    e.terms().iter().map(|(m, c)| (*c, m.factors().to_vec())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalize_idempotent(e in any_expr(true)) {
        prop_assert_eq!(GradedExpr::from_terms(raw_of(&e)).unwrap(), e);
    }

    #[test]
    fn shuffled_terms_pick_up_koszul_signs(
        (c, fs, perm) in (coeff(), prop::collection::vec(factor(true), 0..6))
            .prop_flat_map(|(c, fs)| {
                let n = fs.len();
                (Just(c), Just(fs), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            })
    ) {
        let base = GradedExpr::from_terms(vec![(c, fs.clone())]).unwrap();
        let shuffled: Vec<Factor> = perm.iter().map(|&i| fs[i].clone()).collect();
        let moved = GradedExpr::from_terms(vec![(c, shuffled)]).unwrap();
        prop_assert_eq!(moved, base.scale(Coeff::sign(koszul(&fs, &perm))));
    }

    #[test]
    fn supercommutative(a in any_expr(true), b in any_expr(true)) {
        let sign = Coeff::sign(parity(&a).is_odd() && parity(&b).is_odd());
        prop_assert_eq!(a.mul(&b), b.mul(&a).scale(sign));
    }

    #[test]
    fn associative(a in any_expr(true), b in any_expr(true), c in any_expr(true)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn product_parity_adds(a in any_expr(true), b in any_expr(true)) {
        let ab = a.mul(&b);
        if !ab.is_zero() {
            let want = Parity::from_bit(parity(&a).is_odd() != parity(&b).is_odd());
            prop_assert_eq!(ab.parity().unwrap(), want);
        }
    }

    #[test]
    fn d_sigma_is_even_derivation(a in any_expr(true), b in any_expr(true)) {
        let p = Patch::new(N).unwrap();
        let lhs = p.d_sigma(&a.mul(&b));
        let rhs = p.d_sigma(&a).mul(&b) + a.mul(&p.d_sigma(&b));
        prop_assert_eq!(lhs, rhs);
        let da = p.d_sigma(&a);
        if !da.is_zero() {
            prop_assert_eq!(parity(&da), parity(&a));
        }
    }

    #[test]
    fn total_derivatives_are_exact(f in any_expr(false)) {
        let p = Patch::new(N).unwrap();
        let df = p.d_sigma(&f);
        prop_assert!(p.equal_mod_total_derivative(&df, &GradedExpr::zero()));
        for (field, index) in p.fields().collect::<Vec<_>>() {
            prop_assert!(p.euler_derivative(&df, field, index).unwrap().is_zero());
        }
    }
}

fn jet(f: FieldKind, i: u8, o: u8) -> GradedExpr {
    GradedExpr::jet(f, i, o)
}

#[test]
fn hand_picked_densities_are_not_exact() {
    use FieldKind::*;
    let p = Patch::new(N).unwrap();
    let v1 = GradedExpr::symbol("v", &[1], &[], Symmetry::None, Parity::Even);
    let a1 = GradedExpr::symbol("a", &[], &[1], Symmetry::None, Parity::Even);
    let e = GradedExpr::constant_symbol("e", Parity::Odd);
    let cases = [
        jet(X, 1, 0) * jet(P, 1, 0),
        jet(X, 1, 0),
        jet(P, 2, 0),
        jet(X, 1, 1) * jet(X, 1, 1),
        jet(X, 1, 0) * jet(X, 2, 1),
        v1 * jet(P, 1, 0),
        jet(Lambda, 1, 0) * jet(Rho, 1, 0),
        jet(Lambda, 1, 0) * jet(Lambda, 1, 1),
        a1 * jet(X, 2, 1),
        e * jet(Lambda, 2, 0) * jet(P, 2, 1),
    ];
    for f in &cases {
        assert!(!p.equal_mod_total_derivative(f, &GradedExpr::zero()), "{f}");
    }
    assert!(!p.equal_mod_total_derivative(&GradedExpr::int(1), &GradedExpr::zero()));
}

#[test]
fn thousand_seeded_total_derivatives() {
    use cdloop::cd::Sampler;
    let p = Patch::new(N).unwrap();
    let mut s = Sampler::new(11, 0, N);
    for k in 0..1000 {
        s.begin(k % 10 == 0);
        let f = s.density();
        assert!(p.equal_mod_total_derivative(&p.d_sigma(&f), &GradedExpr::zero()), "{f}");
    }
}
