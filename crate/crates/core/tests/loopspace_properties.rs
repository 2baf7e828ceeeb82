//! Currents, brackets and decompositions against hand expansions and the
//! bracket identities on seeded random sections.

use cdloop::cd::Sampler;
use cdloop::expr::{Coeff, Factor, FieldKind, GradedExpr, Parity, Patch, TestFn};
use cdloop::loopspace::*;
use cdloop::tensor::*;
use proptest::prelude::*;

const N: u8 = 3;

fn patch() -> Patch {
    Patch::new(N).unwrap()
}

fn eps(id: u8, order: u8) -> GradedExpr {
    GradedExpr::test(TestFn::new(id, 0, order, Parity::Even))
}

fn jet(f: FieldKind, mu: u8, order: u8) -> GradedExpr {
    GradedExpr::jet(f, mu, order)
}

fn table() -> CanonicalBrackets {
    CanonicalBrackets::calibrated().unwrap()
}

/// The frozen table, or for bosonic currents one reproducing the bosonic identities.
fn table_for(family: Family) -> CanonicalBrackets {
    let cal = CanonicalBrackets::calibration().unwrap();
    if family == Family::BosonicAs {
        cal.bosonic[0]
    } else {
        cal.table
    }
}

fn current(data: CurrentData, id: u8, mode: TestMode) -> LocalCurrent {
    let parity = data.test_parity();
    build_current(data, id, parity, mode).unwrap()
}

fn bracket(a: &CurrentData, b: &CurrentData, mode: TestMode) -> GradedExpr {
    poisson_bracket(&table_for(a.family()), &current(a.clone(), 1, mode), &current(b.clone(), 2, mode)).unwrap()
}

fn decomposed(a: &CurrentData, b: &CurrentData) -> Decomposition {
    decompose(&patch(), &bracket(a, b, TestMode::Bosonic), TestMode::Bosonic).unwrap()
}

fn vomega(s: &mut Sampler) -> VOmega {
    VOmega::new(s.vector(), s.form(1)).unwrap()
}

/// Terms free of `λ` and `ρ`.
fn drop_fermions(e: &GradedExpr) -> GradedExpr {
    let mut acc = GradedExpr::zero();
    for (m, c) in e.terms() {
        let fermionic = m
            .factors()
            .iter()
            .any(|f| matches!(f, Factor::Jet(j) if matches!(j.field, FieldKind::Lambda | FieldKind::Rho)));
        if !fermionic {
            acc += &GradedExpr::from_monomial(m.clone(), *c);
        }
    }
    acc
}

/// Equality of smeared densities up to total derivatives.
fn same(pt: &Patch, a: &GradedExpr, b: &GradedExpr) -> bool {
    canonical_form(pt, a).unwrap() == canonical_form(pt, b).unwrap()
}

fn samples(seed: u64, count: usize, mut f: impl FnMut(&mut Sampler)) {
    let mut s = Sampler::new(seed, 50, N);
    for k in 0..count {
        s.begin(k % 10 == 9);
        f(&mut s);
    }
}

#[test]
fn bosonic_density() {
    let a = VOmega::new(VectorField::formal(N, "v"), PForm::formal(N, 1, "w")).unwrap();
    let j = current(CurrentData::BosonicAs(a.clone()), 1, TestMode::Bosonic);
    let mut want = GradedExpr::zero();
    for mu in 1..=N {
        want += &(a.v.get(mu) * &jet(FieldKind::P, mu, 0));
        want += &(a.omega.get(&[mu]) * jet(FieldKind::X, mu, 1));
    }
    assert_eq!(j.density, eps(1, 0) * want);
    assert_eq!(j.parity(), Parity::Even);
}

#[test]
fn susy_density_truncates_to_bosonic() {
    samples(1, 20, |s| {
        let a = vomega(s);
        let susy = current(CurrentData::SusyAs(a.clone()), 1, TestMode::Bosonic);
        let bos = current(CurrentData::BosonicAs(a), 1, TestMode::Bosonic);
        // S = ρ + iθp and DΦ = λ + iθ∂X put one i on every bosonic term
        assert_eq!(drop_fermions(&susy.density), bos.density.scale(Coeff::i()));
    });
}

#[test]
fn sym_density_hand_expansion() {
    // γ = r = 0, flat Γ: ∫dθ ε v^μ(Φ)S_μ = ε(λ^ν∂_νv^μ ρ_μ + i v^μp_μ)
    let pt = patch();
    let v = VectorField::formal(N, "v");
    let data = CurrentData::SymTensor {
        section: VGammaR::new(v.clone(), SymTensor2::zero(N), PForm::zero(N, 1)).unwrap(),
        connection: Connection::flat(N),
    };
    let j = current(data, 1, TestMode::Bosonic);
    let mut want = GradedExpr::zero();
    for mu in 1..=N {
        want += &(v.get(mu) * &jet(FieldKind::P, mu, 0)).scale(Coeff::i());
        for nu in 1..=N {
            want += &(jet(FieldKind::Lambda, nu, 0) * pt.partial(v.get(mu), nu) * jet(FieldKind::Rho, mu, 0));
        }
    }
    assert_eq!(j.density, eps(1, 0) * want);
}

#[test]
fn parity_and_degree_errors() {
    let a = VOmega::new(VectorField::coordinate(N, 1), PForm::zero(N, 1)).unwrap();
    assert!(matches!(
        build_current(CurrentData::BosonicAs(a), 1, Parity::Odd, TestMode::Bosonic),
        Err(LoopError::Parity { .. })
    ));
    let v = Multivector::formal(N, 2, "v");
    assert!(build_current(CurrentData::Multivector(v.clone()), 1, Parity::Even, TestMode::Bosonic).is_err());
    assert!(build_current(CurrentData::Multivector(v), 1, Parity::Odd, TestMode::Bosonic).is_ok());
    let bad = VBetaGamma { v: VectorField::zero(N), beta: PForm::zero(N, 1), gamma: PForm::zero(N, 3) };
    assert!(matches!(
        build_current(CurrentData::VPFormPair(bad), 1, Parity::Even, TestMode::Bosonic),
        Err(LoopError::Degree(_))
    ));
}

#[test]
fn bracket_examples() {
    let pt = patch();
    // ∂₁ with dx¹: −∫ε₂∂ε₁, star 0, f₁ = −1, pairing −1
    let d1 = CurrentData::BosonicAs(VOmega::new(VectorField::coordinate(N, 1), PForm::zero(N, 1)).unwrap());
    let dx1 =
        CurrentData::BosonicAs(VOmega::new(VectorField::zero(N), PForm::basis(N, &[1], GradedExpr::one())).unwrap());
    let direct = -(eps(2, 0) * eps(1, 1));
    let got = bracket(&d1, &dx1, TestMode::Bosonic);
    assert!(same(&pt, &got, &direct), "{got}");
    let ab = decomposed(&d1, &dx1);
    assert_eq!(ab, Decomposition::Bosonic { star: GradedExpr::zero(), anomalies: vec![GradedExpr::int(-1)] });
    let ba = decomposed(&dx1, &d1);
    assert_eq!(extract_pairing(&pt, &ab, &ba).unwrap(), GradedExpr::int(-1));

    // decompose(−∫ε₂∂ε₁) directly
    let d = decompose(&pt, &direct, TestMode::Bosonic).unwrap();
    assert_eq!(d, Decomposition::Bosonic { star: GradedExpr::zero(), anomalies: vec![GradedExpr::int(-1)] });

    // two vector fields: −J(Lie bracket), no anomaly, pairing 0
    let vf = |name: &str| CurrentData::BosonicAs(VOmega::new(VectorField::formal(N, name), PForm::zero(N, 1)).unwrap());
    let (v, u) = (vf("v"), vf("u"));
    let (CurrentData::BosonicAs(va), CurrentData::BosonicAs(ua)) = (&v, &u) else { unreachable!() };
    let lie = CurrentData::BosonicAs(VOmega::new(lie_bracket(&va.v, &ua.v), PForm::zero(N, 1)).unwrap());
    let Decomposition::Bosonic { star, anomalies } = decomposed(&v, &u) else { panic!() };
    assert!(anomalies.is_empty());
    assert_eq!(star, -lie.bosonic_density().unwrap());
    assert!(extract_pairing(&pt, &decomposed(&v, &u), &decomposed(&u, &v)).unwrap().is_zero());
}

#[test]
fn generic_pairing_is_minus_the_section_pairing() {
    let pt = patch();
    let mk = |v: &str, w: &str| VOmega::new(VectorField::formal(N, v), PForm::formal(N, 1, w)).unwrap();
    let (a, b) = (mk("v", "w"), mk("u", "z"));
    let (da, db) = (CurrentData::BosonicAs(a.clone()), CurrentData::BosonicAs(b.clone()));
    let pairing = pairing_p(&a.as_vbeta(), &b.as_vbeta()).unwrap().as_function();
    let Decomposition::Bosonic { star, anomalies } = decomposed(&da, &db) else { panic!() };
    assert_eq!(anomalies, vec![-pairing.clone()]);
    let dorf = CurrentData::BosonicAs(dorfman(&a, &b)).bosonic_density().unwrap();
    assert_eq!(star, -dorf);
    assert_eq!(extract_pairing(&pt, &decomposed(&da, &db), &decomposed(&db, &da)).unwrap(), -pairing);
}

#[test]
fn super_decomposition_is_not_paired() {
    let pt = patch();
    let (a, b) = formal_pair(Family::SusyAs, &ReproduceConfig::default());
    let d = decompose(&pt, &bracket(&a, &b, TestMode::General), TestMode::General).unwrap();
    assert!(matches!(d, Decomposition::Super { .. }));
    assert!(extract_pairing(&pt, &d, &d).is_err());
}

#[test]
fn graded_antisymmetry() {
    let pt = patch();
    samples(2, 20, |s| {
        let families = [
            CurrentData::BosonicAs(vomega(s)),
            CurrentData::SusyAs(vomega(s)),
            CurrentData::Multivector(s.multivector(2)),
            CurrentData::VPForm(VBeta { v: s.vector(), beta: s.form(2) }),
        ];
        for mode in [TestMode::Bosonic, TestMode::General] {
            for a in &families[1..] {
                for b in &families[1..] {
                    let f = current(a.clone(), 1, mode);
                    let g = current(b.clone(), 2, mode);
                    let fg = poisson_bracket(&table(), &f, &g).unwrap();
                    let gf = poisson_bracket(&table(), &g, &f).unwrap();
                    let sign = Coeff::sign(f.parity().is_odd() && g.parity().is_odd());
                    assert!(same(&pt, &fg, &gf.scale(-sign)), "{a:?} {b:?}");
                }
            }
        }
        let f = current(families[0].clone(), 1, TestMode::Bosonic);
        let g = current(CurrentData::BosonicAs(vomega(s)), 2, TestMode::Bosonic);
        let sum = poisson_bracket(&table(), &f, &g).unwrap() + poisson_bracket(&table(), &g, &f).unwrap();
        assert!(same(&pt, &sum, &GradedExpr::zero()));
    });
}

#[test]
fn jacobi_identity() {
    let pt = patch();
    let tb = table();
    samples(3, 12, |s| {
        for mode in [TestMode::Bosonic, TestMode::General] {
            let fs: Vec<GradedExpr> = (1..=3u8)
                .map(|id| {
                    let data = if id == 2 {
                        CurrentData::VPForm(VBeta { v: s.vector(), beta: s.form(1) })
                    } else {
                        CurrentData::SusyAs(vomega(s))
                    };
                    current(data, id, mode).density
                })
                .collect();
            let br = |x: &GradedExpr, y: &GradedExpr| poisson_bracket_densities(&pt, &tb, x, y);
            let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
            // all three functionals are even
            let lhs = br(f, &br(g, h));
            let rhs = br(&br(f, g), h) + br(g, &br(f, h));
            assert!(same(&pt, &lhs, &rhs));
        }
    });
}

#[test]
fn reconstruction_and_symmetrization() {
    let pt = patch();
    samples(4, 20, |s| {
        let pairs = [
            (CurrentData::BosonicAs(vomega(s)), CurrentData::BosonicAs(vomega(s))),
            (CurrentData::SusyAs(vomega(s)), CurrentData::SusyAs(vomega(s))),
            (
                CurrentData::VPForm(VBeta { v: s.vector(), beta: s.form(2) }),
                CurrentData::VPForm(VBeta { v: s.vector(), beta: s.form(2) }),
            ),
            (
                CurrentData::VPFormPair(VBetaGamma::new(s.vector(), s.form(1), s.form(2)).unwrap()),
                CurrentData::VPFormPair(VBetaGamma::new(s.vector(), s.form(1), s.form(2)).unwrap()),
            ),
        ];
        for (a, b) in &pairs {
            for mode in [TestMode::Bosonic, TestMode::General] {
                if mode == TestMode::General && a.family() == Family::BosonicAs {
                    continue;
                }
                let br = bracket(a, b, mode);
                let d = decompose(&pt, &br, mode).unwrap();
                let back = d.reconstruct(&pt, Parity::Even, Parity::Even);
                assert_eq!(canonical_form(&pt, &back).unwrap(), canonical_form(&pt, &br).unwrap());
            }
            let (ab, ba) = (decomposed(a, b), decomposed(b, a));
            let (Decomposition::Bosonic { star: s1, .. }, Decomposition::Bosonic { star: s2, .. }) = (&ab, &ba) else {
                panic!()
            };
            let pairing = extract_pairing(&pt, &ab, &ba).unwrap();
            assert_eq!(s1 + s2, pt.d_sigma(&pairing), "{a:?}");
        }
    });
}

#[test]
fn susy_bracket_truncates_to_bosonic() {
    samples(5, 20, |s| {
        let (a, b) = (vomega(s), vomega(s));
        let susy = bracket(&CurrentData::SusyAs(a.clone()), &CurrentData::SusyAs(b.clone()), TestMode::Bosonic);
        let bos = bracket(&CurrentData::BosonicAs(a), &CurrentData::BosonicAs(b), TestMode::Bosonic);
        // i² from the two currents, −1 from the opposite {X,p} of the two tables
        assert_eq!(drop_fermions(&susy), bos);
    });
}

#[test]
fn reproduce_degenerations() {
    let p1 = ReproduceConfig::default();
    let r44 = reproduce("4.4", &p1).unwrap();
    assert!(r44.passed());
    let r47 = reproduce("4.7", &p1).unwrap();
    assert!(r47.notes.iter().any(|n| n.contains("term by term")));
    assert!(matches!(reproduce("9.9", &p1), Err(LoopError::UnknownTarget(_))));
    let formal = ReproduceConfig { connection: ConnectionMode::Formal, ..p1 };
    assert!(reproduce("4.20", &formal).unwrap().passed());
}

#[test]
fn integrand_examples() {
    let alg = IntegrandAlgebra::bosonic(N).unwrap();
    let pt = *alg.patch();
    let mk = |v: &str, w: &str| {
        CurrentData::BosonicAs(VOmega::new(VectorField::formal(N, v), PForm::formal(N, 1, w)).unwrap())
    };
    let corpus: Vec<GradedExpr> =
        [mk("v", "w"), mk("u", "z"), mk("a", "b")].iter().map(|d| d.bosonic_density().unwrap()).collect();
    let scalars = vec![GradedExpr::symbol("f", &[], &[], cdloop::expr::Symmetry::None, Parity::Even)];
    let report = check_integrand_cd(&alg, &corpus, &scalars).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.checks.len(), 5);

    // (∂A)*B = 0 and ⟨∂A, ∂B⟩ = 0
    let (a, b) = (&corpus[0], &corpus[1]);
    let (da, db) = (pt.d_sigma(a), pt.d_sigma(b));
    assert!(alg.star(&da, b).unwrap().is_zero());
    assert!(alg.pairing(&da, &db).unwrap().is_zero());
    let mut with_exact = corpus.clone();
    with_exact.push(da);
    assert!(check_integrand_cd(&alg, &with_exact, &scalars).unwrap().passed());
}

fn arb_data(seed: u64, pick: usize) -> CurrentData {
    let mut s = Sampler::new(seed, 60, N);
    s.begin(seed.is_multiple_of(4));
    match pick {
        0 => CurrentData::BosonicAs(vomega(&mut s)),
        1 => CurrentData::SusyAs(vomega(&mut s)),
        2 => CurrentData::Multivector(s.multivector(1 + seed as usize % 3)),
        3 => CurrentData::VPForm(VBeta { v: s.vector(), beta: s.form(1 + seed as usize % 3) }),
        4 => CurrentData::VPFormPair(VBetaGamma::new(s.vector(), s.form(1), s.form(2)).unwrap()),
        _ => CurrentData::SymTensor {
            section: VGammaR::new(s.vector(), s.sym(), s.form(1)).unwrap(),
            connection: if seed.is_multiple_of(2) { Connection::flat(N) } else { Connection::formal(N, "G") },
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn spec_files_round_trip(seed in any::<u64>(), pick in 0usize..6) {
        let data = arb_data(seed, pick);
        let text = current_spec_to_toml(&data).unwrap();
        let back = parse_current_spec(&text, N, ConnectionMode::Flat).unwrap();
        prop_assert_eq!(back.data, data);
    }
}
