//! Tensor operations against component-level oracles, and the bracket identities
//! on seeded random sections.

use cdloop::cd::Sampler;
use cdloop::expr::{Coeff, GradedExpr, Patch};
use cdloop::tensor::*;

const N: u8 = 3;

fn x(mu: u8) -> GradedExpr {
    GradedExpr::coord(mu)
}

fn one() -> GradedExpr {
    GradedExpr::one()
}

fn patch(n: u8) -> Patch {
    Patch::new(n).unwrap()
}

/// Runs `f` on `count` samples, every tenth one formal.
fn samples(seed: u64, count: usize, n: u8, mut f: impl FnMut(&mut Sampler)) {
    let mut s = Sampler::new(seed, 99, n);
    for k in 0..count {
        s.begin(k % 10 == 9);
        f(&mut s);
    }
}

fn d_oracle(b: &PForm) -> PForm {
    let n = b.dim();
    let p = b.degree();
    let pt = patch(n);
    let mut out = PForm::zero(n, p + 1);
    if p + 1 > n as usize {
        return out;
    }
    for idx in combinations(n, p + 1) {
        let mut acc = GradedExpr::zero();
        for k in 0..idx.len() {
            let mut rest = idx.clone();
            let mu = rest.remove(k);
            acc += &pt.partial(&b.get(&rest), mu).scale(Coeff::sign(k % 2 == 1));
        }
        out.set(&idx, acc);
    }
    out
}

fn interior_oracle(v: &VectorField, b: &PForm) -> PForm {
    let n = b.dim();
    let mut out = PForm::zero(n, b.degree() - 1);
    for idx in combinations(n, b.degree() - 1) {
        let mut acc = GradedExpr::zero();
        for nu in 1..=n {
            let mut full = vec![nu];
            full.extend(&idx);
            acc += &(v.get(nu) * b.get(&full));
        }
        out.set(&idx, acc);
    }
    out
}

fn lie_oracle(v: &VectorField, u: &VectorField) -> VectorField {
    let pt = patch(v.dim());
    let mut out = VectorField::zero(v.dim());
    for mu in 1..=v.dim() {
        let mut acc = GradedExpr::zero();
        for nu in 1..=v.dim() {
            acc += &(v.get(nu) * pt.partial(u.get(mu), nu));
            acc -= &(u.get(nu) * pt.partial(v.get(mu), nu));
        }
        out.set(mu, acc);
    }
    out
}

fn permutations(k: usize) -> Vec<(bool, Vec<usize>)> {
    if k == 0 {
        return vec![(false, vec![])];
    }
    let mut out = Vec::new();
    for (neg, p) in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            // inserting at `pos` passes over len - pos entries
            out.push((neg ^ ((p.len() - pos) % 2 == 1), q));
        }
    }
    out
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Unit-weight antisymmetrization of
/// `p v^{μ₁…μ_{p−1}ρ}∂_ρu^{…} − (−1)^{(p+1)(q+1)} q u^{μ₁…μ_{q−1}ρ}∂_ρv^{…}`.
fn schouten_oracle(v: &Multivector, u: &Multivector) -> Multivector {
    let (n, p, q) = (v.dim(), v.degree(), u.degree());
    let r = p + q - 1;
    let pt = patch(n);
    let mut out = Multivector::zero(n, r);
    if r > n as usize {
        return out;
    }
    let raw = |idx: &[u8]| {
        let mut acc = GradedExpr::zero();
        for rho in 1..=n {
            let mut vi = idx[..p - 1].to_vec();
            vi.push(rho);
            acc += &(v.get(&vi) * pt.partial(&u.get(&idx[p - 1..]), rho)).scale(Coeff::int(p as i64));
            let mut ui = idx[..q - 1].to_vec();
            ui.push(rho);
            let sign = Coeff::sign(((p + 1) * (q + 1)) % 2 == 1);
            acc -= &(u.get(&ui) * pt.partial(&v.get(&idx[q - 1..]), rho)).scale(sign * Coeff::int(q as i64));
        }
        acc
    };
    for idx in combinations(n, r) {
        let mut acc = GradedExpr::zero();
        for (neg, perm) in permutations(r) {
            let permuted: Vec<u8> = perm.iter().map(|&i| idx[i]).collect();
            acc += &raw(&permuted).scale(Coeff::sign(neg));
        }
        out.set(&idx, acc.scale(Coeff::ratio(1, factorial(r))));
    }
    out
}

fn sym_lie_oracle(v: &VectorField, g: &SymTensor2) -> SymTensor2 {
    let n = v.dim();
    let pt = patch(n);
    let mut out = SymTensor2::zero(n);
    for mu in 1..=n {
        for nu in mu..=n {
            let mut acc = GradedExpr::zero();
            for rho in 1..=n {
                acc += &(v.get(rho) * pt.partial(g.get(mu, nu), rho));
                acc += &(pt.partial(v.get(rho), mu) * g.get(rho, nu));
                acc += &(pt.partial(v.get(rho), nu) * g.get(mu, rho));
            }
            out.set(mu, nu, acc);
        }
    }
    out
}

#[test]
fn exterior_d_matches_oracle_and_squares_to_zero() {
    // d(x² dx¹) = −dx¹∧dx²
    assert_eq!(exterior_d(&PForm::basis(N, &[1], x(2))).get(&[1, 2]), GradedExpr::int(-1));
    for n in [3, 4] {
        samples(1, 60, n, |s| {
            for p in 0..=n as usize {
                let b = s.form(p);
                let db = exterior_d(&b);
                assert_eq!(db, d_oracle(&b));
                assert!(exterior_d(&db).is_zero());
            }
        });
    }
    let f = PForm::formal(N, 0, "f");
    let df = exterior_d(&f);
    for mu in 1..=N {
        assert_eq!(df.get(&[mu]), patch(N).partial(&f.as_function(), mu));
    }
}

#[test]
fn interior_matches_oracle_and_is_nilpotent() {
    assert_eq!(
        interior(&VectorField::coordinate(N, 1), &PForm::basis(N, &[1, 2], one())).unwrap(),
        PForm::basis(N, &[2], one())
    );
    samples(2, 60, N, |s| {
        let v = s.vector();
        for p in 1..=N as usize {
            let b = s.form(p);
            let ib = interior(&v, &b).unwrap();
            assert_eq!(ib, interior_oracle(&v, &b));
            if p >= 2 {
                assert!(interior(&v, &ib).unwrap().is_zero());
            }
        }
    });
}

#[test]
fn lie_bracket_oracle_antisymmetry_jacobi() {
    let a = VectorField::zero(N).with(2, x(1));
    assert_eq!(lie_bracket(&a, &VectorField::coordinate(N, 1)), VectorField::zero(N).with(2, GradedExpr::int(-1)));
    samples(3, 60, N, |s| {
        let (u, v, w) = (s.vector(), s.vector(), s.vector());
        assert_eq!(lie_bracket(&u, &v), lie_oracle(&u, &v));
        assert!(lie_bracket(&u, &u).is_zero());
        assert_eq!(lie_bracket(&u, &v), lie_bracket(&v, &u).scaled(-Coeff::one()));
        let j = lie_bracket(&u, &lie_bracket(&v, &w))
            .plus(&lie_bracket(&v, &lie_bracket(&w, &u)))
            .plus(&lie_bracket(&w, &lie_bracket(&u, &v)));
        assert!(j.is_zero());
    });
}

#[test]
fn lie_derivative_cartan_and_sym() {
    assert_eq!(
        lie_derivative(&VectorField::coordinate(N, 1), &PForm::basis(N, &[2], x(1))),
        PForm::basis(N, &[2], one())
    );
    samples(4, 60, N, |s| {
        let v = s.vector();
        for p in 0..=N as usize {
            let b = s.form(p);
            let lb = lie_derivative(&v, &b);
            let mut cartan = interior(&v, &exterior_d(&b)).unwrap_or_else(|_| PForm::zero(N, p));
            if p > 0 {
                cartan = cartan.plus(&exterior_d(&interior(&v, &b).unwrap()));
            } else {
                cartan = PForm::function(N, apply_vector(&v, &b.as_function()));
            }
            assert_eq!(lb, cartan);
            assert_eq!(lie_derivative(&v, &exterior_d(&b)), exterior_d(&lb));
        }
        let g = s.sym();
        assert_eq!(lie_derivative_sym(&v, &g), sym_lie_oracle(&v, &g));
    });
}

#[test]
fn schouten_oracle_and_graded_antisymmetry() {
    let v = Multivector::zero(N, 2).with(&[1, 2], one());
    let u = Multivector::zero(N, 1).with(&[3], x(1));
    let expected = Multivector::zero(N, 2).with(&[2, 3], GradedExpr::int(-1));
    assert_eq!(schouten_oracle(&v, &u), expected);
    assert_eq!(schouten(&v, &u), expected);
    samples(5, 40, N, |s| {
        for (p, q) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3)] {
            let a = s.multivector(p);
            let b = s.multivector(q);
            let ab = schouten(&a, &b);
            assert_eq!(ab, schouten_oracle(&a, &b), "p={p} q={q}");
            let sign = Coeff::sign(((p + 1) * (q + 1)) % 2 == 1);
            assert!(ab.plus(&schouten(&b, &a).scaled(sign)).is_zero());
        }
        let a = s.multivector(1);
        let b = s.multivector(1);
        let as_vec = |m: &Multivector| VectorField::from_components((1..=N).map(|i| m.get(&[i])).collect());
        assert_eq!(as_vec(&schouten(&a, &b)), lie_bracket(&as_vec(&a), &as_vec(&b)));
    });
}

fn vbeta(s: &mut Sampler, p: usize) -> VBeta {
    VBeta { v: s.vector(), beta: s.form(p) }
}

fn exact(f: &PForm) -> VBeta {
    VBeta { v: VectorField::zero(f.dim()), beta: exterior_d(f) }
}

#[test]
fn dorfman_properties() {
    // (∂₁ + 0) * (0 + x¹dx¹∧dx²) = dx¹∧dx²
    let a = VBeta { v: VectorField::coordinate(N, 1), beta: PForm::zero(N, 2) };
    let b = VBeta { v: VectorField::zero(N), beta: PForm::basis(N, &[1, 2], x(1)) };
    assert_eq!(dorfman_p(&a, &b).unwrap().beta, PForm::basis(N, &[1, 2], one()));
    // ⟨∂₁+dx², ∂₂+dx¹⟩ = 2
    let a = VBeta { v: VectorField::coordinate(N, 1), beta: PForm::basis(N, &[2], one()) };
    let b = VBeta { v: VectorField::coordinate(N, 2), beta: PForm::basis(N, &[1], one()) };
    assert_eq!(pairing_p(&a, &b).unwrap().as_function(), GradedExpr::int(2));

    for p in 1..=N as usize {
        samples(6 + p as u64, 40, N, |s| {
            let (a, b, c) = (vbeta(s, p), vbeta(s, p), vbeta(s, p));
            let f = s.form(p - 1);
            let g = s.form(p - 1);
            let star = |x: &VBeta, y: &VBeta| dorfman_p(x, y).unwrap();
            let pair = |x: &VBeta, y: &VBeta| pairing_p(x, y).unwrap();
            // symmetrization
            assert_eq!(star(&a, &b).plus(&star(&b, &a)), exact(&pair(&a, &b)));
            // invariance, exact at p = 1 and up to −d ι_{v_A}⟨B,C⟩ above
            let bc = pair(&b, &c);
            let lhs = pair(&a, &exact(&bc));
            let rhs = pair(&star(&a, &b), &c).plus(&pair(&b, &star(&a, &c)));
            assert_eq!(rhs, lie_derivative(&a.v, &bc));
            match interior(&a.v, &bc) {
                Ok(i) => assert_eq!(lhs.minus(&rhs), exterior_d(&i).scaled(-Coeff::one())),
                Err(_) => assert_eq!(lhs, rhs),
            }
            // exact sections act trivially and are isotropic
            assert!(star(&exact(&f), &a).vanishes());
            assert!(pair(&exact(&f), &exact(&g)).vanishes());
            // Courant relation
            let half = Coeff::ratio(1, 2);
            let courant = courant_p(&a, &b).unwrap();
            assert_eq!(courant, star(&a, &b).minus(&exact(&pair(&a, &b)).scaled(half)));
            assert!(courant_p(&a, &a).unwrap().vanishes());
            // Leibniz
            let res = star(&a, &star(&b, &c)).minus(&star(&star(&a, &b), &c)).minus(&star(&b, &star(&a, &c)));
            assert!(res.vanishes(), "p={p}");
            if p == 1 {
                // anchor rule: A * (fB) = f(A*B) + ⟨A, df⟩B
                let fun = f.as_function();
                let anchor = pair(&a, &exact(&f)).as_function();
                assert_eq!(star(&a, &b.times(&fun)), star(&a, &b).times(&fun).plus(&b.times(&anchor)));
            }
        });
    }
}

#[test]
fn dorfman_degenerations() {
    samples(10, 40, N, |s| {
        let (a, b) = (vbeta(s, 1), vbeta(s, 1));
        let (oa, ob) =
            (VOmega::new(a.v.clone(), a.beta.clone()).unwrap(), VOmega::new(b.v.clone(), b.beta.clone()).unwrap());
        assert_eq!(dorfman(&oa, &ob).as_vbeta(), dorfman_p(&a, &b).unwrap());
        // vectors only: Courant is the Lie bracket
        let (va, vb) =
            (VBeta { v: a.v.clone(), beta: PForm::zero(N, 1) }, VBeta { v: b.v.clone(), beta: PForm::zero(N, 1) });
        assert_eq!(courant_p(&va, &vb).unwrap().v, lie_bracket(&a.v, &b.v));
        assert!(courant_p(&va, &vb).unwrap().beta.is_zero());
        for p in 1..N as usize {
            let (a, b) = (vbeta(s, p), vbeta(s, p));
            let lift = |x: &VBeta| VBetaGamma::new(x.v.clone(), x.beta.clone(), PForm::zero(N, p + 1)).unwrap();
            let e = dorfman_ext(&lift(&a), &lift(&b)).unwrap();
            let d = dorfman_p(&a, &b).unwrap();
            assert_eq!((e.v, e.beta), (d.v, d.beta));
        }
    });
}

fn vbg(s: &mut Sampler, p: usize) -> VBetaGamma {
    VBetaGamma::new(s.vector(), s.form(p), s.form(p + 1)).unwrap()
}

#[test]
fn extended_bracket_properties() {
    // γ₁ = dx¹∧dx², v₂ = ∂₁, p = 1 gives (0, −dx², 0)
    let a = VBetaGamma::new(VectorField::zero(N), PForm::zero(N, 1), PForm::basis(N, &[1, 2], one())).unwrap();
    let b = VBetaGamma::new(VectorField::coordinate(N, 1), PForm::zero(N, 1), PForm::zero(N, 2)).unwrap();
    let r = dorfman_ext(&a, &b).unwrap();
    assert_eq!(r.beta, PForm::basis(N, &[2], GradedExpr::int(-1)));
    assert!(r.v.is_zero() && r.gamma.is_zero());
    // d_h(f + x¹dx²) = (df − x¹dx², dx¹∧dx²)
    let f = GradedExpr::symbol("f", &[], &[], cdloop::expr::Symmetry::None, cdloop::expr::Parity::Even);
    let h = dh_ext(&PForm::function(N, f.clone()), &PForm::basis(N, &[2], x(1))).unwrap();
    assert_eq!(h.beta, exterior_d(&PForm::function(N, f)).minus(&PForm::basis(N, &[2], x(1))));
    assert_eq!(h.gamma, PForm::basis(N, &[1, 2], one()));

    for p in 1..N as usize {
        samples(20 + p as u64, 40, N, |s| {
            let (a, b, c) = (vbg(s, p), vbg(s, p), vbg(s, p));
            let star = |x: &VBetaGamma, y: &VBetaGamma| dorfman_ext(x, y).unwrap();
            let pair = |x: &VBetaGamma, y: &VBetaGamma| pairing_ext(x, y).unwrap();
            let dh = |r: &(PForm, PForm)| dh_ext(&r.0, &r.1).unwrap();
            assert_eq!(star(&a, &b).plus(&star(&b, &a)), dh(&pair(&a, &b)));
            assert_eq!(pair(&a, &b), pair(&b, &a));
            let res = star(&a, &star(&b, &c)).minus(&star(&star(&a, &b), &c)).minus(&star(&b, &star(&a, &c)));
            assert!(res.vanishes());
            // invariance holds up to the kernel of d_h
            let defect = pair(&a, &dh(&pair(&b, &c))).minus(&pair(&star(&a, &b), &c)).minus(&pair(&b, &star(&a, &c)));
            assert!(dh(&defect).vanishes());
            // no vector parts, no pairing
            let strip =
                |x: &VBetaGamma| VBetaGamma::new(VectorField::zero(N), x.beta.clone(), x.gamma.clone()).unwrap();
            assert!(pair(&strip(&a), &strip(&b)).vanishes());
        });
    }
}

#[test]
fn dh_ext_squares_to_zero() {
    for n in [3, 4] {
        for p in 1..=3usize {
            samples(30 + p as u64, 40, n, |s| {
                let b = s.form(p - 1);
                let a = s.form(p);
                let once = dh_ext(&b, &a).unwrap();
                let twice = dh_ext(&once.beta, &once.gamma).unwrap();
                assert!(twice.vanishes(), "n={n} p={p}");
            });
        }
    }
    assert!(dh_ext(&PForm::zero(N, 0), &PForm::zero(N, 1)).unwrap().vanishes());
}

fn vgr(s: &mut Sampler) -> VGammaR {
    VGammaR::new(s.vector(), s.sym(), s.form(1)).unwrap()
}

#[test]
fn sym_bracket_examples() {
    let flat = Connection::flat(N);
    let a = VGammaR::new(VectorField::coordinate(N, 1), SymTensor2::zero(N), PForm::zero(N, 1)).unwrap();
    let b = VGammaR::new(VectorField::zero(N), SymTensor2::zero(N), PForm::basis(N, &[1], x(1))).unwrap();
    let r = sym_bracket(&a, &b, &flat);
    assert!(r.v.is_zero() && r.gamma.is_zero());
    assert_eq!(r.r, PForm::basis(N, &[1], one()));
    let h = dh_sym(&PForm::basis(N, &[1], x(1)), &flat);
    assert_eq!(h.gamma, SymTensor2::zero(N).with(1, 1, one()));
    assert_eq!(h.r, PForm::basis(N, &[1], x(1)));
    assert!(dh_sym(&PForm::zero(N, 1), &flat).vanishes());
    // ⟨(v,0,0),(0,0,r)⟩ = ℒ_v r + 2ι_v γ̂ with γ̂ = −∇_{(μ}r_{ν)}; flat, component-wise:
    // r_μ ∂_ν v^μ − v^μ ∂_ν r_μ
    let v = VGammaR::new(VectorField::formal(N, "v"), SymTensor2::zero(N), PForm::zero(N, 1)).unwrap();
    let rr = VGammaR::new(VectorField::zero(N), SymTensor2::zero(N), PForm::formal(N, 1, "r")).unwrap();
    let pt = patch(N);
    let got = pairing_sym(&v, &rr, &flat);
    for nu in 1..=N {
        let mut want = GradedExpr::zero();
        for mu in 1..=N {
            want += &(rr.r.get(&[mu]) * pt.partial(v.v.get(mu), nu));
            want -= &(v.v.get(mu) * pt.partial(&rr.r.get(&[mu]), nu));
        }
        assert_eq!(got.get(&[nu]), want);
    }
    let g = VGammaR::new(VectorField::zero(N), SymTensor2::formal(N, "g"), PForm::zero(N, 1)).unwrap();
    assert!(pairing_sym(&g, &g, &flat).is_zero());
}

#[test]
fn sym_bracket_properties() {
    for (conn, count) in [(Connection::flat(N), 60), (Connection::formal(N, "G"), 12)] {
        samples(40, count, N, |s| {
            let (a, b, c) = (vgr(s), vgr(s), vgr(s));
            let star = |x: &VGammaR, y: &VGammaR| sym_bracket(x, y, &conn);
            let pair = |x: &VGammaR, y: &VGammaR| pairing_sym(x, y, &conn);
            assert_eq!(star(&a, &b).plus(&star(&b, &a)), dh_sym(&pair(&a, &b), &conn));
            assert_eq!(pair(&a, &b), pair(&b, &a));
            let inv = pair(&a, &dh_sym(&pair(&b, &c), &conn));
            assert_eq!(inv, pair(&star(&a, &b), &c).plus(&pair(&b, &star(&a, &c))));
        });
    }
}

#[test]
fn covariant_acceleration() {
    use cdloop::expr::FieldKind;
    let flat = covariant_loop_accel(&Connection::flat(N));
    for mu in 1..=N {
        assert_eq!(flat[mu as usize - 1], GradedExpr::jet(FieldKind::X, mu, 2));
    }
    let conn = Connection::formal(N, "G");
    let acc = covariant_loop_accel(&conn);
    let mut expected = GradedExpr::jet(FieldKind::X, 1, 2);
    for nu in 1..=N {
        for rho in 1..=N {
            expected +=
                &(conn.get(1, nu, rho) * GradedExpr::jet(FieldKind::X, nu, 1) * GradedExpr::jet(FieldKind::X, rho, 1));
        }
    }
    assert_eq!(acc[0], expected);
    assert_eq!(conn.get(2, 1, 3), conn.get(2, 3, 1));
}
