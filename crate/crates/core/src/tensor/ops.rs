//! Exterior calculus, Lie operations and covariant derivatives.

use crate::expr::{Coeff, ExprAcc, FieldKind, GradedExpr, Patch};

use super::arrays::{combinations, Connection, Multivector, PForm, SymTensor2, VectorField};
use super::TensorError;

pub(crate) fn patch(dim: u8) -> Patch {
    Patch::new(dim).expect("tensor dimension outside the supported range")
}

fn check_dim(a: u8, b: u8) -> Result<(), TensorError> {
    if a == b {
        Ok(())
    } else {
        Err(TensorError::DimensionMismatch(a, b))
    }
}

/// Exterior derivative. Top-degree input yields the (empty) zero (p+1)-form.
pub fn exterior_d(beta: &PForm) -> PForm {
    let pt = patch(beta.dim());
    let mut out = PForm::zero(beta.dim(), beta.degree() + 1);
    for idx in combinations(beta.dim(), beta.degree() + 1) {
        let mut acc = ExprAcc::new();
        for k in 0..idx.len() {
            let mut rest = idx.clone();
            let mu = rest.remove(k);
            acc.add_expr(&pt.partial(&beta.get(&rest), mu), Coeff::sign(k % 2 == 1));
        }
        out.set(&idx, acc.finish());
    }
    out
}

/// Contraction `(ι_vβ)_{μ₂…μ_p} = v^ν β_{νμ₂…μ_p}`.
pub fn interior(v: &VectorField, beta: &PForm) -> Result<PForm, TensorError> {
    check_dim(v.dim(), beta.dim())?;
    if beta.degree() == 0 {
        return Err(TensorError::ContractFunction);
    }
    let mut out = PForm::zero(beta.dim(), beta.degree() - 1);
    for idx in combinations(beta.dim(), beta.degree() - 1) {
        let mut acc = GradedExpr::zero();
        for (nu, vn) in v.components() {
            let mut full = vec![nu];
            full.extend_from_slice(&idx);
            acc += &(vn * &beta.get(&full));
        }
        out.set(&idx, acc);
    }
    Ok(out)
}

/// `v(f) = v^ν ∂_ν f`.
pub fn apply_vector(v: &VectorField, f: &GradedExpr) -> GradedExpr {
    let pt = patch(v.dim());
    let mut acc = GradedExpr::zero();
    for (nu, vn) in v.components() {
        acc += &(vn * &pt.partial(f, nu));
    }
    acc
}

pub fn lie_bracket(v1: &VectorField, v2: &VectorField) -> VectorField {
    assert_eq!(v1.dim(), v2.dim(), "dimension mismatch");
    let mut out = VectorField::zero(v1.dim());
    for mu in 1..=v1.dim() {
        out.set(mu, apply_vector(v1, v2.get(mu)) - apply_vector(v2, v1.get(mu)));
    }
    out
}

/// Lie derivative of a form through `ι_v d + d ι_v`.
pub fn lie_derivative(v: &VectorField, beta: &PForm) -> PForm {
    assert_eq!(v.dim(), beta.dim(), "dimension mismatch");
    if beta.degree() == 0 {
        return PForm::function(v.dim(), apply_vector(v, &beta.as_function()));
    }
    let a = interior(v, &exterior_d(beta)).expect("degree checked");
    let b = exterior_d(&interior(v, beta).expect("degree checked"));
    a.zip_with(&b, |x, y| x + y)
}

/// `(ℒ_vγ)_{μν} = v^ρ∂_ργ_{μν} + ∂_μv^ρ γ_{ρν} + ∂_νv^ρ γ_{μρ}`.
pub fn lie_derivative_sym(v: &VectorField, gamma: &SymTensor2) -> SymTensor2 {
    assert_eq!(v.dim(), gamma.dim(), "dimension mismatch");
    let pt = patch(v.dim());
    let n = v.dim();
    let mut out = SymTensor2::zero(n);
    for mu in 1..=n {
        for nu in mu..=n {
            let mut acc = apply_vector(v, gamma.get(mu, nu));
            for rho in 1..=n {
                acc += &(&pt.partial(v.get(rho), mu) * gamma.get(rho, nu));
                acc += &(&pt.partial(v.get(rho), nu) * gamma.get(mu, rho));
            }
            out.set(mu, nu, acc);
        }
    }
    out
}

/// `(ι_vγ)_ν = v^μ γ_{μν}`.
pub fn interior_sym(v: &VectorField, gamma: &SymTensor2) -> PForm {
    let n = v.dim();
    let mut out = PForm::zero(n, 1);
    for nu in 1..=n {
        let mut acc = GradedExpr::zero();
        for (mu, vm) in v.components() {
            acc += &(vm * gamma.get(mu, nu));
        }
        out.set(&[nu], acc);
    }
    out
}

/// `∇_μα_ν = ∂_μα_ν − Γ^ρ_{μν}α_ρ` as a full matrix accessor.
pub fn covariant_one_form(alpha: &PForm, conn: &Connection, mu: u8, nu: u8) -> GradedExpr {
    let pt = patch(alpha.dim());
    let mut acc = pt.partial(&alpha.get(&[nu]), mu);
    for rho in 1..=alpha.dim() {
        acc -= &(conn.get(rho, mu, nu) * &alpha.get(&[rho]));
    }
    acc
}

/// `∇_μv^ρ = ∂_μv^ρ + Γ^ρ_{μσ}v^σ`.
pub fn covariant_vector(v: &VectorField, conn: &Connection, mu: u8, rho: u8) -> GradedExpr {
    let pt = patch(v.dim());
    let mut acc = pt.partial(v.get(rho), mu);
    for (sigma, vs) in v.components() {
        acc += &(conn.get(rho, mu, sigma) * vs);
    }
    acc
}

/// `∇_{(μ}α_{ν)}` with the ½ normalization.
pub fn sym_covariant(alpha: &PForm, conn: &Connection) -> SymTensor2 {
    assert_eq!(alpha.degree(), 1, "sym_covariant takes a 1-form");
    SymTensor2::symmetrize(alpha.dim(), |mu, nu| covariant_one_form(alpha, conn, mu, nu))
}

/// Permutations of `0..m` with their signs.
fn permutations(m: usize) -> Vec<(bool, Vec<usize>)> {
    if m == 0 {
        return vec![(false, Vec::new())];
    }
    let mut out = Vec::new();
    for (neg, p) in permutations(m - 1) {
        // insert m-1 at every position; moving it left by k steps adds k transpositions
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push((neg ^ ((p.len() - pos) % 2 == 1), q));
        }
    }
    out
}

fn factorial(m: usize) -> i64 {
    (1..=m as i64).product()
}

/// Schouten bracket: unit-weight antisymmetrization of
/// `p v^{μ₁…μ_{p−1}ρ}∂_ρu^{μ_p…} − (−1)^{(p+1)(q+1)} q u^{μ₁…μ_{q−1}ρ}∂_ρv^{μ_q…}`.
pub fn schouten(v: &Multivector, u: &Multivector) -> Multivector {
    assert_eq!(v.dim(), u.dim(), "dimension mismatch");
    let n = v.dim();
    let (p, q) = (v.degree(), u.degree());
    if p + q == 0 || p + q - 1 > n as usize {
        return Multivector::zero(n, (p + q).saturating_sub(1));
    }
    let m = p + q - 1;
    let pt = patch(n);
    let s = Coeff::sign((p + 1) * (q + 1) % 2 == 1);
    let w = |idx: &[u8]| -> GradedExpr {
        let mut acc = GradedExpr::zero();
        for rho in 1..=n {
            if p > 0 {
                let mut vi = idx[..p - 1].to_vec();
                vi.push(rho);
                let dv = &v.get(&vi) * &pt.partial(&u.get(&idx[p - 1..]), rho);
                acc += &dv.scale(Coeff::int(p as i64));
            }
            if q > 0 {
                let mut ui = idx[..q - 1].to_vec();
                ui.push(rho);
                let du = &u.get(&ui) * &pt.partial(&v.get(&idx[q - 1..]), rho);
                acc -= &du.scale(s * Coeff::int(q as i64));
            }
        }
        acc
    };
    let perms = permutations(m);
    let norm = Coeff::ratio(1, factorial(m));
    let mut out = Multivector::zero(n, m);
    for idx in combinations(n, m) {
        let mut acc = ExprAcc::new();
        for (neg, perm) in &perms {
            let permuted: Vec<u8> = perm.iter().map(|&k| idx[k]).collect();
            acc.add_expr(&w(&permuted), Coeff::sign(*neg) * norm);
        }
        out.set(&idx, acc.finish());
    }
    out
}

/// Bosonic loop acceleration `∂²X^μ + Γ^μ_{νρ}(X)∂X^ν∂X^ρ`, one density per index.
pub fn covariant_loop_accel(conn: &Connection) -> Vec<GradedExpr> {
    let n = conn.dim();
    let dx = |nu: u8| GradedExpr::jet(FieldKind::X, nu, 1);
    (1..=n)
        .map(|mu| {
            let mut acc = GradedExpr::jet(FieldKind::X, mu, 2);
            for nu in 1..=n {
                for rho in 1..=n {
                    acc += &(&(conn.get(mu, nu, rho) * &dx(nu)) * &dx(rho));
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(mu: u8) -> GradedExpr {
        GradedExpr::coord(mu)
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let odd = perms.iter().filter(|(n, _)| *n).count();
        assert_eq!(odd, 3);
        assert!(perms.contains(&(true, vec![1, 0, 2])));
        assert!(perms.contains(&(false, vec![1, 2, 0])));
    }

    #[test]
    fn d_of_coordinate_form() {
        let b = PForm::basis(3, &[1], x(2));
        assert_eq!(exterior_d(&b).get(&[1, 2]), GradedExpr::int(-1));
    }

    #[test]
    fn interior_examples() {
        let e12 = PForm::basis(3, &[1, 2], GradedExpr::one());
        let r = interior(&VectorField::coordinate(3, 1), &e12).unwrap();
        assert_eq!(r, PForm::basis(3, &[2], GradedExpr::one()));
        let r = interior(&VectorField::coordinate(3, 2), &PForm::basis(3, &[1], GradedExpr::one())).unwrap();
        assert!(r.is_zero());
        assert!(interior(&VectorField::coordinate(3, 2), &PForm::function(3, x(1))).is_err());
    }

    #[test]
    fn lie_examples() {
        let v = VectorField::zero(3).with(2, x(1));
        let w = VectorField::coordinate(3, 1);
        assert_eq!(lie_bracket(&v, &w), VectorField::zero(3).with(2, GradedExpr::int(-1)));
        let l = lie_derivative(&w, &PForm::basis(3, &[2], x(1)));
        assert_eq!(l, PForm::basis(3, &[2], GradedExpr::one()));
        let g = SymTensor2::zero(3).with(1, 1, x(1));
        assert_eq!(lie_derivative_sym(&w, &g), SymTensor2::zero(3).with(1, 1, GradedExpr::one()));
    }

    #[test]
    fn schouten_example() {
        let v = Multivector::zero(3, 2).with(&[1, 2], GradedExpr::one());
        let u = Multivector::zero(3, 1).with(&[3], x(1));
        let s = schouten(&v, &u);
        assert_eq!(s, Multivector::zero(3, 2).with(&[2, 3], GradedExpr::int(-1)));
    }

    #[test]
    fn flat_acceleration() {
        let a = covariant_loop_accel(&Connection::flat(3));
        assert_eq!(a[1], GradedExpr::jet(FieldKind::X, 2, 2));
    }
}
