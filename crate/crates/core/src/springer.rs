//! Springer isomorphisms of type A, the truncated exponential `ε`, additive
//! homomorphisms in `ε`-canonical form, and Frobenius untwisting.
//!
//! For `GL_n` every Springer isomorphism has the shape
//! `1 + e ↦ a₁e + a₂e² + ⋯ + a_{n−1}e^{n−1}` with `a₁ ≠ 0`, so one is stored
//! by its coefficient vector alone.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jordan::nilpotent_partition;
use crate::matrix::{span_dim, Mat};
use crate::scalar::{Field, Fp, Prime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpringerCoeffs<T: Field> {
    domain: T::Domain,
    a: Vec<T>,
}

impl<T: Field> SpringerCoeffs<T> {
    /// Coefficients `a₁, …, a_{n−1}`; rejects `a₁ = 0`.
    pub fn new(domain: &T::Domain, a: Vec<T>) -> Result<Self> {
        if a.iter().any(|x| x.domain() != *domain) {
            return Err(Error::Domain("coefficients lie in different fields".into()));
        }
        if a.first().is_some_and(Field::is_zero) {
            return Err(Error::Invariant("Springer coefficient a1 must be nonzero".into()));
        }
        Ok(SpringerCoeffs {
            domain: domain.clone(),
            a,
        })
    }

    pub fn from_ints(domain: &T::Domain, a: &[i64]) -> Result<Self> {
        Self::new(domain, a.iter().map(|&x| T::from_i64(domain, x)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.a
    }

    /// The matrix size `n` these coefficients act on.
    pub fn n(&self) -> usize {
        self.a.len() + 1
    }

    pub fn domain(&self) -> &T::Domain {
        &self.domain
    }

    /// `Σ aᵢ eⁱ`.
    fn eval_series(&self, e: &Mat<T>) -> Mat<T> {
        let n = e.rows();
        let mut acc = Mat::zeros(&self.domain, n, n);
        let mut power = Mat::identity(&self.domain, n);
        for a in &self.a {
            power = &power * e;
            if !a.is_zero() {
                acc = &acc + &power.scale(a);
            }
        }
        acc
    }

    fn check_size(&self, m: &Mat<T>) -> Result<()> {
        if !m.is_square() || m.rows() != self.n() {
            return Err(Error::Domain(format!(
                "{} coefficients act on {n}x{n} matrices, got {}x{}",
                self.a.len(),
                m.rows(),
                m.cols(),
                n = self.n()
            )));
        }
        Ok(())
    }

    /// Coefficients `b` of the compositional inverse `g(t) = Σ bᵢ tⁱ` of
    /// `f(t) = Σ aᵢ tⁱ`, truncated below `tⁿ`.
    pub fn reversion(&self) -> Vec<T> {
        let n = self.n();
        let d = &self.domain;
        if n == 1 {
            return Vec::new();
        }
        let a1_inv = self.a[0].inverse().expect("a1 != 0");
        // series as coefficient vectors indexed by degree, length n
        let mut g = vec![T::zero(d); n];
        g[1] = a1_inv.clone();
        for k in 2..n {
            // coefficient of t^k in Σ_{i≥2} a_i g^i (g known below degree k)
            let mut power = g.clone();
            let mut rhs = T::zero(d);
            for i in 2..=k {
                power = poly_mul_trunc(&power, &g, n);
                if let Some(ai) = self.a.get(i - 1) {
                    rhs = rhs + ai.clone() * power[k].clone();
                }
            }
            g[k] = -(a1_inv.clone() * rhs);
        }
        g.into_iter().skip(1).collect()
    }
}

fn poly_mul_trunc<T: Field>(a: &[T], b: &[T], len: usize) -> Vec<T> {
    let d = a[0].domain();
    let mut out = vec![T::zero(&d); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}

/// `f_a(u) = Σ aᵢ (u − 1)ⁱ`.
pub fn springer_apply<T: Field>(a: &SpringerCoeffs<T>, u: &Mat<T>) -> Result<Mat<T>> {
    a.check_size(u)?;
    if !u.is_unipotent() {
        return Err(Error::Precondition("springer_apply needs a unipotent matrix".into()));
    }
    let e = u - &Mat::identity(u.domain(), u.rows());
    Ok(a.eval_series(&e))
}

/// The unipotent `u` with `f_a(u) = X`, via series reversion.
pub fn springer_invert<T: Field>(a: &SpringerCoeffs<T>, x: &Mat<T>) -> Result<Mat<T>> {
    a.check_size(x)?;
    if !x.is_nilpotent() {
        return Err(Error::Precondition("springer_invert needs a nilpotent matrix".into()));
    }
    let b = SpringerCoeffs {
        domain: a.domain.clone(),
        a: a.reversion(),
    };
    Ok(&Mat::identity(x.domain(), x.rows()) + &b.eval_series(x))
}

/// Whether `f_a(u)` and `f_b(u)` have the same Jordan type.
pub fn orbit_bijection_check<T: Field>(
    a: &SpringerCoeffs<T>,
    b: &SpringerCoeffs<T>,
    u: &Mat<T>,
) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::Domain("coefficient vectors of different lengths".into()));
    }
    let xa = springer_apply(a, u)?;
    let xb = springer_apply(b, u)?;
    Ok(nilpotent_partition(&xa)? == nilpotent_partition(&xb)?)
}

/// The coefficients of the unique Springer isomorphism sending the regular
/// unipotent `v` to `x ∈ c(v)`: solves `Σ aᵢ (v−1)ⁱ = x`.
pub fn coeffs_from_point<T: Field>(v: &Mat<T>, x: &Mat<T>) -> Result<SpringerCoeffs<T>> {
    let n = v.rows();
    let d = v.domain().clone();
    let e = v - &Mat::identity(&d, n);
    if nilpotent_partition(&e)?.len() != 1 {
        return Err(Error::Precondition("base point must be regular unipotent".into()));
    }
    let powers: Vec<Vec<T>> = (1..n).map(|k| e.pow(k as u32).to_vector()).collect();
    let system = Mat::from_columns(&d, n * n, &powers);
    let a = system
        .solve(&x.to_vector())
        .ok_or_else(|| Error::Precondition("target does not lie in c(v)".into()))?;
    SpringerCoeffs::new(&d, a)
        .map_err(|_| Error::Precondition("target is not regular in c(v)".into()))
}

/// Whether every product of `len` elements of the span of `gens` vanishes.
pub fn products_vanish<T: Field>(gens: &[Mat<T>], len: usize) -> bool {
    let Some(first) = gens.first() else {
        return true;
    };
    let n = first.rows();
    let d = first.domain().clone();
    let mut term: Vec<Mat<T>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    for _ in 1..len {
        if term.is_empty() {
            return true;
        }
        let products: Vec<Mat<T>> = gens
            .iter()
            .flat_map(|g| term.iter().map(move |t| g * t))
            .filter(|m| !m.is_zero())
            .collect();
        if products.is_empty() {
            return true;
        }
        let vectors: Vec<Vec<T>> = products.iter().map(Mat::to_vector).collect();
        let (_, pivots) = Mat::from_columns(&d, n * n, &vectors).rref();
        term = pivots.iter().map(|&j| products[j].clone()).collect();
    }
    term.is_empty()
}

fn factorial_inverse<T: Field>(d: &T::Domain, i: u32) -> T {
    let f = (1..=i as i64).fold(T::one(d), |acc, k| acc * T::from_i64(d, k));
    f.inverse().expect("i! invertible for i < p")
}

/// `ε(X) = Σ_{i<p} Xⁱ/i!`; in characteristic 0 the full (finite) exponential.
///
/// Requires `X^p = 0` in characteristic `p`.
pub fn eps_exp<T: Field>(x: &Mat<T>) -> Result<Mat<T>> {
    let d = x.domain().clone();
    let n = x.rows();
    let p = x.characteristic();
    let terms = if p == 0 {
        x.nilpotency_index()
            .ok_or_else(|| Error::Precondition("exponential of a non-nilpotent matrix".into()))?
    } else {
        if !x.pow(p).is_zero() {
            return Err(Error::Precondition(format!(
                "X^{p} != 0: the truncated exponential is not defined (class bound fails)"
            )));
        }
        p
    };
    let mut acc = Mat::identity(&d, n);
    let mut power = Mat::identity(&d, n);
    for i in 1..terms {
        power = &power * x;
        acc = &acc + &power.scale(&factorial_inverse(&d, i));
    }
    Ok(acc)
}

/// Inverse of [`eps_exp`]: `Σ_{0<i<p} (−1)^{i+1} (v−1)ⁱ / i`.
pub fn eps_log<T: Field>(v: &Mat<T>) -> Result<Mat<T>> {
    let d = v.domain().clone();
    let n = v.rows();
    let e = v - &Mat::identity(&d, n);
    let p = v.characteristic();
    let terms = if p == 0 {
        e.nilpotency_index()
            .ok_or_else(|| Error::Precondition("logarithm of a non-unipotent matrix".into()))?
    } else {
        if !e.pow(p).is_zero() {
            return Err(Error::Precondition(format!(
                "(v-1)^{p} != 0: the truncated logarithm is not defined"
            )));
        }
        p
    };
    let mut acc = Mat::zeros(&d, n, n);
    let mut power = Mat::identity(&d, n);
    for i in 1..terms {
        power = &power * &e;
        let c = T::from_i64(&d, i as i64).inverse().expect("i < p");
        let c = if i % 2 == 1 { c } else { -c };
        acc = &acc + &power.scale(&c);
    }
    Ok(acc)
}

/// Homomorphism from the additive group `s ↦ ε(sX₀)·ε(s^p X₁)·ε(s^{p²} X₂)⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveHom {
    p: Prime,
    n: usize,
    coeffs: Vec<Mat<Fp>>,
}

impl AdditiveHom {
    /// Validates: pairwise commuting nilpotent coefficients whose span has
    /// all length-`p` products zero.
    pub fn new(p: Prime, n: usize, coeffs: Vec<Mat<Fp>>) -> Result<Self> {
        for c in &coeffs {
            if c.rows() != n || c.cols() != n || *c.domain() != p {
                return Err(Error::Domain(format!("coefficient is not an {n}x{n} matrix over F_{p}")));
            }
        }
        for (i, a) in coeffs.iter().enumerate() {
            for b in &coeffs[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::Invariant("coefficients must commute pairwise".into()));
                }
            }
        }
        if !products_vanish(&coeffs, p.get() as usize) {
            return Err(Error::Invariant(format!(
                "products of length {p} in the coefficients do not vanish"
            )));
        }
        Ok(AdditiveHom { p, n, coeffs })
    }

    pub fn coeffs(&self) -> &[Mat<Fp>] {
        &self.coeffs
    }
    pub fn prime(&self) -> Prime {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }

    /// `dψ` = the coefficient of `s` = `X₀`.
    pub fn differential(&self) -> Mat<Fp> {
        self.coeffs
            .first()
            .cloned()
            .unwrap_or_else(|| Mat::zeros(&self.p, self.n, self.n))
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Mat::is_zero)
    }
}

pub fn additive_eval(h: &AdditiveHom, s: Fp) -> Mat<Fp> {
    let mut acc = Mat::identity(&h.p, h.n);
    let mut power = s;
    for x in &h.coeffs {
        let factor = eps_exp(&x.scale(&power)).expect("validated at construction");
        acc = &acc * &factor;
        power = Field::pow(&power, h.p.get() as u64);
    }
    acc
}

/// `h = h′ ∘ F^r` with `h′` having nonzero differential.
pub fn additive_untwist(h: &AdditiveHom) -> Result<(usize, AdditiveHom)> {
    let r = h
        .coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Precondition("trivial homomorphism has no untwist".into()))?;
    let shifted = AdditiveHom {
        p: h.p,
        n: h.n,
        coeffs: h.coeffs[r..].to_vec(),
    };
    Ok((r, shifted))
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    pub n: usize,
    pub coeffs: Vec<String>,
    /// Matrix of the tangent map on `span{e, e², …, e^{n−1}}` in that basis.
    pub matrix: Vec<Vec<String>>,
    pub is_scalar: bool,
    pub scalar: Option<String>,
}

/// Tangent map of `f_a` restricted to `C(u)` at the regular unipotent `u`.
///
/// `T_u C(u)` is identified with `c(u) = span{e, …, e^{n−1}}` by left
/// translation, so the direction `Y` is the curve `u(1 + εY)`. The first
/// order term is extracted with dual numbers realized as block matrices
/// `[[A, B], [0, A]] = A + εB`. No expected value is asserted.
pub fn tangent_experiment<T: Field>(a: &SpringerCoeffs<T>, u: &Mat<T>) -> Result<TangentReport> {
    a.check_size(u)?;
    let n = u.rows();
    let d = u.domain().clone();
    let e = u - &Mat::identity(&d, n);
    if !u.is_unipotent() || nilpotent_partition(&e)?.len() > 1 {
        return Err(Error::Precondition("tangent_experiment needs a regular unipotent".into()));
    }
    let powers: Vec<Mat<T>> = (1..n).map(|k| e.pow(k as u32)).collect();
    let basis_vectors: Vec<Vec<T>> = powers.iter().map(Mat::to_vector).collect();
    let coords_system = Mat::from_columns(&d, n * n, &basis_vectors);
    debug_assert_eq!(span_dim(&d, n * n, &basis_vectors), n - 1);

    let dual_coeffs = SpringerCoeffs {
        domain: d.clone(),
        a: a.a.clone(),
    };
    let mut tangent = Mat::zeros(&d, n - 1, n - 1);
    for (j, y) in powers.iter().enumerate() {
        // e(ε) = u(1 + εY) − 1 = e + ε·uY
        let uy = u * y;
        let dual_e = Mat::from_rows(&d, {
            let mut rows = Vec::with_capacity(2 * n);
            for i in 0..n {
                let mut row = e.row(i).to_vec();
                row.extend_from_slice(uy.row(i));
                rows.push(row);
            }
            for i in 0..n {
                let mut row = vec![T::zero(&d); n];
                row.extend_from_slice(e.row(i));
                rows.push(row);
            }
            rows
        })?;
        let image = dual_coeffs.eval_series(&dual_e);
        let top: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        let derivative = image.submatrix(&top, &right);
        let coords = coords_system
            .solve(&derivative.to_vector())
            .ok_or_else(|| Error::Inconsistency("tangent image left c(u)".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            tangent[(i, j)] = c;
        }
    }
    let lead = (n > 1).then(|| tangent[(0, 0)].clone());
    let is_scalar = match &lead {
        Some(c) => tangent == Mat::identity(&d, n - 1).scale(c),
        None => true,
    };
    Ok(TangentReport {
        n,
        coeffs: a.a.iter().map(ToString::to_string).collect(),
        matrix: (0..n - 1)
            .map(|i| tangent.row(i).iter().map(ToString::to_string).collect())
            .collect(),
        is_scalar,
        scalar: if is_scalar { lead.map(|c| c.to_string()) } else { None },
    })
}
