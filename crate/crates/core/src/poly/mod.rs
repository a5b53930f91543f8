//! Sparse exact multivariate polynomials over a [`Field`].
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose order is graded
//! lexicographic with the *last* variable largest (`x0 < x1 < … < y0 < …`).
//! The leading term is therefore the last map entry.

mod bihom;
mod gcd;
mod json;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fields::{Field, Scalar};

pub use bihom::{affine_vars, bihom_vars, dehomogenize, homogenize, BiHomPoly, Group};
pub use json::{PolyJson, TermJson};

/// Exponent vector, aligned with the owning polynomial's variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree_in(&self, group: &[usize]) -> u32 {
        group.iter().map(|&i| self.0[i]).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    field: Field,
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

/// Variable names `prefix0 .. prefix{n-1}`.
pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl MultiPoly {
    pub fn zero(field: &Field, vars: &[String]) -> MultiPoly {
        MultiPoly { field: field.clone(), vars: vars.into(), terms: BTreeMap::new() }
    }

    pub fn zero_like(&self) -> MultiPoly {
        MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, vars: &[String], c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(field, vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn constant_like(&self, c: Scalar) -> MultiPoly {
        let mut p = self.zero_like();
        p.add_term(Monomial::one(self.nvars()), c);
        p
    }

    pub fn one(field: &Field, vars: &[String]) -> MultiPoly {
        MultiPoly::constant(field, vars, field.one())
    }

    pub fn one_like(&self) -> MultiPoly {
        self.constant_like(self.field.one())
    }

    pub fn var(field: &Field, vars: &[String], name: &str) -> Result<MultiPoly> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(MultiPoly::var_at(field, vars, idx))
    }

    pub fn var_at(field: &Field, vars: &[String], idx: usize) -> MultiPoly {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = MultiPoly::zero(field, vars);
        p.add_term(Monomial(e), field.one());
        p
    }

    pub fn var_like(&self, idx: usize) -> MultiPoly {
        let mut e = vec![0; self.nvars()];
        e[idx] = 1;
        let mut p = self.zero_like();
        p.add_term(Monomial(e), self.field.one());
        p
    }

    /// Monomial `c · ∏ v_i^{e_i}` sharing this polynomial's field and variables.
    pub fn monomial_like(&self, exps: Vec<u32>, c: Scalar) -> MultiPoly {
        let mut p = self.zero_like();
        p.add_term(Monomial(exps), c);
        p
    }

    /// Build from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms<I>(field: &Field, vars: &[String], terms: I) -> Result<MultiPoly>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = MultiPoly::zero(field, vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::DimensionMismatch { expected: vars.len(), got: e.len() });
            }
            if !field.owns(&c) {
                return Err(Error::MixedFields);
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(field: &Field, vars: &[String], terms: &[(&[u32], i64)]) -> MultiPoly {
        let mut p = MultiPoly::zero(field, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e.to_vec()), field.from_i64(*c));
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Scaled so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if self.field.is_one(lc) => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field || self.vars != other.vars {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), self.field.neg(c));
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let mut r = self.zero_like();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let mut r = self.zero_like();
        if self.field.is_zero(c) {
            return r;
        }
        r.terms = self.terms.iter().map(|(m, a)| (m.clone(), self.field.mul(a, c))).collect();
        r
    }

    pub fn scale_i64(&self, n: i64) -> MultiPoly {
        self.scale(&self.field.from_i64(n))
    }

    pub fn mul_monomial(&self, exps: &[u32]) -> MultiPoly {
        let m = Monomial(exps.to_vec());
        let mut r = self.zero_like();
        r.terms = self.terms.iter().map(|(k, c)| (k.mul(&m), c.clone())).collect();
        r
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn degree_in(&self, group: &[usize]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(group)).max().unwrap_or(0)
    }

    /// Lowest exponent of `var` over all terms.
    pub fn min_degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    /// The common degree of all terms in `group`, or `None` if they differ.
    /// The zero polynomial is homogeneous of every degree; `Some(0)` is returned.
    pub fn homogeneous_degree(&self, group: &[usize]) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree_in(group));
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut r = self.zero_like();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            r.add_term(m2, self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        r
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: point.len() });
        }
        if point.iter().any(|a| !self.field.owns(a)) {
            return Err(Error::MixedFields);
        }
        let f = &self.field;
        // powers cache per variable
        let mut powers: Vec<Vec<Scalar>> = point.iter().map(|a| vec![f.one(), a.clone()]).collect();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = f.mul(pw.last().unwrap(), &pw[1]);
                    pw.push(next);
                }
                t = f.mul(&t, &pw[e as usize]);
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitute a scalar for one variable; the variable list is kept.
    pub fn partial_eval(&self, var: usize, value: &Scalar) -> MultiPoly {
        let f = &self.field;
        let mut r = self.zero_like();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2.0[var], 0);
            r.add_term(m2, f.mul(c, &f.pow_u64(value, e as u64)));
        }
        r
    }

    /// Substitute scalars for several variables at once.
    pub fn partial_eval_many(&self, assignments: &[(usize, Scalar)]) -> MultiPoly {
        let f = &self.field;
        let mut r = self.zero_like();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut t = c.clone();
            for (var, value) in assignments {
                let e = std::mem::replace(&mut m2.0[*var], 0);
                if e > 0 {
                    t = f.mul(&t, &f.pow_u64(value, e as u64));
                }
            }
            r.add_term(m2, t);
        }
        r
    }

    /// Replace variable `var` by `image` (same field and variables).
    pub fn substitute(&self, var: usize, image: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(image)?;
        let mut powers = vec![self.one_like()];
        let mut r = self.zero_like();
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * image;
                powers.push(next);
            }
            let mut m2 = m.clone();
            m2.0[var] = 0;
            let t = powers[e].mul_monomial(&m2.0).scale(c);
            r = &r + &t;
        }
        Ok(r)
    }

    /// Ring map sending variable `i` to `images[i]`. All images share one
    /// field and variable list, which becomes the result's.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for img in images {
            first.compatible(img)?;
        }
        if first.field != self.field {
            return Err(Error::MixedFields);
        }
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|g| vec![g.one_like(), g.clone()]).collect();
        let mut r = first.zero_like();
        for (m, c) in &self.terms {
            let mut t = first.constant_like(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut cache[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &pw[1];
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            r = &r + &t;
        }
        Ok(r)
    }

    /// Re-express over another variable list, matching by name.
    pub fn with_vars(&self, vars: &[String]) -> Result<MultiPoly> {
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut r = MultiPoly::zero(&self.field, vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UnknownVariable(self.vars[i].clone()))?;
                e[j] = k;
            }
            r.add_term(Monomial(e), c.clone());
        }
        Ok(r)
    }

    /// Over the rationals, the scalar multiple with coprime integer
    /// coefficients and positive leading coefficient; other fields unchanged.
    /// This is the equation to reduce mod p when only the zero set matters.
    pub fn primitive_integral(&self) -> MultiPoly {
        if !self.field.is_rationals() || self.is_zero() {
            return self.clone();
        }
        let (mut den, mut num) = (BigInt::one(), BigInt::zero());
        for c in self.terms.values() {
            let Scalar::Rat(q) = c else { unreachable!("rational field") };
            den = den.lcm(q.denom());
            num = num.gcd(q.numer());
        }
        let mut scale = BigRational::new(den, num);
        if let Some(Scalar::Rat(lc)) = self.leading_coeff() {
            if lc.is_negative() {
                scale = -scale;
            }
        }
        self.scale(&Scalar::Rat(scale))
    }

    /// Map every coefficient into `target` (e.g. reduce rationals mod p).
    pub fn coerce(&self, target: &Field) -> Result<MultiPoly> {
        let mut r = MultiPoly::zero(target, &self.vars);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), target.coerce(&self.field, c)?);
        }
        Ok(r)
    }

    /// Coefficients with respect to `group`: group-monomial ↦ polynomial in
    /// the remaining variables (same variable list, zero exponents on `group`).
    pub fn coefficients_wrt(&self, group: &[usize]) -> BTreeMap<Monomial, MultiPoly> {
        let mut out: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = vec![0; self.nvars()];
            let mut rest = m.clone();
            for &i in group {
                key[i] = m.0[i];
                rest.0[i] = 0;
            }
            out.entry(Monomial(key)).or_insert_with(|| self.zero_like()).add_term(rest, c.clone());
        }
        out
    }

    /// Coefficients of `var^0, var^1, …, var^deg` (each free of `var`).
    pub fn univariate_coeffs(&self, var: usize) -> Vec<MultiPoly> {
        let mut out = vec![self.zero_like(); self.degree(var) as usize + 1];
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = std::mem::replace(&mut rest.0[var], 0);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if it does not divide.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        self.compatible(divisor).ok()?;
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = self.field.inv(lc).ok()?;
        let mut rem = self.clone();
        let mut quot = self.zero_like();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = self.field.mul(c, &lc_inv);
            let step = divisor.mul_monomial(&qm.0).scale(&qc);
            quot.add_term(qm, qc);
            rem = &rem - &step;
        }
        Some(quot)
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Largest monomial dividing every term (restricted to `group`).
    pub fn monomial_content(&self, group: &[usize]) -> Vec<u32> {
        let mut e = vec![0; self.nvars()];
        for &i in group {
            e[i] = self.min_degree(i);
        }
        e
    }

    pub fn div_monomial(&self, exps: &[u32]) -> MultiPoly {
        let m = Monomial(exps.to_vec());
        let mut r = self.zero_like();
        r.terms = self.terms.iter().map(|(k, c)| (k.div(&m), c.clone())).collect();
        r
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomials share field and variables")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("polynomials share field and variables")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomials share field and variables")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&self.field.neg(&self.field.one()))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = self.field.format(c);
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{e}", self.vars[i])
                    }
                })
                .collect();
            let is_ext = coeff.contains(',');
            if is_ext {
                coeff = format!("({coeff})");
            }
            if mono.is_empty() {
                f.write_str(&coeff)?;
            } else if coeff == "1" {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {:?}", self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn primitive_integral_clears_denominators() {
        let vars = var_names("x", 2);
        let f = MultiPoly::parse(&q(), &vars, "-x1/2 + 3/4*x0").unwrap();
        assert_eq!(f.primitive_integral(), MultiPoly::parse(&q(), &vars, "2*x1 - 3*x0").unwrap());
        let g = MultiPoly::parse(&q(), &vars, "6*x0 + 4*x1").unwrap();
        assert_eq!(g.primitive_integral().to_string(), "2*x1 + 3*x0");
        assert!(g.primitive_integral().coerce(&Field::prime(2).unwrap()).is_ok());
    }

    #[test]
    fn graded_lex_order() {
        // x0 < x1: x1 beats x0 at equal degree, degree beats everything
        let a = Monomial(vec![1, 0]);
        let b = Monomial(vec![0, 1]);
        let c = Monomial(vec![2, 0]);
        assert!(a < b && b < c);
    }

    #[test]
    fn difference_of_squares() {
        let x = MultiPoly::var(&q(), &xy(), "x").unwrap();
        let y = MultiPoly::var(&q(), &xy(), "y").unwrap();
        let p = &(&x + &y) * &(&x - &y);
        let expect = &x.pow(2) - &y.pow(2);
        assert_eq!(p, expect);
    }

    #[test]
    fn derivative_and_evaluate() {
        let vars = var_names("y", 2);
        let p = MultiPoly::from_int_terms(&q(), &vars, &[(&[2, 1], 1)]);
        let d = p.derivative(0);
        assert_eq!(d, MultiPoly::from_int_terms(&q(), &vars, &[(&[1, 1], 2)]));

        let mut vars6 = var_names("x", 3);
        vars6.extend(var_names("y", 3));
        let h0 = MultiPoly::from_int_terms(
            &q(),
            &vars6,
            &[(&[1, 0, 0, 1, 0, 0], 1), (&[0, 1, 0, 0, 1, 0], 1), (&[0, 0, 1, 0, 0, 1], 1)],
        );
        let f = q();
        let pt: Vec<Scalar> = [1, 2, 3, 1, 1, -1].iter().map(|&n| f.from_i64(n)).collect();
        assert!(f.is_zero(&h0.evaluate(&pt).unwrap()));
    }

    #[test]
    fn mixed_operands_error() {
        let f5 = Field::prime(5).unwrap();
        let a = MultiPoly::var(&q(), &xy(), "x").unwrap();
        let b = MultiPoly::var(&f5, &xy(), "x").unwrap();
        assert_eq!(a.checked_add(&b).unwrap_err(), Error::MixedFields);
        let c = MultiPoly::var(&q(), &var_names("z", 2), "z0").unwrap();
        assert_eq!(a.checked_mul(&c).unwrap_err(), Error::MixedFields);
        assert_eq!(
            MultiPoly::var(&q(), &xy(), "w").unwrap_err(),
            Error::UnknownVariable("w".into())
        );
    }

    #[test]
    fn substitution_and_compose() {
        let x = MultiPoly::var(&q(), &xy(), "x").unwrap();
        let y = MultiPoly::var(&q(), &xy(), "y").unwrap();
        let p = &x.pow(2) + &y;
        // x -> x + y
        let s = p.substitute(0, &(&x + &y)).unwrap();
        assert_eq!(s, &(&x + &y).pow(2) + &y);
        // swap variables
        let c = p.compose(&[y.clone(), x.clone()]).unwrap();
        assert_eq!(c, &y.pow(2) + &x);
    }

    #[test]
    fn exact_division() {
        let x = MultiPoly::var(&q(), &xy(), "x").unwrap();
        let y = MultiPoly::var(&q(), &xy(), "y").unwrap();
        let a = &x - &y;
        let b = &(&x + &y).pow(2) * &a;
        assert_eq!(b.div_exact(&a).unwrap(), (&x + &y).pow(2));
        assert!(b.div_exact(&(&x + &y.scale_i64(2))).is_none());
    }

    #[test]
    fn display() {
        let x = MultiPoly::var(&q(), &xy(), "x").unwrap();
        let y = MultiPoly::var(&q(), &xy(), "y").unwrap();
        let p = &(&x.pow(2).scale_i64(3) - &y) + &x.one_like();
        assert_eq!(p.to_string(), "3*x^2 - y + 1");
    }
}
