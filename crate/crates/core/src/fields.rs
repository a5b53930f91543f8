//! Exact coefficient domains: the rationals, prime fields `F_p` and
//! extension fields `F_{p^s}` given by a monic irreducible modulus.
//!
//! Elements are stored as bare [`Scalar`] values; every operation goes
//! through the owning [`Field`], which knows how to reduce. [`FieldElem`]
//! pairs a scalar with its field for the checked public API.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;

/// Largest prime accepted, so that products of residues fit in `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rationals,
    Prime { p: u64 },
    /// `modulus` is monic of degree `s`, coefficients low-degree-first
    /// (so it has `s + 1` entries and the last one is 1).
    Extension { p: u64, s: u32, modulus: Vec<u64> },
}

/// A raw field element. Which variant is valid depends on the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
    /// Coefficients of `1, β, …, β^{s-1}`.
    Ext(Vec<u64>),
}

/// Shared handle to a validated field descriptor.
#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Prime { p } => write!(f, "F_{p}"),
            FieldDescriptor::Extension { p, s, modulus } => {
                write!(f, "F_{p}^{s}[{modulus:?}]")
            }
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let desc = FieldDescriptor::deserialize(de)?;
        Field::from_descriptor(desc).map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if p > MAX_PRIME {
        return Err(Error::InvalidField(format!("{p} exceeds the supported prime range")));
    }
    Ok(())
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo the monic `m` over `F_p`; both low-degree-first.
fn poly_rem_mod_p(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let c = r.pop().unwrap();
        if c != 0 {
            let off = r.len() - dm;
            for j in 0..dm {
                r[off + j] = (r[off + j] + p - mulmod(c, m[j], p)) % p;
            }
        }
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=s/2`.
pub fn is_irreducible_mod_p(modulus: &[u64], p: u64) -> bool {
    let s = modulus.len() - 1;
    if s == 0 {
        return false;
    }
    for d in 1..=s / 2 {
        let mut cand = vec![0u64; d + 1];
        cand[d] = 1;
        loop {
            if poly_rem_mod_p(modulus, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
            // odometer over the non-leading coefficients
            let mut i = 0;
            while i < d {
                cand[i] += 1;
                if cand[i] < p {
                    break;
                }
                cand[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree `s`
/// over `F_p`, comparing coefficients from the constant term upwards.
pub fn canonical_modulus(p: u64, s: u32) -> Result<Vec<u64>> {
    check_prime(p)?;
    if s == 0 {
        return Err(Error::InvalidField("extension degree must be positive".into()));
    }
    let s = s as usize;
    let mut coeffs = vec![0u64; s];
    loop {
        let mut m = coeffs.clone();
        m.push(1);
        if is_irreducible_mod_p(&m, p) {
            return Ok(m);
        }
        // increment with c_{s-1} fastest, so c_0 is the most significant
        let mut i = s;
        loop {
            if i == 0 {
                return Err(Error::InvalidField(format!(
                    "no irreducible polynomial of degree {s} over F_{p}"
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldDescriptor::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field> {
        check_prime(p)?;
        Ok(Field(Arc::new(FieldDescriptor::Prime { p })))
    }

    /// `F_{p^s}` built on the canonical modulus.
    pub fn extension(p: u64, s: u32) -> Result<Field> {
        let modulus = canonical_modulus(p, s)?;
        Ok(Field(Arc::new(FieldDescriptor::Extension { p, s, modulus })))
    }

    pub fn from_descriptor(desc: FieldDescriptor) -> Result<Field> {
        match &desc {
            FieldDescriptor::Rationals => {}
            FieldDescriptor::Prime { p } => check_prime(*p)?,
            FieldDescriptor::Extension { p, s, modulus } => {
                check_prime(*p)?;
                let s = *s as usize;
                if s == 0 || modulus.len() != s + 1 || modulus[s] != 1 {
                    return Err(Error::InvalidField("modulus must be monic of degree s".into()));
                }
                if modulus.iter().any(|&c| c >= *p) {
                    return Err(Error::InvalidField("modulus coefficients must be reduced".into()));
                }
                if !is_irreducible_mod_p(modulus, *p) {
                    return Err(Error::InvalidField("modulus is reducible".into()));
                }
            }
        }
        Ok(Field(Arc::new(desc)))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::Prime { p } | FieldDescriptor::Extension { p, .. } => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u128> {
        match &*self.0 {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::Prime { p } => Some(*p as u128),
            FieldDescriptor::Extension { p, s, .. } => Some((*p as u128).pow(*s)),
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, FieldDescriptor::Rationals)
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(&*self.0, FieldDescriptor::Prime { .. })
    }

    fn ext_parts(&self) -> Option<(u64, usize, &[u64])> {
        match &*self.0 {
            FieldDescriptor::Extension { p, s, modulus } => Some((*p, *s as usize, modulus)),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::zero()),
            FieldDescriptor::Prime { .. } => Scalar::Mod(0),
            FieldDescriptor::Extension { s, .. } => Scalar::Ext(vec![0; *s as usize]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match &*self.0 {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldDescriptor::Prime { p } => Scalar::Mod(reduce_bigint(n, *p)),
            FieldDescriptor::Extension { p, s, .. } => {
                let mut v = vec![0; *s as usize];
                v[0] = reduce_bigint(n, *p);
                Scalar::Ext(v)
            }
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        if self.is_rationals() {
            return Ok(Scalar::Rat(q.clone()));
        }
        let p = self.characteristic();
        let den = reduce_bigint(q.denom(), p);
        if den == 0 {
            return Err(Error::BadReduction(p));
        }
        let num = self.from_bigint(q.numer());
        self.div(&num, &self.from_bigint(q.denom()))
    }

    /// Prime-subfield element from a residue.
    pub fn from_residue(&self, r: u64) -> Scalar {
        match &*self.0 {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::from_integer(r.into())),
            FieldDescriptor::Prime { p } => Scalar::Mod(r % p),
            FieldDescriptor::Extension { p, s, .. } => {
                let mut v = vec![0; *s as usize];
                v[0] = r % p;
                Scalar::Ext(v)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod(r) => *r == 0,
            Scalar::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % self.characteristic()),
            (Scalar::Ext(x), Scalar::Ext(y)) => {
                let p = self.characteristic();
                Scalar::Ext(x.iter().zip(y).map(|(a, b)| (a + b) % p).collect())
            }
            _ => unreachable!("scalar variant does not match field {:?}", self),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Mod(x) => {
                let p = self.characteristic();
                Scalar::Mod((p - x) % p)
            }
            Scalar::Ext(x) => {
                let p = self.characteristic();
                Scalar::Ext(x.iter().map(|c| (p - c) % p).collect())
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mulmod(*x, *y, self.characteristic())),
            (Scalar::Ext(x), Scalar::Ext(y)) => {
                let (p, s, modulus) = self.ext_parts().expect("extension field");
                let mut prod = vec![0u64; 2 * s - 1];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + mulmod(xi, yj, p)) % p;
                    }
                }
                let mut r = poly_rem_mod_p(&prod, modulus, p);
                r.resize(s, 0);
                Scalar::Ext(r)
            }
            _ => unreachable!("scalar variant does not match field {:?}", self),
        }
    }

    /// Square-and-multiply for a nonnegative big exponent.
    pub fn pow(&self, a: &Scalar, e: &BigUint) -> Scalar {
        if let Scalar::Mod(x) = a {
            if let Some(e) = e.to_u64() {
                return Scalar::Mod(powmod(*x, e, self.characteristic()));
            }
        }
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    pub fn pow_u64(&self, a: &Scalar, e: u64) -> Scalar {
        self.pow(a, &BigUint::from(e))
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Mod(x) => {
                let p = self.characteristic();
                Scalar::Mod(powmod(*x, p - 2, p))
            }
            Scalar::Ext(_) => {
                let q = BigUint::from(self.order().expect("finite field"));
                self.pow(a, &(q - 2u32))
            }
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// All elements of a finite field in index order (see [`Field::element`]).
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        let q = self.order().ok_or(Error::WrongField("a finite field"))?;
        Ok((0..q as u64).map(|i| self.element(i)).collect())
    }

    /// The `i`-th element: base-`p` digits of `i`, least significant digit
    /// is the constant coefficient.
    pub fn element(&self, mut i: u64) -> Scalar {
        match &*self.0 {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::from_integer(i.into())),
            FieldDescriptor::Prime { p } => Scalar::Mod(i % p),
            FieldDescriptor::Extension { p, s, .. } => {
                let mut v = vec![0; *s as usize];
                for c in v.iter_mut() {
                    *c = i % p;
                    i /= p;
                }
                Scalar::Ext(v)
            }
        }
    }

    /// The residue of a prime-subfield element.
    pub fn as_residue(&self, a: &Scalar) -> Option<u64> {
        match a {
            Scalar::Mod(r) => Some(*r),
            Scalar::Ext(v) if v[1..].iter().all(|&c| c == 0) => Some(v[0]),
            _ => None,
        }
    }

    /// Residue class of the generator, `β`.
    pub fn generator(&self) -> Result<Scalar> {
        let (_, s, modulus) = self.ext_parts().ok_or(Error::WrongField("an extension field"))?;
        if s == 1 {
            // β is the root of x + c0
            let p = self.characteristic();
            return Ok(Scalar::Ext(vec![(p - modulus[0]) % p]));
        }
        let mut v = vec![0; s];
        v[1] = 1;
        Ok(Scalar::Ext(v))
    }

    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Mod(r) => r.to_string(),
            Scalar::Ext(v) => {
                if v[1..].iter().all(|&c| c == 0) {
                    v[0].to_string()
                } else {
                    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
                }
            }
        }
    }

    /// Inverse of [`Field::format`]; integers and `a/b` are accepted in every
    /// field, comma lists only in extension fields.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("bad coefficient `{text}`"));
        if text.contains(',') {
            let (p, s, _) = self.ext_parts().ok_or_else(bad)?;
            let v: Vec<u64> = text
                .split(',')
                .map(|t| t.trim().parse::<BigInt>().map(|n| reduce_bigint(&n, p)))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            if v.len() != s {
                return Err(bad());
            }
            return Ok(Scalar::Ext(v));
        }
        let q = if let Some((n, d)) = text.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(text.parse::<BigInt>().map_err(|_| bad())?)
        };
        self.from_rational(&q)
    }

    /// Checks that a scalar has the shape this field expects.
    pub fn owns(&self, a: &Scalar) -> bool {
        match (&*self.0, a) {
            (FieldDescriptor::Rationals, Scalar::Rat(_)) => true,
            (FieldDescriptor::Prime { p }, Scalar::Mod(r)) => r < p,
            (FieldDescriptor::Extension { p, s, .. }, Scalar::Ext(v)) => {
                v.len() == *s as usize && v.iter().all(|c| c < p)
            }
            _ => false,
        }
    }

    /// Map an element of `source` into `self`: rationals reduce modulo the
    /// characteristic, prime-subfield elements embed, equal fields copy.
    pub fn coerce(&self, source: &Field, a: &Scalar) -> Result<Scalar> {
        if self == source {
            return Ok(a.clone());
        }
        match a {
            Scalar::Rat(q) => self.from_rational(q),
            _ if source.characteristic() == self.characteristic() => {
                let r = source.as_residue(a).ok_or(Error::MixedFields)?;
                Ok(self.from_residue(r))
            }
            _ => Err(Error::MixedFields),
        }
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// A field element bundled with its field, for the checked API.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: Scalar,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.field.format(&self.value), self.field)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

impl FieldElem {
    pub fn new(field: &Field, value: Scalar) -> Result<FieldElem> {
        if !field.owns(&value) {
            return Err(Error::MixedFields);
        }
        Ok(FieldElem { field: field.clone(), value })
    }

    pub fn from_i64(field: &Field, n: i64) -> FieldElem {
        FieldElem { field: field.clone(), value: field.from_i64(n) }
    }

    pub fn parse(field: &Field, text: &str) -> Result<FieldElem> {
        Ok(FieldElem { field: field.clone(), value: field.parse(text)? })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn into_value(self) -> Scalar {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    fn same(&self, other: &FieldElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    fn wrap(&self, value: Scalar) -> FieldElem {
        FieldElem { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(&self.value, &other.value)))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.wrap(self.field.div(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> FieldElem {
        self.wrap(self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.wrap(self.field.inv(&self.value)?))
    }

    pub fn pow(&self, e: &BigUint) -> FieldElem {
        self.wrap(self.field.pow(&self.value, e))
    }
}

/// Field norm `N(α) = α^{(p^s-1)/(p-1)}` from `F_{p^s}` down to `F_p`.
pub fn norm(alpha: &FieldElem) -> Result<FieldElem> {
    let field = alpha.field();
    let FieldDescriptor::Extension { p, s, .. } = field.descriptor() else {
        return Err(Error::WrongField("an extension field"));
    };
    let e = (BigUint::from(*p).pow(*s) - 1u32) / BigUint::from(*p - 1);
    let value = field.pow(alpha.value(), &e);
    let r = field.as_residue(&value).ok_or(Error::CoefficientNotInPrimeField)?;
    let base = Field::prime(*p)?;
    FieldElem::new(&base, Scalar::Mod(r))
}

/// The `F_p`-linear isomorphism `F_p^s → F_{p^s}`, `u ↦ Σ u_i β^{i-1}`.
pub fn pi_s(ext: &Field, u: &[FieldElem]) -> Result<FieldElem> {
    let FieldDescriptor::Extension { p, s, .. } = ext.descriptor() else {
        return Err(Error::WrongField("an extension field"));
    };
    if u.len() != *s as usize {
        return Err(Error::DimensionMismatch { expected: *s as usize, got: u.len() });
    }
    let beta = ext.generator()?;
    let mut acc = ext.zero();
    let mut power = ext.one();
    for ui in u {
        if ui.field().characteristic() != *p {
            return Err(Error::MixedFields);
        }
        let r = ui.field().as_residue(ui.value()).ok_or(Error::MixedFields)?;
        acc = ext.add(&acc, &ext.mul(&ext.from_residue(r), &power));
        power = ext.mul(&power, &beta);
    }
    FieldElem::new(ext, acc)
}

/// Inverse of [`pi_s`]: coordinates of `α` in the basis `1, β, …, β^{s-1}`.
pub fn pi_s_inverse(alpha: &FieldElem) -> Result<Vec<FieldElem>> {
    let ext = alpha.field();
    let FieldDescriptor::Extension { p, s, .. } = ext.descriptor() else {
        return Err(Error::WrongField("an extension field"));
    };
    let base = Field::prime(*p)?;
    debug_assert!(*s >= 1);
    let Scalar::Ext(v) = alpha.value() else {
        return Err(Error::MixedFields);
    };
    v.iter().map(|&c| FieldElem::new(&base, Scalar::Mod(c))).collect()
}

/// `N_s(π_s(z))` as a polynomial over `F_p` in `z1..zs`, expanded as the
/// product of the Frobenius conjugates `Σ_j z_j (β^{j-1})^{p^i}`.
pub fn norm_poly(p: u64, s: u32) -> Result<MultiPoly> {
    let ext = Field::extension(p, s)?;
    let base = Field::prime(p)?;
    let vars: Vec<String> = (1..=s).map(|i| format!("z{i}")).collect();
    let beta = ext.generator()?;
    let basis: Vec<Scalar> =
        (0..s as u64).map(|j| ext.pow_u64(&beta, j)).collect();
    let mut prod = MultiPoly::one(&ext, &vars);
    let mut frob: Vec<Scalar> = basis;
    for _ in 0..s {
        let mut lin = MultiPoly::zero(&ext, &vars);
        for (j, b) in frob.iter().enumerate() {
            lin = &lin + &MultiPoly::var_at(&ext, &vars, j).scale(b);
        }
        prod = &prod * &lin;
        frob = frob.iter().map(|b| ext.pow_u64(b, p)).collect();
    }
    let terms = prod
        .terms()
        .map(|(m, c)| {
            let r = ext.as_residue(c).ok_or(Error::CoefficientNotInPrimeField)?;
            Ok((m.0.clone(), Scalar::Mod(r)))
        })
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(&base, &vars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn prime_field_products() {
        let f5 = Field::prime(5).unwrap();
        let two = FieldElem::from_i64(&f5, 2);
        let three = FieldElem::from_i64(&f5, 3);
        assert_eq!(two.mul(&three).unwrap(), FieldElem::from_i64(&f5, 1));
        assert_eq!(three.inv().unwrap(), two);
        assert_eq!(FieldElem::from_i64(&f5, -1).value(), &Scalar::Mod(4));
    }

    #[test]
    fn f9_generator_squares_to_minus_one() {
        let f9 = Field::extension(3, 2).unwrap();
        assert_eq!(
            f9.descriptor(),
            &FieldDescriptor::Extension { p: 3, s: 2, modulus: vec![1, 0, 1] }
        );
        let w = f9.generator().unwrap();
        assert_eq!(f9.mul(&w, &w), f9.from_i64(2));
    }

    #[test]
    fn rational_sum() {
        let q = Field::rationals();
        let a = FieldElem::parse(&q, "2/3").unwrap();
        let b = FieldElem::parse(&q, "1/6").unwrap();
        assert_eq!(a.add(&b).unwrap().to_string(), "5/6");
        assert_eq!(FieldElem::parse(&q, "4/-6").unwrap().to_string(), "-2/3");
    }

    #[test]
    fn errors() {
        let f5 = Field::prime(5).unwrap();
        let f7 = Field::prime(7).unwrap();
        let zero = FieldElem::from_i64(&f5, 0);
        assert_eq!(zero.inv().unwrap_err(), Error::DivisionByZero);
        assert_eq!(
            FieldElem::from_i64(&f5, 1).add(&FieldElem::from_i64(&f7, 1)).unwrap_err(),
            Error::MixedFields
        );
        assert!(matches!(Field::prime(9), Err(Error::InvalidField(_))));
        assert!(Field::from_descriptor(FieldDescriptor::Extension {
            p: 5,
            s: 2,
            modulus: vec![1, 0, 1]
        })
        .is_err());
        let q = Field::rationals();
        assert_eq!(norm(&FieldElem::from_i64(&q, 2)).unwrap_err(), Error::WrongField("an extension field"));
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(canonical_modulus(3, 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(canonical_modulus(5, 2).unwrap(), vec![1, 1, 1]);
        // x^3 + x^2 + 1 precedes x^3 + x + 1 when compared low-degree-first
        assert_eq!(canonical_modulus(2, 3).unwrap(), vec![1, 0, 1, 1]);
        assert_eq!(canonical_modulus(7, 1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn norm_examples_in_f9() {
        let f9 = Field::extension(3, 2).unwrap();
        let w = FieldElem::new(&f9, f9.generator().unwrap()).unwrap();
        assert_eq!(norm(&w).unwrap().value(), &Scalar::Mod(1));
        assert_eq!(norm(&FieldElem::from_i64(&f9, 1)).unwrap().value(), &Scalar::Mod(1));
        assert_eq!(norm(&FieldElem::from_i64(&f9, 0)).unwrap().value(), &Scalar::Mod(0));
    }

    #[test]
    fn pi_s_round_trip_f9() {
        let f9 = Field::extension(3, 2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let e = |n| FieldElem::from_i64(&f3, n);
        assert!(f9.is_one(pi_s(&f9, &[e(1), e(0)]).unwrap().value()));
        assert_eq!(pi_s(&f9, &[e(0), e(1)]).unwrap().value(), &f9.generator().unwrap());
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..3 {
            for b in 0..3 {
                let u = vec![e(a), e(b)];
                let alpha = pi_s(&f9, &u).unwrap();
                assert_eq!(pi_s_inverse(&alpha).unwrap(), u);
                seen.insert(alpha.value().clone());
            }
        }
        assert_eq!(seen.len(), 9);
        assert!(matches!(
            pi_s(&f9, &[e(1)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn big_exponent_pow() {
        let q = Field::rationals();
        let two = q.from_i64(2);
        assert_eq!(q.pow(&two, &big(10)), q.from_i64(1024));
        let f7 = Field::prime(7).unwrap();
        let e = BigUint::from(6u32).pow(40) + 1u32;
        assert_eq!(f7.pow(&f7.from_i64(3), &e), f7.from_i64(3));
    }

    #[test]
    fn coefficient_parse_and_format() {
        let f9 = Field::extension(3, 2).unwrap();
        let a = f9.parse("2,1").unwrap();
        assert_eq!(f9.format(&a), "2,1");
        assert_eq!(f9.parse("-1").unwrap(), f9.from_i64(2));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse("1/2").unwrap(), Scalar::Mod(4));
        assert_eq!(f7.parse("1/7").unwrap_err(), Error::BadReduction(7));
    }

    #[test]
    fn norm_poly_examples() {
        let f3 = Field::prime(3).unwrap();
        let vars = vec!["z1".to_string(), "z2".to_string()];
        let expect = MultiPoly::from_int_terms(&f3, &vars, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(norm_poly(3, 2).unwrap(), expect);
        let z1 = MultiPoly::var_at(&f3, &["z1".to_string()], 0);
        assert_eq!(norm_poly(3, 1).unwrap(), z1);
    }

    #[test]
    fn norm_poly_matches_power_formula() {
        for (p, s) in [(5u64, 2u32), (3, 3), (2, 2), (7, 2)] {
            let np = norm_poly(p, s).unwrap();
            assert!(np.total_degree() <= s);
            let ext = Field::extension(p, s).unwrap();
            let base = Field::prime(p).unwrap();
            for a in ext.elements().unwrap() {
                let alpha = FieldElem::new(&ext, a).unwrap();
                let coords: Vec<Scalar> = pi_s_inverse(&alpha)
                    .unwrap()
                    .into_iter()
                    .map(|c| c.into_value())
                    .collect();
                let lhs = np.evaluate(&coords).unwrap();
                assert_eq!(lhs, *norm(&alpha).unwrap().value(), "p={p} s={s}");
                assert!(base.owns(&lhs));
            }
        }
    }
}
