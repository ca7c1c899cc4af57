//! Dense univariate polynomials in `t` over an exact base field, with
//! division, gcd, irreducibility testing and factorization.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{AdeleError, Result};
use crate::field::{Field, Rationals};

#[derive(Clone)]
pub struct Poly<K: Field> {
    field: K,
    // low to high, no trailing zeros
    coeffs: Vec<K::Elt>,
}

impl<K: Field> PartialEq for Poly<K> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl<K: Field> Eq for Poly<K> {}

impl<K: Field> std::hash::Hash for Poly<K> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state)
    }
}

/// Degree first, then coefficients from the top down.
impl<K: Field> Ord for Poly<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}
impl<K: Field> PartialOrd for Poly<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[d];
            if self.field.is_zero(c) {
                continue;
            }
            let mut cs = self.field.fmt_elt(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if !first {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            } else if negative {
                write!(f, "-")?;
            }
            first = false;
            let mono = match d {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{d}"),
            };
            if d == 0 {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{cs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<K: Field> Poly<K> {
    pub fn new(field: K, mut coeffs: Vec<K::Elt>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: &K) -> Self {
        Self::new(field.clone(), Vec::new())
    }

    pub fn one(field: &K) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &K, c: K::Elt) -> Self {
        Self::new(field.clone(), vec![c])
    }

    /// The coordinate `t`.
    pub fn t(field: &K) -> Self {
        Self::new(field.clone(), vec![field.zero(), field.one()])
    }

    pub fn monomial(field: &K, c: K::Elt, d: usize) -> Self {
        let mut v = vec![field.zero(); d + 1];
        v[d] = c;
        Self::new(field.clone(), v)
    }

    /// `t - a`
    pub fn linear(field: &K, a: &K::Elt) -> Self {
        Self::new(field.clone(), vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn coeffs(&self) -> &[K::Elt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K::Elt {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> K::Elt {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let li = self.field.inv(&self.lead()).expect("nonzero lead");
        self.scale(&li)
    }

    pub fn scale(&self, c: &K::Elt) -> Self {
        let k = &self.field;
        Self::new(k.clone(), self.coeffs.iter().map(|a| k.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            k.clone(),
            (0..n).map(|i| k.add(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            k.clone(),
            (0..n).map(|i| k.sub(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        let k = &self.field;
        Self::new(k.clone(), self.coeffs.iter().map(|a| k.neg(a)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let k = &self.field;
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        Self::new(k.clone(), out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `t^s`.
    pub fn shift(&self, s: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); s];
        v.extend(self.coeffs.iter().cloned());
        Self::new(self.field.clone(), v)
    }

    /// Coefficients reversed with respect to degree `d` (`t^d f(1/t)`).
    pub fn reverse(&self, d: usize) -> Self {
        let mut v: Vec<_> = (0..=d).map(|i| self.coeff(i)).collect();
        v.reverse();
        Self::new(self.field.clone(), v)
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(AdeleError::DivisionByZero);
        }
        let k = &self.field;
        let mut rem = self.coeffs.clone();
        let dl = d.coeffs.len();
        if rem.len() < dl {
            return Ok((Self::zero(k), self.clone()));
        }
        let li = k.inv(&d.lead()).unwrap();
        let mut q = vec![k.zero(); rem.len() + 1 - dl];
        for i in (0..q.len()).rev() {
            let c = k.mul(&rem[i + dl - 1], &li);
            if !k.is_zero(&c) {
                for j in 0..dl {
                    rem[i + j] = k.sub(&rem[i + j], &k.mul(&c, &d.coeffs[j]));
                }
            }
            q[i] = c;
        }
        Ok((Self::new(k.clone(), q), Self::new(k.clone(), rem)))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, u, v)` with `u*self + v*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(k), Self::zero(k));
        let (mut t0, mut t1) = (Self::zero(k), Self::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = k.inv(&r0.lead()).unwrap();
        (r0.scale(&li), s0.scale(&li), t0.scale(&li))
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, u, _) = self.rem(m).ext_gcd(m);
        g.is_one().then(|| u.rem(m))
    }

    pub fn derivative(&self) -> Self {
        let k = &self.field;
        Self::new(
            k.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| k.mul(c, &k.integer(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &K::Elt) -> K::Elt {
        let k = &self.field;
        let mut acc = k.zero();
        for c in self.coeffs.iter().rev() {
            acc = k.add(&k.mul(&acc, x), c);
        }
        acc
    }

    /// `self(g)`
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(&self.field, c.clone()));
        }
        acc
    }

    /// Multiplicity of the (nonconstant) factor `p` in `self` and the cofactor.
    pub fn split_off(&self, p: &Self) -> (u32, Self) {
        let mut e = 0;
        let mut cur = self.clone();
        if cur.is_zero() || p.is_constant() {
            return (0, cur);
        }
        while let Some(q) = cur.div_exact(p) {
            cur = q;
            e += 1;
        }
        (e, cur)
    }

    /// Parse the canonical textual form (`t^2+1`, `3*t-1/2`, `-t`).
    pub fn parse(field: &K, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(AdeleError::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') && !cur.ends_with('*') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = Self::zero(field);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b.to_string()),
                None => (false, term.trim_start_matches('+').to_string()),
            };
            if body.is_empty() {
                return Err(AdeleError::Parse(format!("bad term in `{s}`")));
            }
            let (coef, mono) = match body.split_once('*') {
                Some((c, m)) => (field.parse_elt(c)?, m.to_string()),
                None if body.contains('t') => (field.one(), body.clone()),
                None => (field.parse_elt(&body)?, String::new()),
            };
            let deg = if mono.is_empty() {
                0
            } else if mono == "t" {
                1
            } else if let Some(e) = mono.strip_prefix("t^") {
                e.parse::<usize>()
                    .map_err(|_| AdeleError::Parse(format!("bad exponent in `{s}`")))?
            } else {
                return Err(AdeleError::Parse(format!("bad monomial `{mono}` in `{s}`")));
            };
            let c = if neg { field.neg(&coef) } else { coef };
            acc = acc.add(&Self::monomial(field, c, deg));
        }
        Ok(acc)
    }

    /// `base^e mod m` for a big exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(&self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    fn frobenius_mod(&self, m: &Self, q: u64, times: usize) -> Self {
        let e = BigUint::from(q);
        let mut cur = self.rem(m);
        for _ in 0..times {
            cur = cur.pow_mod(&e, m);
        }
        cur
    }
}

/// A base field with the polynomial factorization the point model needs.
pub trait BaseField: Field {
    /// Whether a nonconstant polynomial is irreducible over the base field.
    fn is_irreducible(p: &Poly<Self>) -> Result<bool>;
    /// Monic irreducible factors with multiplicities, sorted.
    fn factor(p: &Poly<Self>) -> Result<Vec<(Poly<Self>, u32)>>;
}

impl BaseField for crate::field::PrimeField {
    fn is_irreducible(f: &Poly<Self>) -> Result<bool> {
        let n = match f.degree() {
            None | Some(0) => return Ok(false),
            Some(1) => return Ok(true),
            Some(n) => n,
        };
        let k = f.field();
        let q = k.characteristic();
        let f = f.monic();
        let x = Poly::t(k);
        if !x.frobenius_mod(&f, q, n).sub(&x).rem(&f).is_zero() {
            return Ok(false);
        }
        for r in prime_divisors(n as u64) {
            let h = x.frobenius_mod(&f, q, n / r as usize).sub(&x);
            if !h.gcd(&f).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn factor(f: &Poly<Self>) -> Result<Vec<(Poly<Self>, u32)>> {
        if f.is_zero() {
            return Err(AdeleError::InvalidInput("cannot factor zero".into()));
        }
        let mut out = Vec::new();
        for (g, m) in squarefree_fp(&f.monic()) {
            for (d, part) in distinct_degree(&g) {
                for irr in equal_degree(&part, d) {
                    out.push((irr, m));
                }
            }
        }
        out.sort();
        merge_factors(out)
    }
}

impl BaseField for Rationals {
    fn is_irreducible(f: &Poly<Self>) -> Result<bool> {
        match f.degree() {
            None | Some(0) => Ok(false),
            Some(1) => Ok(true),
            Some(2) | Some(3) => Ok(rational_roots(f).is_empty()),
            Some(d) => {
                if !rational_roots(f).is_empty() {
                    return Ok(false);
                }
                Err(AdeleError::Unsupported(format!(
                    "irreducibility over Q for degree {d} polynomials without rational roots"
                )))
            }
        }
    }

    fn factor(f: &Poly<Self>) -> Result<Vec<(Poly<Self>, u32)>> {
        if f.is_zero() {
            return Err(AdeleError::InvalidInput("cannot factor zero".into()));
        }
        let k = *f.field();
        let mut out = Vec::new();
        let mut rest = f.monic();
        for r in rational_roots(f) {
            let lin = Poly::linear(&k, &r);
            let (e, cof) = rest.split_off(&lin);
            rest = cof;
            out.push((lin, e));
        }
        if !rest.is_constant() {
            // Squarefree decomposition of the root-free part (char 0: Yun).
            for (g, m) in squarefree_char0(&rest) {
                if g.degree().unwrap_or(0) <= 3 {
                    out.push((g, m));
                } else {
                    return Err(AdeleError::Unsupported(format!(
                        "factorization over Q of `{g}` (no rational roots, degree > 3)"
                    )));
                }
            }
        }
        out.sort();
        merge_factors(out)
    }
}

fn merge_factors<K: Field>(v: Vec<(Poly<K>, u32)>) -> Result<Vec<(Poly<K>, u32)>> {
    let mut out: Vec<(Poly<K>, u32)> = Vec::new();
    for (p, m) in v {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += m,
            _ => out.push((p, m)),
        }
    }
    Ok(out)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn squarefree_char0(f: &Poly<Rationals>) -> Vec<(Poly<Rationals>, u32)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let mut a = f.gcd(&df);
    let mut b = f.div_exact(&a).unwrap();
    let mut c = df.div_exact(&a).unwrap_or_else(|| Poly::zero(f.field()));
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while !b.is_constant() {
        a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        b = b.div_exact(&a).unwrap();
        c = d.div_exact(&a).unwrap();
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

type Fp = crate::field::PrimeField;

fn pth_root(f: &Poly<Fp>) -> Poly<Fp> {
    let p = f.field().characteristic() as usize;
    let coeffs: Vec<u64> = f.coeffs().iter().step_by(p).cloned().collect();
    Poly::new(*f.field(), coeffs)
}

fn squarefree_fp(f: &Poly<Fp>) -> Vec<(Poly<Fp>, u32)> {
    let k = *f.field();
    let p = k.characteristic() as u32;
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_fp(&pth_root(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).unwrap();
        if !fac.is_constant() {
            out.push((fac.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).unwrap();
    }
    if !c.is_constant() {
        for (g, m) in squarefree_fp(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(f: &Poly<Fp>) -> Vec<(usize, Poly<Fp>)> {
    let k = *f.field();
    let q = k.characteristic();
    let x = Poly::t(&k);
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d as i64 {
        h = h.pow_mod(&BigUint::from(q), &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
            out.push((d, g));
        }
        d += 1;
    }
    if !rest.is_constant() {
        out.push((rest.degree().unwrap(), rest));
    }
    out
}

fn equal_degree(f: &Poly<Fp>, d: usize) -> Vec<Poly<Fp>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let k = *f.field();
    let q = k.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ d as u64);
    loop {
        let a = Poly::new(k, (0..n).map(|_| k.random_elt(&mut rng)).collect());
        if a.is_constant() {
            continue;
        }
        let b = if q == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut acc = a.rem(f);
            let mut cur = acc.clone();
            for _ in 1..d {
                cur = cur.mul(&cur).rem(f);
                acc = acc.add(&cur);
            }
            acc
        } else {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&Poly::one(&k))
        };
        let g = b.gcd(f);
        if !g.is_constant() && g.degree() != f.degree() {
            let h = f.div_exact(&g).unwrap();
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&h, d));
            return out;
        }
    }
}

/// Rational roots of a polynomial over `Q`, sorted.
pub fn rational_roots(f: &Poly<Rationals>) -> Vec<num_rational::BigRational> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    // clear denominators
    let l = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    // factor out t
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let ints = &ints[low..];
    if ints.len() > 1 {
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        for p in small_divisors(&a0) {
            for q in small_divisors(&an) {
                for sign in [1i32, -1] {
                    let r = BigRational::new(BigInt::from(sign) * p.clone(), q.clone());
                    if f.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

fn small_divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let n = n.to_u64().expect("coefficient too large for rational root search");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn parse_format_roundtrip() {
        let k = f5();
        for s in ["t^2+1", "t", "3*t^3+2*t+4", "1"] {
            assert_eq!(Poly::parse(&k, s).unwrap().to_string(), s);
        }
        let q = Rationals;
        for s in ["-1/2*t^2+t-3", "-t", "t^4-t+1/3"] {
            assert_eq!(Poly::parse(&q, s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn division_identity() {
        let k = f5();
        let a = Poly::parse(&k, "t^5+3*t^2+1").unwrap();
        let b = Poly::parse(&k, "2*t^2+t+1").unwrap();
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // number of monic irreducibles over F_5 of degree 2 is (25-5)/2 = 10,
        // of degree 3 is (125-5)/3 = 40
        let k = f5();
        for (d, expected) in [(2usize, 10usize), (3, 40)] {
            let mut count = 0;
            let total = 5usize.pow(d as u32);
            for idx in 0..total {
                let mut c = Vec::new();
                let mut x = idx;
                for _ in 0..d {
                    c.push((x % 5) as u64);
                    x /= 5;
                }
                c.push(1);
                let p = Poly::new(k, c);
                if PrimeField::is_irreducible(&p).unwrap() {
                    count += 1;
                }
            }
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn factor_reconstructs_fp() {
        let k = f5();
        let f = Poly::parse(&k, "t^2+2").unwrap()
            .mul(&Poly::parse(&k, "t+1").unwrap().pow(3))
            .mul(&Poly::parse(&k, "t^3+t+1").unwrap())
            .mul(&Poly::t(&k).pow(5));
        let fac = PrimeField::factor(&f).unwrap();
        let mut prod = Poly::one(&k);
        for (p, e) in &fac {
            assert!(PrimeField::is_irreducible(p).unwrap());
            prod = prod.mul(&p.pow(*e));
        }
        assert_eq!(prod, f.monic());
    }

    #[test]
    fn factor_char2() {
        let k = PrimeField::new(2).unwrap();
        let f = Poly::parse(&k, "t^2+t+1").unwrap().mul(&Poly::parse(&k, "t^3+t+1").unwrap())
            .mul(&Poly::parse(&k, "t^3+t^2+1").unwrap()).mul(&Poly::parse(&k, "t+1").unwrap().pow(2));
        let fac = PrimeField::factor(&f).unwrap();
        assert_eq!(fac.len(), 4);
    }

    #[test]
    fn factor_over_q_roots_and_small_factors() {
        let q = Rationals;
        let f = Poly::parse(&q, "t^2+1").unwrap()
            .mul(&Poly::parse(&q, "2*t-1").unwrap().pow(2))
            .mul(&Poly::parse(&q, "t").unwrap());
        let fac = Rationals::factor(&f).unwrap();
        let names: Vec<String> = fac.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        assert_eq!(names, vec!["t-1/2^2", "t^1", "t^2+1^1"]);
    }

    #[test]
    fn q_irreducibility_limits_are_explicit() {
        let q = Rationals;
        let f = Poly::parse(&q, "t^4+1").unwrap();
        assert!(matches!(Rationals::is_irreducible(&f), Err(AdeleError::Unsupported(_))));
    }

    #[test]
    fn ext_gcd_bezout() {
        let k = f5();
        let a = Poly::parse(&k, "t^3+2*t+1").unwrap();
        let b = Poly::parse(&k, "t^2+4").unwrap();
        let (g, u, v) = a.ext_gcd(&b);
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
    }
}
