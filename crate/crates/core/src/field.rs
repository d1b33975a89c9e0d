//! Finite fields GF(p^m) with elements stored as base-p coefficient digits.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("order {0} is not a prime power")]
    NotPrimePower(u32),
    #[error("no built-in modulus for GF({0}); supply an irreducible polynomial")]
    MissingModulus(u32),
    #[error("malformed modulus: {0}")]
    MalformedModulus(String),
    #[error("modulus {modulus:?} is reducible over GF({p}): divisible by {factor:?}")]
    ReducibleModulus { p: u32, modulus: Vec<u32>, factor: Vec<u32> },
    #[error("field order {0} is too large for table arithmetic")]
    TooLarge(u64),
}

/// Largest order for which add/mul tables are materialized.
pub const MAX_ORDER: u32 = 1 << 12;

/// Irreducible moduli (coefficients from constant term upward) for the
/// non-prime orders supported without a user-supplied polynomial.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),       // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),    // x^3 + x + 1
    (3, 2, &[1, 0, 1]),       // x^2 + 1
    (2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    (5, 2, &[2, 0, 1]),       // x^2 + 2
    (3, 3, &[1, 2, 0, 1]),    // x^3 + 2x + 1
];

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Returns `(p, m)` with `k = p^m` when `k` is a prime power.
pub fn prime_power(k: u32) -> Option<(u32, u32)> {
    if k < 2 {
        return None;
    }
    let p = (2..=k).find(|d| k.is_multiple_of(*d))?;
    let mut rest = k;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

pub fn builtin_modulus(p: u32, m: u32) -> Option<&'static [u32]> {
    BUILTIN_MODULI.iter().find(|&&(bp, bm, _)| bp == p && bm == m).map(|&(_, _, c)| c)
}

/// A field of order `q = p^m`. Elements are `0..q`; element `a` encodes the
/// polynomial whose `i`-th coefficient is the `i`-th base-`p` digit of `a`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldSummary {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

/// Builds GF(p^m). For `m > 1` the modulus is the supplied polynomial (monic,
/// degree `m`, coefficients from the constant term upward) or a built-in one.
pub fn finite_field(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<FiniteField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::CompositeCharacteristic(p));
    }
    if m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
    if q64 > MAX_ORDER as u64 {
        return Err(FieldError::TooLarge(q64));
    }
    let q = q64 as u32;
    let modulus = match (m, modulus) {
        (1, None) => None,
        (_, Some(c)) => {
            check_modulus_shape(p, m, c)?;
            if let Some(factor) = find_factor(p, c) {
                return Err(FieldError::ReducibleModulus { p, modulus: c.to_vec(), factor });
            }
            (m > 1).then(|| c.to_vec())
        }
        (_, None) => Some(builtin_modulus(p, m).ok_or(FieldError::MissingModulus(q))?.to_vec()),
    };

    let digits = |a: u32| -> Vec<u32> {
        let mut out = vec![0; m as usize];
        let mut a = a;
        for d in out.iter_mut() {
            *d = a % p;
            a /= p;
        }
        out
    };
    let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d);

    let n = q as usize;
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[(a * q + b) as usize] = encode(&sum);
            let prod = match &modulus {
                None => vec![(da[0] * db[0]) % p],
                Some(md) => poly_mulmod(p, &da, &db, md),
            };
            mul[(a * q + b) as usize] = encode(&prod);
        }
    }
    Ok(FiniteField { p, m, q, modulus, add, mul })
}

/// GF(k) for a prime power `k`, using the built-in modulus when needed.
pub fn field_of_order(k: u32, modulus: Option<&[u32]>) -> Result<FiniteField, FieldError> {
    let (p, m) = prime_power(k).ok_or(FieldError::NotPrimePower(k))?;
    finite_field(p, m, modulus)
}

fn check_modulus_shape(p: u32, m: u32, c: &[u32]) -> Result<(), FieldError> {
    if c.len() != m as usize + 1 {
        return Err(FieldError::MalformedModulus(format!(
            "expected {} coefficients for degree {m}, got {}",
            m + 1,
            c.len()
        )));
    }
    if c[m as usize] != 1 {
        return Err(FieldError::MalformedModulus("leading coefficient must be 1".into()));
    }
    if let Some(&bad) = c.iter().find(|&&x| x >= p) {
        return Err(FieldError::MalformedModulus(format!("coefficient {bad} is not reduced mod {p}")));
    }
    Ok(())
}

/// Product of two residues modulo a monic polynomial of degree `md.len() - 1`.
fn poly_mulmod(p: u32, a: &[u32], b: &[u32], md: &[u32]) -> Vec<u32> {
    let deg = md.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(p, &mut prod, md);
    prod.truncate(deg);
    prod.resize(deg, 0);
    prod
}

/// Reduces `a` in place modulo the monic polynomial `md`.
fn poly_rem(p: u32, a: &mut [u32], md: &[u32]) {
    let deg = md.len() - 1;
    for top in (deg..a.len()).rev() {
        let c = a[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in md.iter().enumerate() {
            let idx = top - deg + k;
            a[idx] = (a[idx] + (p - c) * mk % p) % p;
        }
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn find_factor(p: u32, c: &[u32]) -> Option<Vec<u32>> {
    let deg = c.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut x = code;
            for _ in 0..d {
                divisor.push((x % p as u64) as u32);
                x /= p as u64;
            }
            divisor.push(1);
            let mut rem = c.to_vec();
            poly_rem(p, &mut rem, &divisor);
            if rem[..d].iter().all(|&r| r == 0) {
                return Some(divisor);
            }
        }
    }
    None
}

impl FiniteField {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn summary(&self) -> FieldSummary {
        FieldSummary { p: self.p, m: self.m, q: self.q, modulus: self.modulus.clone() }
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.elements().find(|&b| self.add(a, b) == 0).expect("additive inverse exists")
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        self.elements().find(|&b| self.mul(a, b) == 1)
    }

    /// Coefficients of `a`, constant term first.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut a = a;
        for _ in 0..self.m {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    /// Exhaustive check of the field axioms. Cubic in the order.
    pub fn verify_axioms(&self) -> Result<(), String> {
        let els: Vec<u32> = self.elements().collect();
        for &a in &els {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(format!("identity fails at {a}"));
            }
            if a != 0 && self.inv(a).is_none() {
                return Err(format!("{a} has no multiplicative inverse"));
            }
            for &b in &els {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at ({a}, {b})"));
                }
                for &c in &els {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("additive associativity fails at ({a}, {b}, {c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("multiplicative associativity fails at ({a}, {b}, {c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }
}
