//! Exact arithmetic substrate: rings Z/p^M, truncated group-ring polynomials,
//! prime sieves, primitive roots, discrete logarithms, Teichmuller lifts, and
//! Hensel lifting of unit roots.
//!
//! Everything here is exact. Residues are kept as `u64` with `u128`
//! intermediates; anything that can outgrow that range goes through
//! `num_bigint`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// gcd on u64.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// a^e mod m with u128 intermediates. m must be nonzero and < 2^63.
pub fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    debug_assert!(m > 0 && m < (1 << 63));
    let mut base = (a % m) as u128;
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of a modulo m, if gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r.abs() != 1 {
        return None;
    }
    // old_r may be -1 when inputs were reduced oddly; fold its sign into s.
    let s = old_s * old_r.signum();
    Some(s.rem_euclid(m as i128) as u64)
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Trial-division primality, adequate for the prime sizes in scope.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors with multiplicities.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor(n) {
        let prev = out.clone();
        let mut pe = 1;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

/// Kronecker/Jacobi symbol (a|n) for odd n > 0.
pub fn jacobi(mut a: i64, mut n: u64) -> i64 {
    debug_assert!(n % 2 == 1);
    a = a.rem_euclid(n as i64);
    let mut t = 1i64;
    let mut au = a as u64;
    while au != 0 {
        while au % 2 == 0 {
            au /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut au, &mut n);
        if au % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        au %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// The computation ring Z/p^M for an odd prime p and precision exponent M >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRing {
    p: u64,
    precision: u32,
    modulus: u64,
}

impl ModRing {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 3 {
            return Err(Error::BadPrime(p, "p must be odd".into()));
        }
        if precision == 0 {
            return Err(Error::ResourceLimit("precision exponent must be >= 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..precision {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m < (1 << 62))
                .ok_or_else(|| Error::ResourceLimit(format!("p^M = {p}^{precision} too large")))?;
        }
        Ok(ModRing { p, precision, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.modulus as i64) as u64
    }

    pub fn reduce_bigint(&self, a: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        let r = a.mod_floor(&m);
        r.to_u64().expect("reduced residue fits u64")
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.modulus as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let m = self.modulus as u128;
        ((a as u128 + m - (b as u128 % m)) % m) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.modulus as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        inv_mod(a, self.modulus).ok_or(Error::NotUnit(a, self.modulus))
    }

    /// p-adic valuation of a residue, capped at the precision exponent.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.precision;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }
}

/// Teichmuller lift: the unique (p-1)-st root of unity in Z/p^M congruent to a
/// mod p, obtained by iterating x -> x^p until stable.
pub fn teichmuller(a: u64, ring: &ModRing) -> Result<u64> {
    let p = ring.p();
    if a % p == 0 {
        return Err(Error::NotUnit(a, p));
    }
    let mut x = a % ring.modulus();
    for _ in 0..=ring.precision() {
        let next = ring.pow(x, p);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Unit root of x^2 - a_p x + p in Z/p^M, lifted by Newton iteration from
/// alpha = a_p mod p. Requires p not dividing a_p.
pub fn hensel_unit_root(a_p: i64, ring: &ModRing) -> Result<u64> {
    unit_root_of_hecke_quadratic(a_p, 2, ring)
}

/// Unit root of the Hecke quadratic x^2 - a_p x + p^{k-1} in Z/p^M.
/// The weight-2 case is `hensel_unit_root`.
pub fn unit_root_of_hecke_quadratic(a_p: i64, weight: u32, ring: &ModRing) -> Result<u64> {
    let p = ring.p();
    if a_p.rem_euclid(p as i64) == 0 {
        return Err(Error::NotOrdinary(p));
    }
    let ap = ring.reduce_i64(a_p);
    let mut pk: u64 = 1;
    for _ in 0..(weight - 1) {
        pk = ring.mul(pk, p % ring.modulus());
    }
    // Newton for f(x) = x^2 - ap x + p^{k-1}; f'(x) = 2x - ap is a unit at the
    // start point x = ap since p is odd and p does not divide ap.
    let mut x = ap;
    for _ in 0..=ring.precision() {
        let fx = ring.add(ring.sub(ring.mul(x, x), ring.mul(ap, x)), pk);
        if fx == 0 {
            break;
        }
        let dfx = ring.sub(ring.mul(2, x), ap);
        let step = ring.mul(fx, ring.inv(dfx)?);
        x = ring.sub(x, step);
    }
    let fx = ring.add(ring.sub(ring.mul(x, x), ring.mul(ap, x)), pk);
    debug_assert_eq!(fx, 0);
    Ok(x)
}

/// Scale a rational vector to a coprime integer vector: returns (w, s) with
/// w = s * v, gcd of the entries of w equal to 1, and the first nonzero entry
/// of w positive.
pub fn content_normalize(v: &[BigRational]) -> Result<(Vec<BigInt>, BigRational)> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &scaled {
        g = g.gcd(x);
    }
    let first_nonzero_negative = scaled
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    if first_nonzero_negative {
        g = -g;
    }
    let w: Vec<BigInt> = scaled.iter().map(|x| x / &g).collect();
    let scalar = BigRational::new(denom_lcm, g);
    Ok((w, scalar))
}

/// Integer-vector variant of `content_normalize`.
pub fn content_normalize_int(v: &[BigInt]) -> Result<(Vec<BigInt>, BigRational)> {
    let rats: Vec<BigRational> = v.iter().map(|x| BigRational::from(x.clone())).collect();
    content_normalize(&rats)
}

/// Table of primes up to a bound, each with its smallest primitive root.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
    roots: Vec<u64>,
}

impl PrimeTable {
    pub fn build(bound: u64) -> Self {
        let mut sieve = vec![true; (bound + 1) as usize];
        let mut primes = Vec::new();
        let mut roots = Vec::new();
        for n in 2..=bound as usize {
            if sieve[n] {
                let mut m = n * n;
                while m <= bound as usize {
                    sieve[m] = false;
                    m += n;
                }
                primes.push(n as u64);
                roots.push(if n == 2 {
                    1
                } else {
                    primitive_root(n as u64).expect("sieved prime")
                });
            }
        }
        PrimeTable { bound, primes, roots }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn root_of(&self, ell: u64) -> Option<u64> {
        self.primes
            .binary_search(&ell)
            .ok()
            .map(|i| self.roots[i])
    }
}

/// Smallest positive integer of multiplicative order l-1 modulo the odd prime l.
pub fn primitive_root(ell: u64) -> Result<u64> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == 2 {
        return Ok(1);
    }
    let order = ell - 1;
    let prime_factors: Vec<u64> = factor(order).into_iter().map(|(p, _)| p).collect();
    'candidate: for g in 2..ell {
        for q in &prime_factors {
            if pow_mod(g, order / q, ell) == 1 {
                continue 'candidate;
            }
        }
        return Ok(g);
    }
    unreachable!("every prime has a primitive root")
}

/// Check that eta has multiplicative order l-1 mod l.
pub fn is_primitive_root(eta: u64, ell: u64) -> bool {
    if !is_prime(ell) || eta % ell == 0 {
        return false;
    }
    if ell == 2 {
        return eta % 2 == 1;
    }
    let order = ell - 1;
    factor(order)
        .into_iter()
        .all(|(q, _)| pow_mod(eta, order / q, ell) != 1)
}

/// Baby-step/giant-step discrete logarithm: the exponent e in Z/(l-1) with
/// eta^e = a mod l.
pub fn discrete_log(a: u64, eta: u64, ell: u64) -> Result<u64> {
    if a % ell == 0 {
        return Err(Error::NotUnit(a, ell));
    }
    let a = a % ell;
    let order = ell - 1;
    let m = (order as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(m as usize);
    let mut cur = 1u64;
    for j in 0..m {
        baby.entry(cur).or_insert(j);
        cur = (cur as u128 * eta as u128 % ell as u128) as u64;
    }
    // giant step factor eta^{-m}
    let inv_eta_m = pow_mod(inv_mod(eta, ell).ok_or(Error::NotUnit(eta, ell))?, m, ell);
    let mut gamma = a;
    for i in 0..=m {
        if let Some(j) = baby.get(&gamma) {
            return Ok((i * m + j) % order);
        }
        gamma = (gamma as u128 * inv_eta_m as u128 % ell as u128) as u64;
    }
    Err(Error::NotPrimitiveRoot(eta, ell))
}

/// Discrete-log supplier with a per-prime full-table cache. BSGS answers the
/// first few queries; once a prime is hit more than ceil(sqrt(l)) times the
/// whole log table is built and kept.
#[derive(Debug, Default)]
pub struct DlogCache {
    inner: Mutex<HashMap<(u64, u64), DlogEntry>>,
}

#[derive(Debug)]
struct DlogEntry {
    uses: u64,
    full: Option<Vec<u32>>,
}

impl DlogCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn log(&self, a: u64, eta: u64, ell: u64) -> Result<u64> {
        if a % ell == 0 {
            return Err(Error::NotUnit(a, ell));
        }
        let threshold = (ell as f64).sqrt().ceil() as u64;
        let mut guard = self.inner.lock().expect("dlog cache poisoned");
        let entry = guard
            .entry((ell, eta))
            .or_insert(DlogEntry { uses: 0, full: None });
        entry.uses += 1;
        if entry.full.is_none() && entry.uses > threshold {
            let mut table = vec![0u32; ell as usize];
            let mut cur = 1u64;
            for e in 0..(ell - 1) {
                table[cur as usize] = e as u32;
                cur = (cur as u128 * eta as u128 % ell as u128) as u64;
            }
            entry.full = Some(table);
        }
        if let Some(table) = &entry.full {
            return Ok(table[(a % ell) as usize] as u64);
        }
        drop(guard);
        discrete_log(a, eta, ell)
    }
}

/// Exponent e in Z/p^{n-1} with (1+p)^e = u mod p^n, for u in the one-unit
/// group 1 + pZ/p^n. Computed as a ratio of truncated p-adic logarithms,
/// which is exact over Z/p^{n-1}.
pub fn one_unit_exponent(u: u64, p: u64, n: u32) -> Result<u64> {
    if n == 0 {
        return Ok(0);
    }
    let pn = pow_checked(p, n)?;
    if u % p != 1 {
        return Err(Error::BadModulus(u, p));
    }
    if n == 1 {
        return Ok(0);
    }
    // log(1+x)/p mod p^{n-1} for x in pZ/p^n, carried in Z/p^{n+guard} to
    // absorb valuation lost to the 1/j terms of the series.
    let guard = 3 + n.ilog2();
    let work = BigInt::from(pow_checked_big(p, n + guard));
    let log_div_p = |x: u64| -> BigInt {
        let y = BigInt::from(x) - BigInt::one(); // in pZ
        let mut ypow = BigInt::one();
        let mut acc = BigInt::zero();
        let jmax = (n + guard) as u64 * 2 + 4;
        for j in 1..=jmax {
            ypow = (&ypow * &y).mod_floor(&work);
            // add (-1)^{j+1} y^j / j; write j = p^s j' and divide exactly
            let (s, jp) = strip_p(j, p);
            let mut t = ypow.clone();
            for _ in 0..s {
                t /= p; // exact: v_p(y^j) >= j >= s
            }
            let ext = BigInt::from(jp).extended_gcd(&work);
            debug_assert!(ext.gcd.is_one());
            let inv_jp = ext.x.mod_floor(&work);
            t = (t * inv_jp).mod_floor(&work);
            if j % 2 == 1 {
                acc = (&acc + &t).mod_floor(&work);
            } else {
                acc = (&acc - &t).mod_floor(&work);
            }
        }
        acc / p
    };
    let lu = log_div_p(u % pn);
    let lg = log_div_p((1 + p) % pn);
    let pn1 = pow_checked(p, n - 1)?;
    let target = BigInt::from(pn1);
    let lg_red = lg.mod_floor(&target).to_u64().expect("fits u64");
    let lg_inv = inv_mod(lg_red, pn1).expect("log(1+p)/p is a unit");
    let e = (lu * BigInt::from(lg_inv)).mod_floor(&target);
    Ok(e.to_u64().expect("exponent fits u64"))
}

fn strip_p(mut j: u64, p: u64) -> (u32, u64) {
    let mut s = 0;
    while j % p == 0 {
        j /= p;
        s += 1;
    }
    (s, j)
}

/// p^n as u64, guarded.
pub fn pow_checked(p: u64, n: u32) -> Result<u64> {
    let mut out: u64 = 1;
    for _ in 0..n {
        out = out
            .checked_mul(p)
            .filter(|m| *m < (1 << 62))
            .ok_or_else(|| Error::ResourceLimit(format!("{p}^{n} too large")))?;
    }
    Ok(out)
}

fn pow_checked_big(p: u64, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

/// Element of (Z/p^M)[Gamma] for Gamma cyclic of order p^n with fixed
/// generator gamma. Stored in the gamma-power basis; under gamma = 1 + X this
/// is (Z/p^M)[X]/((1+X)^{p^n} - 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncPoly {
    ring: ModRing,
    level: u32,
    coeffs: Vec<u64>, // coeffs[e] multiplies gamma^e = (1+X)^e
}

impl TruncPoly {
    pub fn zero(ring: ModRing, level: u32) -> Result<Self> {
        let len = pow_checked(ring.p(), level)? as usize;
        if len > 1 << 24 {
            return Err(Error::ResourceLimit(format!("TruncPoly length {len}")));
        }
        Ok(TruncPoly { ring, level, coeffs: vec![0; len] })
    }

    pub fn one(ring: ModRing, level: u32) -> Result<Self> {
        let mut z = Self::zero(ring, level)?;
        z.coeffs[0] = 1 % ring.modulus();
        Ok(z)
    }

    pub fn from_gamma_coeffs(ring: ModRing, level: u32, coeffs: Vec<u64>) -> Result<Self> {
        let mut z = Self::zero(ring, level)?;
        if coeffs.len() != z.coeffs.len() {
            return Err(Error::BadModulus(coeffs.len() as u64, z.coeffs.len() as u64));
        }
        for (dst, c) in z.coeffs.iter_mut().zip(coeffs) {
            *dst = c % ring.modulus();
        }
        Ok(z)
    }

    /// Build from coefficients of powers of X (degree < p^level).
    pub fn from_x_coeffs(ring: ModRing, level: u32, xs: &[u64]) -> Result<Self> {
        let mut acc = Self::zero(ring, level)?;
        // X = gamma - 1; accumulate xs[j] * (gamma-1)^j by Horner.
        let mut out = Self::zero(ring, level)?;
        for &c in xs.iter().rev() {
            out = out.mul_by_x()?;
            out.coeffs[0] = ring.add(out.coeffs[0], c % ring.modulus());
        }
        acc.coeffs.copy_from_slice(&out.coeffs);
        Ok(acc)
    }

    pub fn ring(&self) -> &ModRing {
        &self.ring
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn gamma_coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn set_gamma_coeff(&mut self, e: usize, c: u64) {
        self.coeffs[e] = c % self.ring.modulus();
    }

    pub fn add_to_gamma_coeff(&mut self, e: usize, c: u64) {
        self.coeffs[e] = self.ring.add(self.coeffs[e], c);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ring.add(a, b))
            .collect();
        TruncPoly { ring: self.ring, level: self.level, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ring.sub(a, b))
            .collect();
        TruncPoly { ring: self.ring, level: self.level, coeffs }
    }

    pub fn scale(&self, c: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(a, c)).collect();
        TruncPoly { ring: self.ring, level: self.level, coeffs }
    }

    /// Cyclic convolution: multiplication in (Z/p^M)[Gamma].
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level);
        let d = self.coeffs.len();
        let mut out = vec![0u64; d];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let mut k = i + j;
                if k >= d {
                    k -= d;
                }
                out[k] = self.ring.add(out[k], self.ring.mul(a, b));
            }
        }
        TruncPoly { ring: self.ring, level: self.level, coeffs: out }
    }

    /// Multiply by X = gamma - 1.
    pub fn mul_by_x(&self) -> Result<Self> {
        let d = self.coeffs.len();
        let mut out = Self::zero(self.ring, self.level)?;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let shifted = (e + 1) % d;
            out.coeffs[shifted] = self.ring.add(out.coeffs[shifted], c);
            out.coeffs[e] = self.ring.sub(out.coeffs[e], c);
        }
        Ok(out)
    }

    /// Reduce to a lower level: gamma maps to the generator of the smaller
    /// cyclic group (exponents mod p^new_level). This is the projection of
    /// group rings along Gamma_n -> Gamma_m.
    pub fn reduce_level(&self, new_level: u32) -> Result<Self> {
        if new_level > self.level {
            return Err(Error::NotDivisor(
                pow_checked(self.ring.p(), new_level)?,
                pow_checked(self.ring.p(), self.level)?,
            ));
        }
        let mut out = Self::zero(self.ring, new_level)?;
        let d = out.coeffs.len();
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out.coeffs[e % d] = self.ring.add(out.coeffs[e % d], c);
            }
        }
        Ok(out)
    }

    /// Coefficients in the X-power basis (degree < p^level). Quadratic in the
    /// length; intended for small polynomials and tests.
    pub fn x_coeffs(&self) -> Vec<u64> {
        let d = self.coeffs.len();
        let ring = &self.ring;
        let mut out = vec![0u64; d];
        // (1+X)^e = sum_j binom(e, j) X^j; accumulate rows of Pascal's triangle.
        let mut binom = vec![0u64; d];
        binom[0] = 1 % ring.modulus();
        for (e, &c) in self.coeffs.iter().enumerate() {
            if e > 0 {
                // binom row e from row e-1, in place from the top
                for j in (1..=e.min(d - 1)).rev() {
                    binom[j] = ring.add(binom[j], binom[j - 1]);
                }
            }
            if c != 0 {
                for j in 0..=e.min(d - 1) {
                    out[j] = ring.add(out[j], ring.mul(c, binom[j]));
                }
            }
        }
        out
    }

    /// Reduce coefficients mod p (precision 1 view).
    pub fn reduce_mod_p(&self) -> Result<TruncPoly> {
        let ring1 = ModRing::new(self.ring.p(), 1)?;
        let coeffs = self.coeffs.iter().map(|&c| c % self.ring.p()).collect();
        Ok(TruncPoly { ring: ring1, level: self.level, coeffs })
    }

    /// X-adic valuation of the reduction mod p: the multiplicity of the root
    /// gamma = 1 of the mod-p coefficient polynomial. None means identically
    /// zero mod p.
    pub fn ord_x_mod_p(&self) -> Option<usize> {
        let p = self.ring.p();
        let mut f: Vec<u64> = self.coeffs.iter().map(|&c| c % p).collect();
        if f.iter().all(|&c| c == 0) {
            return None;
        }
        let mut ord = 0;
        // Divide by (Y - 1) in F_p[Y]/(Y^{p^n} - 1) = F_p[Y]/(Y-1)^{p^n}.
        // f is divisible by (Y-1) iff f(1) = 0; the quotient of the plain
        // polynomial division stays in the ring.
        loop {
            let sum: u64 = f.iter().fold(0, |acc, &c| (acc + c) % p);
            if sum != 0 {
                return Some(ord);
            }
            // synthetic division of f (as plain poly of degree < d) by (Y - 1)
            let d = f.len();
            let mut q = vec![0u64; d];
            let mut carry = 0u64;
            for e in (0..d).rev() {
                carry = (carry + f[e]) % p;
                if e > 0 {
                    q[e - 1] = carry;
                }
            }
            f = q;
            ord += 1;
            if f.iter().all(|&c| c == 0) {
                // f was exactly (Y-1)^ord * unit-free tail that vanished
                return Some(ord);
            }
            if ord > self.coeffs.len() {
                return None;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primitive_roots_small() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        // exhaustive order check: 2 has order 3 mod 7, 3 has order 6
        assert_eq!(pow_mod(2, 3, 7), 1);
        for e in 1..6 {
            if e < 6 {
                assert!(pow_mod(3, e, 7) != 1 || e == 6);
            }
        }
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(11).unwrap(), 2);
        assert!(matches!(primitive_root(15), Err(Error::NotPrime(15))));
    }

    #[test]
    fn discrete_log_examples() {
        assert_eq!(discrete_log(1, 2, 11).unwrap(), 0);
        assert_eq!(discrete_log(8, 2, 11).unwrap(), 3);
        // exhaust powers of 2 mod 11: 2^7 = 128 = 11*11 + 7
        assert_eq!(pow_mod(2, 7, 11), 7);
        assert_eq!(discrete_log(7, 2, 11).unwrap(), 7);
        assert!(matches!(discrete_log(22, 2, 11), Err(Error::NotUnit(_, _))));
    }

    proptest! {
        #[test]
        fn discrete_log_additivity(a in 1u64..11, b in 1u64..11) {
            let la = discrete_log(a, 2, 11).unwrap();
            let lb = discrete_log(b, 2, 11).unwrap();
            let lab = discrete_log(a * b % 11, 2, 11).unwrap();
            prop_assert_eq!((la + lb) % 10, lab);
        }
    }

    #[test]
    fn teichmuller_examples() {
        let ring = ModRing::new(5, 2).unwrap();
        assert_eq!(teichmuller(1, &ring).unwrap(), 1);
        assert_eq!(teichmuller(4, &ring).unwrap(), 24); // omega(-1) = -1
        // iterate 2^5 = 32 = 7 mod 25, 7^5 = 16807 = 672*25 + 7
        assert_eq!(teichmuller(2, &ring).unwrap(), 7);
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        let ring = ModRing::new(7, 4).unwrap();
        for a in 1..7 {
            let w = teichmuller(a, &ring).unwrap();
            assert_eq!(ring.pow(w, 6), 1);
            assert_eq!(w % 7, a);
        }
    }

    #[test]
    fn hensel_examples() {
        let r1 = ModRing::new(7, 1).unwrap();
        assert_eq!(hensel_unit_root(-2, &r1).unwrap(), 5);
        let r2 = ModRing::new(7, 2).unwrap();
        let alpha = hensel_unit_root(-2, &r2).unwrap();
        assert_eq!(alpha, 26); // 26^2 + 2*26 + 7 = 735 = 15 * 49
        assert!(matches!(hensel_unit_root(7, &r2), Err(Error::NotOrdinary(7))));
    }

    #[test]
    fn hensel_unit_times_cofactor_is_p() {
        let ring = ModRing::new(7, 5).unwrap();
        let alpha = hensel_unit_root(-2, &ring).unwrap();
        let beta = ring.sub(ring.reduce_i64(-2), alpha);
        assert_eq!(ring.mul(alpha, beta), 7);
    }

    #[test]
    fn content_normalize_examples() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let v = vec![half.clone(), half * BigInt::from(3)];
        let (w, s) = content_normalize(&v).unwrap();
        assert_eq!(w, vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(s, BigRational::from(BigInt::from(2)));

        let v = vec![
            BigRational::from(BigInt::from(-2)),
            BigRational::from(BigInt::from(-4)),
        ];
        let (w, s) = content_normalize(&v).unwrap();
        assert_eq!(w, vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(s, BigRational::new(BigInt::from(-1), BigInt::from(2)));

        let v = vec![
            BigRational::zero(),
            BigRational::new(BigInt::from(5), BigInt::from(3)),
            BigRational::new(BigInt::from(10), BigInt::from(3)),
        ];
        let (w, s) = content_normalize(&v).unwrap();
        assert_eq!(w, vec![BigInt::zero(), BigInt::from(1), BigInt::from(2)]);
        assert_eq!(s, BigRational::new(BigInt::from(3), BigInt::from(5)));

        assert!(matches!(
            content_normalize(&[BigRational::zero()]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn content_normalize_idempotent() {
        let v = vec![
            BigRational::new(BigInt::from(6), BigInt::from(4)),
            BigRational::new(BigInt::from(-9), BigInt::from(2)),
        ];
        let (w, _) = content_normalize(&v).unwrap();
        let (w2, s2) = content_normalize_int(&w).unwrap();
        assert_eq!(w, w2);
        assert_eq!(s2, BigRational::one());
    }

    #[test]
    fn trunc_poly_ring_laws() {
        let ring = ModRing::new(5, 3).unwrap();
        let mut a = TruncPoly::zero(ring, 1).unwrap();
        a.set_gamma_coeff(0, 3);
        a.set_gamma_coeff(2, 7);
        let mut b = TruncPoly::zero(ring, 1).unwrap();
        b.set_gamma_coeff(1, 2);
        b.set_gamma_coeff(4, 11);
        let mut c = TruncPoly::zero(ring, 1).unwrap();
        c.set_gamma_coeff(0, 9);
        c.set_gamma_coeff(3, 1);

        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));

        // gamma^{p^n} = 1: multiplying gamma^{p-1} by gamma wraps to 1
        let mut g = TruncPoly::zero(ring, 1).unwrap();
        g.set_gamma_coeff(1, 1);
        let mut acc = TruncPoly::one(ring, 1).unwrap();
        for _ in 0..5 {
            acc = acc.mul(&g);
        }
        assert_eq!(acc, TruncPoly::one(ring, 1).unwrap());
    }

    #[test]
    fn trunc_poly_x_basis_round_trip() {
        let ring = ModRing::new(7, 2).unwrap();
        let xs = vec![5u64, 0, 3, 48, 1, 0, 11];
        let f = TruncPoly::from_x_coeffs(ring, 1, &xs).unwrap();
        assert_eq!(f.x_coeffs(), xs);
    }

    #[test]
    fn one_plus_x_pow_pn_is_x_pn_mod_p() {
        // (1+X)^{p^n} - 1 reduces to X^{p^n} mod p: all middle binomials
        // binom(p^n, j) vanish mod p.
        let ring = ModRing::new(3, 1).unwrap();
        let g = TruncPoly::from_x_coeffs(ring, 2, &[1, 1]).unwrap(); // 1 + X
        let mut acc = TruncPoly::one(ring, 2).unwrap();
        for _ in 0..9 {
            acc = acc.mul(&g);
        }
        // in the ring, (1+X)^{p^n} = 1, consistent with X^{p^n} = 0 there
        assert_eq!(acc, TruncPoly::one(ring, 2).unwrap());
    }

    #[test]
    fn ord_x_examples() {
        let ring = ModRing::new(7, 2).unwrap();
        let one = TruncPoly::one(ring, 2).unwrap();
        assert_eq!(one.ord_x_mod_p(), Some(0));

        // X^3 * (1 + X + X^2)
        let mut xs = vec![0u64; 49];
        xs[3] = 1;
        xs[4] = 1;
        xs[5] = 1;
        let f = TruncPoly::from_x_coeffs(ring, 2, &xs).unwrap();
        assert_eq!(f.ord_x_mod_p(), Some(3));

        let zero_mod_p = TruncPoly::from_x_coeffs(ring, 2, &[7, 14, 21]).unwrap();
        assert_eq!(zero_mod_p.ord_x_mod_p(), None);
    }

    #[test]
    fn one_unit_exponent_round_trip() {
        let p = 7u64;
        let n = 4u32;
        let pn = pow_checked(p, n).unwrap();
        for e in [0u64, 1, 2, 5, 48, 342] {
            let u = pow_mod(1 + p, e, pn);
            let got = one_unit_exponent(u, p, n).unwrap();
            assert_eq!(got, e % pow_checked(p, n - 1).unwrap());
        }
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 19] {
            for a in 0..p as i64 {
                let j = jacobi(a, p);
                let euler = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expect = if euler == 0 {
                    0
                } else if euler == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(j, expect, "a={a} p={p}");
            }
        }
    }
}
